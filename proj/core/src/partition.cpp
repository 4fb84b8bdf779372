#include "varimesh/partition.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "varimesh/mesh.hpp"

namespace varimesh {

std::vector<std::vector<int>> Partition::face_lists() const {
  std::vector<std::vector<int>> lists(clusters.size());
  for (int f = 0; f < face_count(); ++f) lists[face_to_cluster[f]].push_back(f);
  return lists;
}

std::vector<std::pair<int, int>> Partition::cluster_adjacency(const FaceAdjacency& adj) const {
  std::vector<std::pair<int, int>> pairs;
  for (int f = 0; f < face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      int g = adj.neighbor[f][k];
      if (g <= f) continue;  // each undirected edge once
      int a = face_to_cluster[f], b = face_to_cluster[g];
      if (a == b) continue;
      pairs.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

std::vector<ClusterMoments> Partition::recompute_moments(
    const std::vector<TriangleMoments>& face_moments) const {
  // direct summation: area and first moment accumulate linearly, then one
  // parallel-axis shift per face against the final centroid
  const int n = cluster_count();
  std::vector<double> area(n, 0.0);
  std::vector<Vec3> first(n, Vec3::Zero());
  std::vector<long> count(n, 0);
  for (int f = 0; f < face_count(); ++f) {
    int c = face_to_cluster[f];
    area[c] += face_moments[f].area;
    first[c] += face_moments[f].area * face_moments[f].centroid;
    ++count[c];
  }
  std::vector<ClusterMoments> out(n);
  for (int c = 0; c < n; ++c) {
    out[c].area = area[c];
    out[c].face_count = count[c];
    out[c].centroid = area[c] > 0.0 ? Vec3(first[c] / area[c]) : Vec3::Zero();
  }
  for (int f = 0; f < face_count(); ++f) {
    int c = face_to_cluster[f];
    const Vec3 d = face_moments[f].centroid - out[c].centroid;
    out[c].cov += face_moments[f].cov + face_moments[f].area * (d * d.transpose());
  }
  return out;
}

double Partition::total_energy(const EnergyParams& params) const {
  double total = 0.0;
  for (const auto& c : clusters) total += cluster_energy(c, params);
  return total;
}

void Partition::check_coverage() const {
  std::vector<long> counts(clusters.size(), 0);
  for (int f = 0; f < face_count(); ++f) {
    int c = face_to_cluster[f];
    if (c < 0 || c >= cluster_count())
      throw std::runtime_error("face assigned to out-of-range cluster");
    ++counts[c];
  }
  for (int c = 0; c < cluster_count(); ++c) {
    if (counts[c] == 0) throw std::runtime_error("empty cluster " + std::to_string(c));
    if (counts[c] != clusters[c].face_count)
      throw std::runtime_error("cluster face count mismatch at " + std::to_string(c));
  }
}

}  // namespace varimesh
