#include "varimesh/clean.hpp"

#include <algorithm>
#include <limits>

#include "varimesh/mesh.hpp"

namespace varimesh {

namespace {

// Edge-connected components of one cluster's face set (faces ascending).
std::vector<std::vector<int>> cluster_components(const std::vector<int>& faces,
                                                 const std::vector<int>& f2c,
                                                 const FaceAdjacency& adj) {
  std::vector<std::vector<int>> comps;
  if (faces.empty()) return comps;
  const int cluster = f2c[faces.front()];
  std::vector<char> seen(faces.size(), 0);
  auto local_index = [&faces](int face) {
    auto it = std::lower_bound(faces.begin(), faces.end(), face);
    return it != faces.end() && *it == face ? static_cast<int>(it - faces.begin()) : -1;
  };
  std::vector<int> stack;
  for (size_t s = 0; s < faces.size(); ++s) {
    if (seen[s]) continue;
    std::vector<int> comp;
    seen[s] = 1;
    stack.push_back(faces[s]);
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      comp.push_back(f);
      for (int k = 0; k < 3; ++k) {
        int g = adj.neighbor[f][k];
        if (g < 0 || f2c[g] != cluster) continue;
        int li = local_index(g);
        if (li >= 0 && !seen[li]) {
          seen[li] = 1;
          stack.push_back(g);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

ClusterMoments faces_moments(const std::vector<int>& faces,
                             const std::vector<TriangleMoments>& face_moments) {
  ClusterMoments m;
  for (int f : faces) m = merge(m, ClusterMoments::from_triangle(face_moments[f]));
  return m;
}

}  // namespace

std::vector<int> cluster_component_counts(const Partition& partition, const FaceAdjacency& adj) {
  auto lists = partition.face_lists();
  std::vector<int> counts(partition.cluster_count(), 0);
  for (int c = 0; c < partition.cluster_count(); ++c)
    counts[c] =
        static_cast<int>(cluster_components(lists[c], partition.face_to_cluster, adj).size());
  return counts;
}

CleanResult clean(Partition& partition, const FaceAdjacency& adj,
                  const std::vector<TriangleMoments>& face_moments, const EnergyParams& params) {
  CleanResult result;
  auto& f2c = partition.face_to_cluster;
  auto& clusters = partition.clusters;

  const int max_rounds = 100;
  for (int round = 0; round < max_rounds; ++round) {
    ++result.rounds;
    int repairs_this_round = 0;
    auto lists = partition.face_lists();

    for (int c = 0; c < partition.cluster_count(); ++c) {
      auto comps = cluster_components(lists[c], f2c, adj);
      if (comps.size() <= 1) continue;

      auto area_of = [&face_moments](const std::vector<int>& faces) {
        double a = 0.0;
        for (int f : faces) a += face_moments[f].area;
        return a;
      };

      // main component: largest area, tie most faces, tie lowest face id
      int main_idx = 0;
      double main_area = area_of(comps[0]);
      for (size_t k = 1; k < comps.size(); ++k) {
        double a = area_of(comps[k]);
        const auto& cand = comps[k];
        const auto& cur = comps[main_idx];
        if (a > main_area ||
            (a == main_area && (cand.size() > cur.size() ||
                                (cand.size() == cur.size() && cand.front() < cur.front())))) {
          main_idx = static_cast<int>(k);
          main_area = a;
        }
      }

      for (size_t k = 0; k < comps.size(); ++k) {
        if (static_cast<int>(k) == main_idx) continue;
        const auto& hanging = comps[k];
        ClusterMoments hm = faces_moments(hanging, face_moments);

        // foreign clusters edge-adjacent to the hanging component
        std::vector<int> foreign;
        for (int f : hanging) {
          for (int e = 0; e < 3; ++e) {
            int g = adj.neighbor[f][e];
            if (g >= 0 && f2c[g] != c) foreign.push_back(f2c[g]);
          }
        }
        std::sort(foreign.begin(), foreign.end());
        foreign.erase(std::unique(foreign.begin(), foreign.end()), foreign.end());
        if (foreign.empty()) {
          ++result.unresolved;
          continue;
        }

        int best = -1;
        double best_cost = std::numeric_limits<double>::infinity();
        for (int nbr : foreign) {
          double cost = merge_cost(hm, clusters[nbr], params);
          if (cost < best_cost) {
            best_cost = cost;
            best = nbr;
          }
        }

        clusters[best] = merge(clusters[best], hm);
        clusters[c] = split(clusters[c], hm);
        for (int f : hanging) f2c[f] = best;
        ++result.components_merged;
        result.faces_moved += static_cast<long>(hanging.size());
        ++repairs_this_round;
      }
    }
    if (repairs_this_round == 0) break;
  }
  return result;
}

}  // namespace varimesh
