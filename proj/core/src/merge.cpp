#include "varimesh/merge.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>

#include "varimesh/mesh.hpp"

namespace varimesh {

namespace {

struct Candidate {
  double cost;
  int i, j;  // i < j
  std::uint32_t gen_i, gen_j;
};

struct CandidateOrder {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.cost != b.cost) return a.cost > b.cost;  // min-heap on cost
    if (a.i != b.i) return a.i > b.i;
    return a.j > b.j;
  }
};

}  // namespace

MergeResult initial_partition(const FaceAdjacency& adj,
                              const std::vector<TriangleMoments>& face_moments, int n,
                              const EnergyParams& params, const MergeObserver& observer) {
  const int nf = adj.face_count();
  if (nf == 0) throw std::invalid_argument("initial_partition: empty mesh");
  if (n < 1 || n > nf)
    throw std::invalid_argument("initial_partition: cluster count " + std::to_string(n) +
                                " out of range [1, " + std::to_string(nf) + "]");

  // one cluster per face
  std::vector<ClusterMoments> clusters(nf);
  for (int f = 0; f < nf; ++f) clusters[f] = ClusterMoments::from_triangle(face_moments[f]);

  std::vector<std::uint32_t> generation(nf, 0);
  std::vector<char> alive(nf, 1);
  std::vector<int> parent(nf);
  for (int f = 0; f < nf; ++f) parent[f] = f;
  auto find = [&parent](int x) {
    int root = x;
    while (parent[root] != root) root = parent[root];
    while (parent[x] != root) {
      int next = parent[x];
      parent[x] = root;
      x = next;
    }
    return root;
  };

  std::vector<std::vector<int>> nbrs(nf);
  for (int f = 0; f < nf; ++f) {
    for (int k = 0; k < 3; ++k) {
      int g = adj.neighbor[f][k];
      if (g >= 0 && g != f) nbrs[f].push_back(g);
    }
    std::sort(nbrs[f].begin(), nbrs[f].end());
    nbrs[f].erase(std::unique(nbrs[f].begin(), nbrs[f].end()), nbrs[f].end());
  }

  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> heap;
  for (int f = 0; f < nf; ++f)
    for (int g : nbrs[f])
      if (f < g)
        heap.push({merge_cost(clusters[f], clusters[g], params), f, g, 0, 0});

  MergeResult result;
  double total = 0.0;
  for (int f = 0; f < nf; ++f) total += cluster_energy(clusters[f], params);
  result.energy_trace.push_back(total);

  int alive_count = nf;
  std::vector<int> scratch;
  while (alive_count > n && !heap.empty()) {
    Candidate top = heap.top();
    heap.pop();
    if (!alive[top.i] || !alive[top.j] || generation[top.i] != top.gen_i ||
        generation[top.j] != top.gen_j)
      continue;  // stale

    const int i = top.i, j = top.j;
    clusters[i] = merge(clusters[i], clusters[j]);
    alive[j] = 0;
    parent[j] = i;
    ++generation[i];
    --alive_count;
    total += top.cost;
    result.energy_trace.push_back(total);
    ++result.merges;
    if (observer) observer({i, j, top.cost, total});

    // union the neighbor lists, resolving stale ids through the union-find
    scratch.clear();
    for (int list = 0; list < 2; ++list) {
      for (int raw : (list == 0 ? nbrs[i] : nbrs[j])) {
        int k = find(raw);
        if (k != i && alive[k]) scratch.push_back(k);
      }
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    nbrs[i] = scratch;
    nbrs[j].clear();
    nbrs[j].shrink_to_fit();

    for (int k : nbrs[i]) {
      Candidate c;
      c.i = std::min(i, k);
      c.j = std::max(i, k);
      c.gen_i = generation[c.i];
      c.gen_j = generation[c.j];
      c.cost = merge_cost(clusters[i], clusters[k], params);
      heap.push(c);
    }
  }

  if (alive_count > n)
    throw std::invalid_argument(
        "initial_partition: cannot reach " + std::to_string(n) + " clusters; mesh has " +
        std::to_string(alive_count) + " connected components");

  // compact alive clusters to 0..n-1 in ascending id order
  std::vector<int> compact(nf, -1);
  Partition part;
  for (int f = 0; f < nf; ++f) {
    if (alive[f]) {
      compact[f] = part.cluster_count();
      part.clusters.push_back(clusters[f]);
    }
  }
  part.face_to_cluster.resize(nf);
  for (int f = 0; f < nf; ++f) part.face_to_cluster[f] = compact[find(f)];
  result.partition = std::move(part);
  return result;
}

}  // namespace varimesh
