#pragma once

#include <functional>
#include <vector>

#include "varimesh/partition.hpp"

namespace varimesh {

/// One executed merge, reported to the observer: clusters (i, j) merged at
/// `cost`, with `total_energy` the partition energy after the merge.
struct MergeEvent {
  int cluster_i = 0;
  int cluster_j = 0;
  double cost = 0.0;
  double total_energy = 0.0;
};
using MergeObserver = std::function<void(const MergeEvent&)>;

struct MergeResult {
  Partition partition;
  /// total energy before any merge, then after each executed merge
  std::vector<double> energy_trace;
  long merges = 0;
};

/// Initial partition by greedy least-cost pair merging, from one cluster per
/// face down to n clusters. Candidate pairs live in a lazy-deletion heap keyed
/// by merge cost (ties: smaller (min id, max id) pair first); stale candidates
/// are detected by per-cluster generation stamps. Only edge-adjacent clusters
/// merge, so every cluster stays edge-connected.
///
/// Throws std::invalid_argument when n is out of range or smaller than the
/// number of connected components of the mesh.
MergeResult initial_partition(const FaceAdjacency& adj,
                              const std::vector<TriangleMoments>& face_moments, int n,
                              const EnergyParams& params, const MergeObserver& observer = {});

}  // namespace varimesh
