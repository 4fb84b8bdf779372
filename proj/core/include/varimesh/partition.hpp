#pragma once

#include <utility>
#include <vector>

#include "varimesh/moments.hpp"

namespace varimesh {

/// Face-to-cluster assignment with per-cluster moments. Clusters are compact
/// ids 0..n-1. Clusters partition the face set: disjoint and covering.
struct Partition {
  std::vector<int> face_to_cluster;
  std::vector<ClusterMoments> clusters;

  int cluster_count() const { return static_cast<int>(clusters.size()); }
  int face_count() const { return static_cast<int>(face_to_cluster.size()); }

  /// Face ids per cluster, derived from the assignment (ascending ids).
  std::vector<std::vector<int>> face_lists() const;

  /// Symmetric cluster neighbor pairs (i < j), derived from face adjacency.
  std::vector<std::pair<int, int>> cluster_adjacency(const struct FaceAdjacency& adj) const;

  /// Recomputes every cluster's moments from its faces by direct summation
  /// with the parallel-axis shift. Used by verification paths and tests.
  std::vector<ClusterMoments> recompute_moments(
      const std::vector<TriangleMoments>& face_moments) const;

  /// Sum of cluster energies (Eq. of the total partition energy).
  double total_energy(const EnergyParams& params) const;

  /// Throws std::runtime_error if the assignment is not a partition
  /// (unassigned face, id out of range, or empty cluster).
  void check_coverage() const;
};

}  // namespace varimesh
