#pragma once

#include <vector>

#include "varimesh/partition.hpp"

namespace varimesh {

struct CleanResult {
  int components_merged = 0;  // hanging components reassigned to a neighbor
  long faces_moved = 0;
  int unresolved = 0;  // hanging components with no foreign neighbor (multi-component meshes)
  int rounds = 0;
};

/// Guarantees each cluster is one edge-connected face set. The largest-area
/// component of each cluster keeps the cluster id (ties: most faces, then
/// lowest face id); every other component is merged into the edge-adjacent
/// foreign cluster with the least merge cost (ties: lowest cluster id), with
/// O(1) moment updates. Repeats until a verification pass finds every cluster
/// connected.
CleanResult clean(Partition& partition, const FaceAdjacency& adj,
                  const std::vector<TriangleMoments>& face_moments, const EnergyParams& params);

/// Number of edge-connected components of each cluster (1 = clean).
std::vector<int> cluster_component_counts(const Partition& partition, const FaceAdjacency& adj);

}  // namespace varimesh
