#pragma once

#include <functional>
#include <vector>

#include "varimesh/partition.hpp"

namespace varimesh {

/// Controls the boundary-triangle swapping loop. A swap is accepted only when
/// it decreases the total energy by more than epsilon_rel times the current
/// total; a strictly positive threshold prevents floating-point livelock on
/// near-zero deltas.
struct SwapSchedule {
  int max_iterations = 100;
  double epsilon_rel = 1e-14;
};

/// One accepted swap, reported to the observer before it is applied.
struct SwapEvent {
  int face = 0;
  int from_cluster = 0;
  int to_cluster = 0;
  double predicted_delta = 0.0;  // E(Ci') + E(Cj') - E(Ci) - E(Cj), negative
};
using SwapObserver = std::function<void(const SwapEvent&)>;

struct SwapResult {
  int iterations = 0;
  long accepted = 0;
  bool converged = false;
  /// total energy before optimization, then after each full pass
  std::vector<double> energy_trace;
};

/// Variational refinement: repeatedly visits boundary triangles (ascending
/// face id) and moves each to the neighboring cluster with the most negative
/// energy change, evaluated against the current state via O(1) moment
/// split/merge updates. Stops when a full pass accepts no swap or after
/// max_iterations passes. A swap that would empty its source cluster is never
/// proposed. The energy trace is non-increasing.
SwapResult optimize(Partition& partition, const FaceAdjacency& adj,
                    const std::vector<TriangleMoments>& face_moments, const EnergyParams& params,
                    const SwapSchedule& schedule = {}, const SwapObserver& observer = {});

}  // namespace varimesh
