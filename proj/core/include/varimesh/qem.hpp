#pragma once

#include <vector>

#include "varimesh/mesh.hpp"

namespace varimesh {

/// Target of the simplification: an exact vertex or face count.
struct QemTarget {
  enum class Kind { Vertices, Faces };
  Kind kind = Kind::Vertices;
  int count = 0;

  static QemTarget vertices(int n) { return {Kind::Vertices, n}; }
  static QemTarget faces(int n) { return {Kind::Faces, n}; }
};

struct QemResult {
  TriangleMesh mesh;
  long collapses = 0;
  bool reached_target = true;  // false: stopped early (manifoldness/flip guards)
  /// cumulative quadric error after each collapse (non-decreasing)
  std::vector<double> error_trace;
};

/// Quadric-error edge collapse with the optimal-position solve (fallback to
/// the better of the endpoints/midpoint when the quadric system is singular).
/// Collapses that would flip a surviving face, break the edge-link condition,
/// or overshoot a face target are rejected. Open boundaries are stabilized by
/// perpendicular constraint planes on boundary edges. Stops exactly at the
/// target when reachable, otherwise as close as the guards allow.
QemResult qem_simplify(const TriangleMesh& mesh, const QemTarget& target);

}  // namespace varimesh
