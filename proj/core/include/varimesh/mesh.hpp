#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "varimesh/geometry.hpp"

namespace varimesh {

/// Indexed triangle mesh. Faces are counter-clockwise vertex index triples.
/// Per-face colors are optional (empty, or one RGB triple per face).
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<std::array<std::uint8_t, 3>> face_colors;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int face_count() const { return static_cast<int>(faces.size()); }

  Box3 bounds() const;
  double bbox_diagonal() const { return bounds().diagonal(); }

  /// Checks index validity, repeated vertices inside a face, edge manifoldness
  /// (every edge shared by at most two faces) and a nonzero bounding box.
  /// Throws std::runtime_error describing the first violation found.
  void validate() const;
};

/// Per-face edge neighbors. Slot k of face f is the edge from face vertex k to
/// face vertex (k+1)%3; the stored value is the face on the other side of that
/// edge, or kNoFace on a mesh boundary.
struct FaceAdjacency {
  static constexpr int kNoFace = -1;
  std::vector<std::array<int, 3>> neighbor;

  int face_count() const { return static_cast<int>(neighbor.size()); }
  bool is_boundary_edge(int face, int slot) const { return neighbor[face][slot] == kNoFace; }
  bool has_boundary_edge(int face) const {
    const auto& n = neighbor[face];
    return n[0] == kNoFace || n[1] == kNoFace || n[2] == kNoFace;
  }
};

/// Builds symmetric edge adjacency for a validated mesh.
FaceAdjacency build_adjacency(const TriangleMesh& mesh);

/// Number of edge-connected face components.
int count_face_components(const TriangleMesh& mesh, const FaceAdjacency& adj);

/// Exact surface moments of one triangle: area, centroid and the covariance
/// integral U = ∫ (p-centroid)(p-centroid)^T dp over the triangle.
struct TriangleMoments {
  double area = 0.0;
  Vec3 centroid = Vec3::Zero();
  Mat3 cov = Mat3::Zero();
};

/// Closed-form triangle moments. The covariance is the exact integral of the
/// centered outer product over the triangle:
///   U = (A/12) * sum_i (v_i - g)(v_i - g)^T
/// which follows from integrating the second-order barycentric monomials
/// (∫s² = 1/12, ∫st = 1/24 over the unit simplex). Degenerate triangles give
/// zero area and zero covariance.
TriangleMoments triangle_moments(const Vec3& a, const Vec3& b, const Vec3& c);

/// Moments of every face of a mesh.
std::vector<TriangleMoments> all_triangle_moments(const TriangleMesh& mesh);

/// Uniform similarity transform mapping the mesh into a canonical frame:
/// bounding-box center at the origin, bounding-box diagonal scaled to one.
/// Covariance entries scale as length^4, so working in this frame keeps the
/// moment arithmetic well conditioned regardless of the model's units.
struct MeshFrame {
  Vec3 center = Vec3::Zero();
  double scale = 1.0;  // original units per canonical unit (the bbox diagonal)

  Vec3 to_canonical(const Vec3& p) const { return (p - center) / scale; }
  Vec3 to_original(const Vec3& p) const { return p * scale + center; }

  static MeshFrame of(const TriangleMesh& mesh);
};

/// Returns a copy of the mesh mapped into the canonical frame of `frame`.
TriangleMesh to_canonical(const TriangleMesh& mesh, const MeshFrame& frame);

/// Maps mesh vertices back to original coordinates in place.
void to_original(TriangleMesh& mesh, const MeshFrame& frame);

}  // namespace varimesh
