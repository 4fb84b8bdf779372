#include "varimesh/mesh.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace varimesh {

namespace {

// Undirected edge key. Vertex ids fit comfortably in 32 bits.
inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

Box3 TriangleMesh::bounds() const {
  Box3 box;
  for (const auto& v : vertices) box.expand(v);
  return box;
}

void TriangleMesh::validate() const {
  if (vertices.empty() || faces.empty()) throw std::runtime_error("mesh is empty");
  const int nv = vertex_count();
  for (int f = 0; f < face_count(); ++f) {
    const auto& t = faces[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv)
        throw std::runtime_error("face " + std::to_string(f) + " references vertex " +
                                 std::to_string(t[k]) + " out of range");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw std::runtime_error("face " + std::to_string(f) + " has repeated vertices");
  }
  std::unordered_map<std::uint64_t, int> edge_use;
  edge_use.reserve(faces.size() * 3);
  for (int f = 0; f < face_count(); ++f) {
    const auto& t = faces[f];
    for (int k = 0; k < 3; ++k) {
      int count = ++edge_use[edge_key(t[k], t[(k + 1) % 3])];
      if (count > 2)
        throw std::runtime_error("non-manifold edge (" + std::to_string(t[k]) + "," +
                                 std::to_string(t[(k + 1) % 3]) + ") shared by more than 2 faces");
    }
  }
  if (!(bounds().diagonal() > 0.0)) throw std::runtime_error("mesh bounding box is degenerate");
  if (!face_colors.empty() && face_colors.size() != faces.size())
    throw std::runtime_error("face color count does not match face count");
}

FaceAdjacency build_adjacency(const TriangleMesh& mesh) {
  FaceAdjacency adj;
  adj.neighbor.assign(mesh.faces.size(), {FaceAdjacency::kNoFace, FaceAdjacency::kNoFace,
                                          FaceAdjacency::kNoFace});
  // First face+slot seen per edge; second occurrence links both sides.
  std::unordered_map<std::uint64_t, std::pair<int, int>> open_edge;
  open_edge.reserve(mesh.faces.size() * 3);
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& t = mesh.faces[f];
    for (int k = 0; k < 3; ++k) {
      std::uint64_t key = edge_key(t[k], t[(k + 1) % 3]);
      auto it = open_edge.find(key);
      if (it == open_edge.end()) {
        open_edge.emplace(key, std::make_pair(f, k));
      } else {
        auto [g, m] = it->second;
        adj.neighbor[f][k] = g;
        adj.neighbor[g][m] = f;
        open_edge.erase(it);
      }
    }
  }
  return adj;
}

int count_face_components(const TriangleMesh& mesh, const FaceAdjacency& adj) {
  const int nf = mesh.face_count();
  std::vector<char> seen(nf, 0);
  std::vector<int> stack;
  int components = 0;
  for (int f0 = 0; f0 < nf; ++f0) {
    if (seen[f0]) continue;
    ++components;
    seen[f0] = 1;
    stack.push_back(f0);
    while (!stack.empty()) {
      int f = stack.back();
      stack.pop_back();
      for (int k = 0; k < 3; ++k) {
        int g = adj.neighbor[f][k];
        if (g >= 0 && !seen[g]) {
          seen[g] = 1;
          stack.push_back(g);
        }
      }
    }
  }
  return components;
}

TriangleMoments triangle_moments(const Vec3& a, const Vec3& b, const Vec3& c) {
  TriangleMoments m;
  m.area = triangle_area(a, b, c);
  m.centroid = (a + b + c) / 3.0;
  if (m.area > 0.0) {
    const Vec3 u0 = a - m.centroid;
    const Vec3 u1 = b - m.centroid;
    const Vec3 u2 = c - m.centroid;
    m.cov = (m.area / 12.0) *
            (u0 * u0.transpose() + u1 * u1.transpose() + u2 * u2.transpose());
  }
  return m;
}

std::vector<TriangleMoments> all_triangle_moments(const TriangleMesh& mesh) {
  std::vector<TriangleMoments> out(mesh.faces.size());
  for (int f = 0; f < mesh.face_count(); ++f) {
    const auto& t = mesh.faces[f];
    out[f] = triangle_moments(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  }
  return out;
}

MeshFrame MeshFrame::of(const TriangleMesh& mesh) {
  Box3 box = mesh.bounds();
  MeshFrame frame;
  frame.center = box.center();
  frame.scale = box.diagonal() > 0.0 ? box.diagonal() : 1.0;
  return frame;
}

TriangleMesh to_canonical(const TriangleMesh& mesh, const MeshFrame& frame) {
  TriangleMesh out = mesh;
  for (auto& v : out.vertices) v = frame.to_canonical(v);
  return out;
}

void to_original(TriangleMesh& mesh, const MeshFrame& frame) {
  for (auto& v : mesh.vertices) v = frame.to_original(v);
}

}  // namespace varimesh
