#pragma once

#include <string>
#include <vector>

#include "varimesh/mesh.hpp"

namespace varimesh {

enum class MeshFormat { Obj, PlyAscii, PlyBinary };

/// Picks a format from the file extension (.obj or .ply). PLY defaults to
/// binary little-endian on write; readers accept both PLY flavors.
MeshFormat format_from_path(const std::string& path, bool binary_ply = true);

/// Loads .obj (ASCII) or .ply (ASCII / binary little-endian) and validates the
/// result. Polygonal faces with more than 3 sides are fan-triangulated.
/// Throws std::runtime_error on parse failure, empty mesh or non-manifold
/// edges.
TriangleMesh load_mesh(const std::string& path);

/// Writes a triangle mesh. Vertex coordinates are written with 17 significant
/// digits in the text formats, so load(write(m)) reproduces them exactly; the
/// binary PLY stores float64. PLY carries per-face uchar red/green/blue when
/// the mesh has face colors.
void write_mesh(const TriangleMesh& mesh, const std::string& path, MeshFormat format);
void write_mesh(const TriangleMesh& mesh, const std::string& path);

/// General polygon mesh with per-polygon vertex cycles; produced by the
/// polygonal extraction stage.
struct PolygonalMesh {
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> polygons;
  std::vector<int> polygon_cluster;  // owning cluster id per polygon (may be empty)

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int polygon_count() const { return static_cast<int>(polygons.size()); }
};

/// Writes a polygonal mesh as OBJ (n-gon face records) or ASCII PLY.
void write_polygonal_mesh(const PolygonalMesh& mesh, const std::string& path);

/// Loads a polygonal OBJ without triangulating the faces.
PolygonalMesh load_polygonal_obj(const std::string& path);

/// Deterministic distinct-ish RGB for cluster visualization.
std::array<std::uint8_t, 3> cluster_color(int cluster_id);

}  // namespace varimesh
