#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "varimesh/mesh_io.hpp"

using namespace varimesh;
using namespace testutil;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("obj: single triangle and quad fan split") {
  const std::string tri = temp_path("vm_tri.obj");
  write_text_file(tri, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  auto m = load_mesh(tri);
  CHECK(m.vertex_count() == 3);
  CHECK(m.face_count() == 1);

  const std::string quad = temp_path("vm_quad.obj");
  write_text_file(quad, "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n");
  auto q = load_mesh(quad);
  CHECK(q.vertex_count() == 4);
  CHECK(q.face_count() == 2);
}

TEST_CASE("obj: attribute references and negative indices") {
  const std::string p = temp_path("vm_attr.obj");
  write_text_file(p,
                  "v 0 0 0\nv 1 0 0\nv 0 1 0\nvt 0 0\nvn 0 0 1\n"
                  "f 1/1/1 2/1/1 3/1/1\n");
  auto attr = load_mesh(p);
  CHECK(attr.face_count() == 1);
  write_text_file(p, "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3/1 -2/1 -1/1\n");
  auto m = load_mesh(p);
  CHECK(m.face_count() == 1);
  CHECK(m.faces[0] == std::array<int, 3>{0, 1, 2});
}

TEST_CASE("round trip preserves coordinates and connectivity") {
  Rng rng(3);
  TriangleMesh mesh = tetrahedron();
  for (auto& v : mesh.vertices) v += 1e-3 * rng.point();  // irrational-ish coordinates

  for (MeshFormat fmt : {MeshFormat::Obj, MeshFormat::PlyAscii, MeshFormat::PlyBinary}) {
    const std::string path =
        temp_path(fmt == MeshFormat::Obj ? "vm_rt.obj" : "vm_rt.ply");
    write_mesh(mesh, path, fmt);
    auto back = load_mesh(path);
    REQUIRE(back.vertex_count() == mesh.vertex_count());
    REQUIRE(back.face_count() == mesh.face_count());
    for (int v = 0; v < mesh.vertex_count(); ++v)
      CHECK((back.vertices[v] - mesh.vertices[v]).norm() == 0.0);  // 17 digits = exact
    for (int f = 0; f < mesh.face_count(); ++f) CHECK(back.faces[f] == mesh.faces[f]);
  }
}

TEST_CASE("ply: per-face colors round trip, both flavors") {
  TriangleMesh mesh = two_triangle_square();
  mesh.face_colors = {{10, 200, 31}, {255, 0, 17}};
  for (MeshFormat fmt : {MeshFormat::PlyAscii, MeshFormat::PlyBinary}) {
    const std::string path = temp_path("vm_color.ply");
    write_mesh(mesh, path, fmt);
    auto back = load_mesh(path);
    REQUIRE(back.face_colors.size() == 2);
    CHECK(back.face_colors[0] == mesh.face_colors[0]);
    CHECK(back.face_colors[1] == mesh.face_colors[1]);
  }
}

TEST_CASE("ply reader accepts float32 vertex data") {
  const std::string path = temp_path("vm_f32.ply");
  write_text_file(path,
                  "ply\nformat ascii 1.0\nelement vertex 3\n"
                  "property float x\nproperty float y\nproperty float z\n"
                  "element face 1\nproperty list uchar int vertex_indices\n"
                  "end_header\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");
  auto m = load_mesh(path);
  CHECK(m.vertex_count() == 3);
  CHECK(m.face_count() == 1);
}

TEST_CASE("load rejects non-manifold and empty files") {
  const std::string p = temp_path("vm_bad.obj");
  write_text_file(p, "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 0 0 1\nv 0 -1 0\n"
                     "f 1 2 3\nf 1 2 4\nf 1 2 5\n");
  CHECK_THROWS_WITH_AS(load_mesh(p), doctest::Contains("non-manifold"), std::runtime_error);

  write_text_file(p, "# nothing here\n");
  CHECK_THROWS(load_mesh(p));

  CHECK_THROWS(load_mesh(temp_path("vm_does_not_exist.obj")));
  CHECK_THROWS(load_mesh(temp_path("vm_unknown.stl")));
}

TEST_CASE("polygonal obj: pentagon face record") {
  PolygonalMesh poly;
  poly.vertices = {{0, 0, 0}, {2, 0, 0}, {3, 2, 0}, {1, 3, 0}, {-1, 2, 0}};
  poly.polygons = {{0, 1, 2, 3, 4}};
  const std::string path = temp_path("vm_penta.obj");
  write_polygonal_mesh(poly, path);

  std::ifstream in(path);
  std::string line, face_line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] == 'f') face_line = line;
  CHECK(face_line == "f 1 2 3 4 5");

  auto back = load_polygonal_obj(path);
  REQUIRE(back.polygon_count() == 1);
  CHECK(back.polygons[0].size() == 5);
}

TEST_CASE("partition coloring is deterministic") {
  CHECK(cluster_color(7) == cluster_color(7));
  CHECK(cluster_color(7) != cluster_color(8));
}

TEST_CASE("unwritable path errors") {
  TriangleMesh mesh = tetrahedron();
  CHECK_THROWS(write_mesh(mesh, "/nonexistent_dir_xyz/out.obj"));
}
