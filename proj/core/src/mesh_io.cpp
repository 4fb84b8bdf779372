#include "varimesh/mesh_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace varimesh {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::runtime_error(path + ": " + what);
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  if (s.size() < suffix.size()) return false;
  std::string tail = s.substr(s.size() - suffix.size());
  std::transform(tail.begin(), tail.end(), tail.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return tail == suffix;
}

int resolve_obj_index(long idx, size_t count, const std::string& path) {
  // OBJ indices are 1-based; negative values count from the end.
  long resolved = idx > 0 ? idx - 1 : static_cast<long>(count) + idx;
  if (resolved < 0 || resolved >= static_cast<long>(count))
    fail(path, "face index " + std::to_string(idx) + " out of range");
  return static_cast<int>(resolved);
}

void fan_triangulate(const std::vector<int>& poly, TriangleMesh& mesh) {
  for (size_t k = 1; k + 1 < poly.size(); ++k)
    mesh.faces.push_back({poly[0], poly[static_cast<int>(k)], poly[k + 1]});
}

TriangleMesh load_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  TriangleMesh mesh;
  std::string line, tok;
  std::vector<int> poly;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ls >> tok;
    if (tok == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z()))
        fail(path, "bad vertex at line " + std::to_string(lineno));
      mesh.vertices.push_back(p);
    } else if (tok == "f") {
      poly.clear();
      std::string ref;
      while (ls >> ref) {
        // vertex index possibly followed by /vt/vn attributes
        size_t slash = ref.find('/');
        std::string head = slash == std::string::npos ? ref : ref.substr(0, slash);
        long idx = 0;
        auto res = std::from_chars(head.data(), head.data() + head.size(), idx);
        if (res.ec != std::errc() || res.ptr != head.data() + head.size())
          fail(path, "bad face index at line " + std::to_string(lineno));
        poly.push_back(resolve_obj_index(idx, mesh.vertices.size(), path));
      }
      if (poly.size() < 3) fail(path, "face with fewer than 3 vertices at line " + std::to_string(lineno));
      fan_triangulate(poly, mesh);
    }
    // other records (vn, vt, usemtl, o, g, s, ...) are ignored
  }
  return mesh;
}

struct PlyProperty {
  std::string name;
  std::string type;
  bool is_list = false;
  std::string count_type;
};

struct PlyElement {
  std::string name;
  size_t count = 0;
  std::vector<PlyProperty> props;
};

size_t scalar_size(const std::string& t, const std::string& path) {
  if (t == "char" || t == "uchar" || t == "int8" || t == "uint8") return 1;
  if (t == "short" || t == "ushort" || t == "int16" || t == "uint16") return 2;
  if (t == "int" || t == "uint" || t == "int32" || t == "uint32" || t == "float" ||
      t == "float32")
    return 4;
  if (t == "double" || t == "float64" || t == "int64" || t == "uint64") return 8;
  fail(path, "unsupported PLY type " + t);
}

double read_binary_scalar(std::istream& in, const std::string& t, const std::string& path) {
  char buf[8];
  in.read(buf, static_cast<std::streamsize>(scalar_size(t, path)));
  if (!in) fail(path, "truncated PLY data");
  if (t == "char" || t == "int8") return *reinterpret_cast<std::int8_t*>(buf);
  if (t == "uchar" || t == "uint8") return *reinterpret_cast<std::uint8_t*>(buf);
  if (t == "short" || t == "int16") { std::int16_t v; std::memcpy(&v, buf, 2); return v; }
  if (t == "ushort" || t == "uint16") { std::uint16_t v; std::memcpy(&v, buf, 2); return v; }
  if (t == "int" || t == "int32") { std::int32_t v; std::memcpy(&v, buf, 4); return v; }
  if (t == "uint" || t == "uint32") { std::uint32_t v; std::memcpy(&v, buf, 4); return double(v); }
  if (t == "float" || t == "float32") { float v; std::memcpy(&v, buf, 4); return v; }
  if (t == "double" || t == "float64") { double v; std::memcpy(&v, buf, 8); return v; }
  if (t == "int64") { std::int64_t v; std::memcpy(&v, buf, 8); return double(v); }
  if (t == "uint64") { std::uint64_t v; std::memcpy(&v, buf, 8); return double(v); }
  fail(path, "unsupported PLY type " + t);
}

TriangleMesh load_ply(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open file");
  std::string line;
  if (!std::getline(in, line)) fail(path, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ply") fail(path, "missing ply magic");

  bool binary = false;
  std::vector<PlyElement> elements;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    if (tok == "comment" || tok == "obj_info") continue;
    if (tok == "format") {
      std::string fmt;
      ls >> fmt;
      if (fmt == "ascii") binary = false;
      else if (fmt == "binary_little_endian") binary = true;
      else fail(path, "unsupported PLY format " + fmt);
    } else if (tok == "element") {
      PlyElement el;
      ls >> el.name >> el.count;
      elements.push_back(el);
    } else if (tok == "property") {
      if (elements.empty()) fail(path, "property before element");
      PlyProperty p;
      std::string t;
      ls >> t;
      if (t == "list") {
        p.is_list = true;
        ls >> p.count_type >> p.type >> p.name;
      } else {
        p.type = t;
        ls >> p.name;
      }
      elements.back().props.push_back(p);
    } else if (tok == "end_header") {
      break;
    } else if (!tok.empty()) {
      fail(path, "unexpected header token " + tok);
    }
  }

  TriangleMesh mesh;
  auto next_ascii = [&in, &path]() {
    double v;
    if (!(in >> v)) fail(path, "truncated PLY data");
    return v;
  };

  for (const auto& el : elements) {
    if (el.name == "vertex") {
      mesh.vertices.reserve(el.count);
      for (size_t i = 0; i < el.count; ++i) {
        Vec3 p = Vec3::Zero();
        for (const auto& prop : el.props) {
          double v = binary ? read_binary_scalar(in, prop.type, path) : next_ascii();
          if (prop.name == "x") p.x() = v;
          else if (prop.name == "y") p.y() = v;
          else if (prop.name == "z") p.z() = v;
        }
        mesh.vertices.push_back(p);
      }
    } else if (el.name == "face") {
      bool has_color = false;
      for (const auto& prop : el.props)
        if (prop.name == "red") has_color = true;
      mesh.faces.reserve(el.count);
      if (has_color) mesh.face_colors.reserve(el.count);
      std::vector<int> poly;
      for (size_t i = 0; i < el.count; ++i) {
        std::array<std::uint8_t, 3> rgb{0, 0, 0};
        size_t faces_before = mesh.faces.size();
        for (const auto& prop : el.props) {
          if (prop.is_list) {
            double n = binary ? read_binary_scalar(in, prop.count_type, path) : next_ascii();
            poly.clear();
            for (int k = 0; k < static_cast<int>(n); ++k) {
              double v = binary ? read_binary_scalar(in, prop.type, path) : next_ascii();
              long idx = static_cast<long>(v);
              if (idx < 0 || idx >= static_cast<long>(mesh.vertices.size()))
                fail(path, "face vertex index out of range");
              poly.push_back(static_cast<int>(idx));
            }
            if (prop.name == "vertex_indices" || prop.name == "vertex_index") {
              if (poly.size() < 3) fail(path, "face with fewer than 3 vertices");
              fan_triangulate(poly, mesh);
            }
          } else {
            double v = binary ? read_binary_scalar(in, prop.type, path) : next_ascii();
            if (prop.name == "red") rgb[0] = static_cast<std::uint8_t>(v);
            else if (prop.name == "green") rgb[1] = static_cast<std::uint8_t>(v);
            else if (prop.name == "blue") rgb[2] = static_cast<std::uint8_t>(v);
          }
        }
        if (has_color)
          for (size_t f = faces_before; f < mesh.faces.size(); ++f) mesh.face_colors.push_back(rgb);
      }
    } else {
      // skip unknown element payload
      for (size_t i = 0; i < el.count; ++i) {
        for (const auto& prop : el.props) {
          if (prop.is_list) {
            double n = binary ? read_binary_scalar(in, prop.count_type, path) : next_ascii();
            for (int k = 0; k < static_cast<int>(n); ++k)
              binary ? read_binary_scalar(in, prop.type, path) : next_ascii();
          } else {
            binary ? read_binary_scalar(in, prop.type, path) : next_ascii();
          }
        }
      }
    }
  }
  return mesh;
}

void write_obj_impl(const std::vector<Vec3>& vertices,
                    const std::vector<std::vector<int>>& polygons, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(path, "cannot open file for writing");
  char buf[128];
  for (const auto& v : vertices) {
    std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const auto& poly : polygons) {
    out << 'f';
    for (int idx : poly) out << ' ' << idx + 1;
    out << '\n';
  }
  if (!out) fail(path, "write error");
}

void write_ply_impl(const TriangleMesh& mesh, const std::string& path, bool binary) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open file for writing");
  const bool colors = !mesh.face_colors.empty();
  out << "ply\nformat " << (binary ? "binary_little_endian" : "ascii") << " 1.0\n";
  out << "element vertex " << mesh.vertices.size() << "\n";
  const char* coord_type = binary ? "double" : "double";
  out << "property " << coord_type << " x\nproperty " << coord_type << " y\nproperty "
      << coord_type << " z\n";
  out << "element face " << mesh.faces.size() << "\n";
  out << "property list uchar int vertex_indices\n";
  if (colors) out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
  out << "end_header\n";
  if (binary) {
    for (const auto& v : mesh.vertices) {
      double xyz[3] = {v.x(), v.y(), v.z()};
      out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
      std::uint8_t n = 3;
      out.write(reinterpret_cast<const char*>(&n), 1);
      std::int32_t idx[3] = {mesh.faces[f][0], mesh.faces[f][1], mesh.faces[f][2]};
      out.write(reinterpret_cast<const char*>(idx), sizeof(idx));
      if (colors) out.write(reinterpret_cast<const char*>(mesh.face_colors[f].data()), 3);
    }
  } else {
    char buf[128];
    for (const auto& v : mesh.vertices) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
      out << buf;
    }
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
      out << "3 " << mesh.faces[f][0] << ' ' << mesh.faces[f][1] << ' ' << mesh.faces[f][2];
      if (colors)
        out << ' ' << int(mesh.face_colors[f][0]) << ' ' << int(mesh.face_colors[f][1]) << ' '
            << int(mesh.face_colors[f][2]);
      out << '\n';
    }
  }
  if (!out) fail(path, "write error");
}

}  // namespace

MeshFormat format_from_path(const std::string& path, bool binary_ply) {
  if (has_suffix(path, ".obj")) return MeshFormat::Obj;
  if (has_suffix(path, ".ply")) return binary_ply ? MeshFormat::PlyBinary : MeshFormat::PlyAscii;
  fail(path, "unknown mesh extension (expected .obj or .ply)");
}

TriangleMesh load_mesh(const std::string& path) {
  TriangleMesh mesh =
      format_from_path(path) == MeshFormat::Obj ? load_obj(path) : load_ply(path);
  mesh.validate();
  return mesh;
}

void write_mesh(const TriangleMesh& mesh, const std::string& path, MeshFormat format) {
  switch (format) {
    case MeshFormat::Obj: {
      std::vector<std::vector<int>> polys(mesh.faces.size());
      for (size_t f = 0; f < mesh.faces.size(); ++f)
        polys[f] = {mesh.faces[f][0], mesh.faces[f][1], mesh.faces[f][2]};
      write_obj_impl(mesh.vertices, polys, path);
      break;
    }
    case MeshFormat::PlyAscii:
      write_ply_impl(mesh, path, false);
      break;
    case MeshFormat::PlyBinary:
      write_ply_impl(mesh, path, true);
      break;
  }
}

void write_mesh(const TriangleMesh& mesh, const std::string& path) {
  write_mesh(mesh, path, format_from_path(path));
}

void write_polygonal_mesh(const PolygonalMesh& mesh, const std::string& path) {
  if (format_from_path(path) == MeshFormat::Obj) {
    write_obj_impl(mesh.vertices, mesh.polygons, path);
    return;
  }
  std::ofstream out(path);
  if (!out) fail(path, "cannot open file for writing");
  out << "ply\nformat ascii 1.0\n";
  out << "element vertex " << mesh.vertices.size() << "\n";
  out << "property double x\nproperty double y\nproperty double z\n";
  out << "element face " << mesh.polygons.size() << "\n";
  out << "property list uchar int vertex_indices\n";
  out << "end_header\n";
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const auto& poly : mesh.polygons) {
    out << poly.size();
    for (int idx : poly) out << ' ' << idx;
    out << '\n';
  }
  if (!out) fail(path, "write error");
}

PolygonalMesh load_polygonal_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(path, "cannot open file");
  PolygonalMesh mesh;
  std::string line, tok;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    ls >> tok;
    if (tok == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z())) fail(path, "bad vertex line");
      mesh.vertices.push_back(p);
    } else if (tok == "f") {
      std::vector<int> poly;
      std::string ref;
      while (ls >> ref) {
        size_t slash = ref.find('/');
        std::string head = slash == std::string::npos ? ref : ref.substr(0, slash);
        long idx = std::stol(head);
        poly.push_back(resolve_obj_index(idx, mesh.vertices.size(), path));
      }
      mesh.polygons.push_back(std::move(poly));
    }
  }
  return mesh;
}

std::array<std::uint8_t, 3> cluster_color(int cluster_id) {
  // splitmix-style hash for stable, well spread colors
  std::uint64_t z = static_cast<std::uint64_t>(cluster_id) + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return {static_cast<std::uint8_t>(64 + (z & 0x7f)),
          static_cast<std::uint8_t>(64 + ((z >> 8) & 0x7f)),
          static_cast<std::uint8_t>(64 + ((z >> 16) & 0x7f))};
}

}  // namespace varimesh
