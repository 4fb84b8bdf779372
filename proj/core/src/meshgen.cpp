#include "varimesh/meshgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace varimesh {

namespace {

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// boundary loop walking

struct DirectedEdge {
  int face = -1;
  int slot = -1;  // edge from face vertex slot -> slot+1
};

// Is edge (f, k) on the boundary of f's cluster (different cluster or mesh
// boundary on the other side)?
inline bool is_cluster_boundary(const FaceAdjacency& adj, const std::vector<int>& f2c, int f,
                                int k) {
  const int g = adj.neighbor[f][k];
  return g < 0 || f2c[g] != f2c[f];
}

// The boundary edge that follows (f, k) along the cluster boundary, pivoting
// around the head vertex through in-cluster faces.
DirectedEdge next_boundary_edge(const TriangleMesh& mesh, const FaceAdjacency& adj,
                                const std::vector<int>& f2c, DirectedEdge e) {
  int f = e.face;
  int slot = (e.slot + 1) % 3;  // next edge of the same face, starts at the head
  const int pivot = mesh.faces[e.face][(e.slot + 1) % 3];
  const int guard_max = 3 * mesh.face_count() + 8;
  for (int guard = 0; guard < guard_max; ++guard) {
    if (is_cluster_boundary(adj, f2c, f, slot)) return {f, slot};
    const int g = adj.neighbor[f][slot];
    // twin of (f,slot) in g, then advance one slot to start at the pivot again
    const int head = mesh.faces[f][(slot + 1) % 3];
    int m = -1;
    for (int k = 0; k < 3; ++k)
      if (mesh.faces[g][k] == head && mesh.faces[g][(k + 1) % 3] == pivot) m = k;
    if (m < 0) throw std::runtime_error("adjacency inconsistent while walking cluster boundary");
    f = g;
    slot = (m + 1) % 3;
  }
  throw std::runtime_error("cluster boundary walk did not terminate");
}

// All boundary loops of one cluster as vertex cycles (loops[i][k] is the k-th
// vertex along loop i, following face orientation).
std::vector<std::vector<int>> boundary_loops(const TriangleMesh& mesh, const FaceAdjacency& adj,
                                             const std::vector<int>& f2c,
                                             const std::vector<int>& faces,
                                             std::vector<char>& visited) {
  std::vector<std::vector<int>> loops;
  for (int f : faces) {
    for (int k = 0; k < 3; ++k) {
      if (!is_cluster_boundary(adj, f2c, f, k) || visited[3 * f + k]) continue;
      std::vector<int> loop;
      DirectedEdge start{f, k};
      DirectedEdge e = start;
      do {
        visited[3 * e.face + e.slot] = 1;
        loop.push_back(mesh.faces[e.face][e.slot]);
        e = next_boundary_edge(mesh, adj, f2c, e);
      } while (!(e.face == start.face && e.slot == start.slot));
      loops.push_back(std::move(loop));
    }
  }
  return loops;
}

// ---------------------------------------------------------------------------
// 2D triangulation helpers

struct Tri2 {
  int a, b, c;  // indices into the polygon's local vertex list
};

inline double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& p,
                     const Eigen::Vector2d& q) {
  return (p.x() - o.x()) * (q.y() - o.y()) - (p.y() - o.y()) * (q.x() - o.x());
}

bool point_in_triangle(const Eigen::Vector2d& p, const Eigen::Vector2d& a,
                       const Eigen::Vector2d& b, const Eigen::Vector2d& c, double orient) {
  const double eps = -1e-14;
  return orient * cross2(a, b, p) >= eps && orient * cross2(b, c, p) >= eps &&
         orient * cross2(c, a, p) >= eps;
}

// Ear clipping of a (possibly non-convex) simple polygon. Returns false when
// no ear can be found, which signals a non-simple projection.
bool ear_clip(const std::vector<Eigen::Vector2d>& pts, double orient, std::vector<Tri2>& out) {
  const int n = static_cast<int>(pts.size());
  if (n < 3) return false;
  std::vector<int> ring(n);
  for (int i = 0; i < n; ++i) ring[i] = i;

  out.clear();
  int guard = 0;
  while (ring.size() > 3) {
    const int m = static_cast<int>(ring.size());
    bool clipped = false;
    for (int i = 0; i < m; ++i) {
      const int ia = ring[(i + m - 1) % m], ib = ring[i], ic = ring[(i + 1) % m];
      const auto &a = pts[ia], &b = pts[ib], &c = pts[ic];
      if (orient * cross2(a, b, c) <= 1e-18) continue;  // reflex or collinear corner
      bool contains_other = false;
      for (int j = 0; j < m && !contains_other; ++j) {
        const int iv = ring[j];
        if (iv == ia || iv == ib || iv == ic) continue;
        contains_other = point_in_triangle(pts[iv], a, b, c, orient);
      }
      if (contains_other) continue;
      out.push_back({ia, ib, ic});
      ring.erase(ring.begin() + i);
      clipped = true;
      break;
    }
    if (!clipped) return false;
    if (++guard > 4 * n) return false;
  }
  out.push_back({ring[0], ring[1], ring[2]});
  return true;
}

// In-circle predicate: is d strictly inside the circumcircle of (a,b,c)?
// (a,b,c) counter-clockwise w.r.t. `orient`.
bool in_circumcircle(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c,
                     const Eigen::Vector2d& d, double orient) {
  Eigen::Matrix3d m;
  auto row = [&d](const Eigen::Vector2d& p) {
    return Eigen::Vector3d(p.x() - d.x(), p.y() - d.y(),
                           (p.x() - d.x()) * (p.x() - d.x()) + (p.y() - d.y()) * (p.y() - d.y()));
  };
  m.row(0) = row(a);
  m.row(1) = row(b);
  m.row(2) = row(c);
  return orient * m.determinant() > 1e-24;
}

// Delaunay edge flips restricted to diagonals interior to the polygon. The
// polygon boundary (consecutive ring indices) is constrained.
void delaunay_flips(const std::vector<Eigen::Vector2d>& pts, double orient, int ring_size,
                    std::vector<Tri2>& tris) {
  auto edge_key = [](int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
  };
  auto constrained = [ring_size](int u, int v) {
    int d = std::abs(u - v);
    return d == 1 || d == ring_size - 1;
  };

  const int max_rounds = 4 * static_cast<int>(tris.size()) + 16;
  for (int round = 0; round < max_rounds; ++round) {
    std::unordered_map<std::uint64_t, std::pair<int, int>> edge_tri;  // edge -> (tri, opp vertex)
    bool flipped = false;
    for (int t = 0; t < static_cast<int>(tris.size()) && !flipped; ++t) {
      const int vs[3] = {tris[t].a, tris[t].b, tris[t].c};
      for (int k = 0; k < 3 && !flipped; ++k) {
        const int u = vs[k], v = vs[(k + 1) % 3], w = vs[(k + 2) % 3];
        if (constrained(u, v)) continue;
        auto key = edge_key(u, v);
        auto it = edge_tri.find(key);
        if (it == edge_tri.end()) {
          edge_tri.emplace(key, std::make_pair(t, w));
          continue;
        }
        const int t2 = it->second.first, w2 = it->second.second;
        if (in_circumcircle(pts[u], pts[v], pts[w], pts[w2], orient) ||
            in_circumcircle(pts[v], pts[u], pts[w2], pts[w], orient)) {
          // flip u-v to w-w2 only when the quad is convex (both new triangles
          // keep positive orientation)
          Tri2 n1{w, u, w2}, n2{w2, v, w};
          auto area = [&](const Tri2& tr) {
            return orient * cross2(pts[tr.a], pts[tr.b], pts[tr.c]);
          };
          if (area(n1) > 1e-18 && area(n2) > 1e-18) {
            tris[t] = n1;
            tris[t2] = n2;
            flipped = true;
          }
        }
      }
    }
    if (!flipped) break;
  }
}

// Orthonormal basis of the plane with the given normal.
void plane_basis(const Vec3& normal, Vec3& e1, Vec3& e2) {
  e1 = std::abs(normal.z()) < 0.9 ? normal.cross(Vec3::UnitZ()) : normal.cross(Vec3::UnitX());
  e1.normalize();
  e2 = normal.cross(e1);
}

bool segments_properly_intersect(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                 const Eigen::Vector2d& c, const Eigen::Vector2d& d) {
  const double d1 = cross2(c, d, a), d2 = cross2(c, d, b);
  const double d3 = cross2(a, b, c), d4 = cross2(a, b, d);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
         ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

// Non-adjacent edge pairs must not cross; anchors per polygon are few, the
// quadratic scan is fine.
bool polygon_self_intersects(const std::vector<Eigen::Vector2d>& pts) {
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
      if (segments_properly_intersect(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]))
        return true;
    }
  }
  return false;
}

double polygon_signed_area(const std::vector<Eigen::Vector2d>& pts) {
  double area2 = 0.0;
  const int n = static_cast<int>(pts.size());
  for (int i = 0; i < n; ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % n];
    area2 += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * area2;
}

void triangulate_polygon(const std::vector<int>& poly, const std::vector<Vec3>& vertices,
                         const Vec3& plane_normal, const Vec3& centroid_hint, TriangleMesh& out,
                         int& fan_fallbacks) {
  const int n = static_cast<int>(poly.size());
  if (n < 3) return;
  if (n == 3) {
    out.faces.push_back({poly[0], poly[1], poly[2]});
    return;
  }

  Vec3 e1, e2;
  plane_basis(plane_normal, e1, e2);
  std::vector<Eigen::Vector2d> pts(n);
  Vec3 origin = Vec3::Zero();
  for (int i = 0; i < n; ++i) origin += vertices[poly[i]];
  origin /= n;
  for (int i = 0; i < n; ++i) {
    const Vec3 d = vertices[poly[i]] - origin;
    pts[i] = {d.dot(e1), d.dot(e2)};
  }

  double orient = polygon_signed_area(pts) >= 0.0 ? 1.0 : -1.0;
  std::vector<Tri2> tris;
  bool duplicate = false;
  for (int i = 0; i < n && !duplicate; ++i)
    for (int j = i + 1; j < n; ++j)
      if (poly[i] == poly[j]) { duplicate = true; break; }

  if (!duplicate && !polygon_self_intersects(pts) && ear_clip(pts, orient, tris)) {
    delaunay_flips(pts, orient, n, tris);
    for (const auto& t : tris) out.faces.push_back({poly[t.a], poly[t.b], poly[t.c]});
    return;
  }

  // fan from the anchor closest to the cluster centroid
  ++fan_fallbacks;
  int apex = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double d = (vertices[poly[i]] - centroid_hint).squaredNorm();
    if (d < best) {
      best = d;
      apex = i;
    }
  }
  for (int i = 0; i < n; ++i) {
    int a = poly[apex], b = poly[(apex + i) % n], c = poly[(apex + i + 1) % n];
    if (a == b || b == c || a == c) continue;
    if ((apex + i) % n == apex || (apex + i + 1) % n == apex) continue;
    out.faces.push_back({a, b, c});
  }
}

}  // namespace

// ---------------------------------------------------------------------------

PolygonalExtraction extract_polygonal(const TriangleMesh& mesh, const FaceAdjacency& adj,
                                      const Partition& partition, double boundary_corner_deg) {
  const int nv = mesh.vertex_count();
  const int nc = partition.cluster_count();
  const auto& f2c = partition.face_to_cluster;
  PolygonalExtraction out;

  // per-cluster proxies, oriented by the area-weighted face normals
  {
    std::vector<Vec3> cluster_normal(nc, Vec3::Zero());
    for (int f = 0; f < mesh.face_count(); ++f) {
      const auto& t = mesh.faces[f];
      const Vec3 n = (mesh.vertices[t[1]] - mesh.vertices[t[0]])
                         .cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
      cluster_normal[f2c[f]] += n;  // cross product length is 2x area
    }
    out.proxies.resize(nc);
    out.cluster_centroids.resize(nc);
    for (int c = 0; c < nc; ++c) {
      out.proxies[c] = proxy_plane(partition.clusters[c], cluster_normal[c]);
      out.proxies[c].cluster = c;
      out.cluster_centroids[c] = partition.clusters[c].centroid;
    }
  }

  // incident clusters per vertex
  std::vector<std::vector<int>> vertex_clusters(nv);
  for (int f = 0; f < mesh.face_count(); ++f)
    for (int k = 0; k < 3; ++k) vertex_clusters[mesh.faces[f][k]].push_back(f2c[f]);
  for (auto& cs : vertex_clusters) {
    std::sort(cs.begin(), cs.end());
    cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  }

  // mesh boundary: per-vertex list of boundary edge directions
  std::vector<std::vector<Vec3>> boundary_dirs(nv);
  std::vector<char> on_boundary(nv, 0);
  for (int f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      if (adj.neighbor[f][k] != FaceAdjacency::kNoFace) continue;
      const int a = mesh.faces[f][k], b = mesh.faces[f][(k + 1) % 3];
      on_boundary[a] = on_boundary[b] = 1;
      const Vec3 d = (mesh.vertices[b] - mesh.vertices[a]).normalized();
      boundary_dirs[a].push_back(d);
      boundary_dirs[b].push_back(-d);  // stored pointing away from the vertex
    }
  }

  std::vector<char> is_anchor(nv, 0);
  const double corner_cos = std::cos(boundary_corner_deg * kPi / 180.0);
  for (int v = 0; v < nv; ++v) {
    const int k = static_cast<int>(vertex_clusters[v].size());
    if (k >= 3) {
      is_anchor[v] = 1;
    } else if (on_boundary[v]) {
      if (k >= 2) {
        is_anchor[v] = 1;
      } else if (boundary_dirs[v].size() != 2) {
        is_anchor[v] = 1;  // boundary pinch: keep it
      } else {
        // turn angle between incoming and outgoing boundary direction
        const double c = (-boundary_dirs[v][0]).dot(boundary_dirs[v][1]);
        if (c < corner_cos) is_anchor[v] = 1;
      }
    }
  }

  // boundary loops per cluster; pick the loop with the most anchors
  auto face_lists = partition.face_lists();
  std::vector<char> visited(static_cast<size_t>(mesh.face_count()) * 3, 0);
  std::vector<std::vector<int>> main_loop(nc);
  for (int c = 0; c < nc; ++c) {
    auto loops = boundary_loops(mesh, adj, f2c, face_lists[c], visited);
    if (loops.empty()) throw std::runtime_error("cluster without boundary loop");
    if (loops.size() > 1) ++out.diagnostics.extra_loops;
    size_t best = 0;
    long best_anchors = -1;
    for (size_t l = 0; l < loops.size(); ++l) {
      long a = 0;
      for (int v : loops[l]) a += is_anchor[v];
      if (a > best_anchors || (a == best_anchors && loops[l].size() > loops[best].size())) {
        best_anchors = a;
        best = l;
      }
    }
    main_loop[c] = std::move(loops[best]);
  }

  // promote extra anchors on loops with fewer than three
  for (int c = 0; c < nc; ++c) {
    const auto& loop = main_loop[c];
    std::vector<int> anchors;
    for (int v : loop)
      if (is_anchor[v]) anchors.push_back(v);
    if (anchors.size() >= 3) continue;
    ++out.diagnostics.degenerate_clusters;

    std::vector<int> candidates;
    for (int v : loop)
      if (!is_anchor[v]) candidates.push_back(v);
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    if (anchors.empty() && candidates.size() >= 2) {
      // seed with the farthest pair of boundary vertices
      int bi = -1, bj = -1;
      double best = -1.0;
      for (size_t i = 0; i < candidates.size(); ++i) {
        for (size_t j = i + 1; j < candidates.size(); ++j) {
          double d =
              (mesh.vertices[candidates[i]] - mesh.vertices[candidates[j]]).squaredNorm();
          if (d > best) {
            best = d;
            bi = candidates[i];
            bj = candidates[j];
          }
        }
      }
      is_anchor[bi] = is_anchor[bj] = 1;
      anchors.push_back(bi);
      anchors.push_back(bj);
    }
    while (anchors.size() < 3) {
      int pick = -1;
      double best = -1.0;
      for (int v : candidates) {
        if (is_anchor[v]) continue;
        double dmin = std::numeric_limits<double>::infinity();
        for (int a : anchors) dmin = std::min(dmin, (mesh.vertices[v] - mesh.vertices[a]).squaredNorm());
        if (dmin > best) {
          best = dmin;
          pick = v;
        }
      }
      if (pick < 0) break;  // loop too small to provide three distinct vertices
      is_anchor[pick] = 1;
      anchors.push_back(pick);
    }
  }

  // anchor positions: mean of projections onto all incident proxies
  std::vector<int> anchor_id(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (!is_anchor[v]) continue;
    Vec3 pos = Vec3::Zero();
    for (int c : vertex_clusters[v]) pos += out.proxies[c].project(mesh.vertices[v]);
    pos /= static_cast<double>(vertex_clusters[v].size());
    anchor_id[v] = out.mesh.vertex_count();
    out.mesh.vertices.push_back(pos);
    out.anchor_source.push_back(v);
  }

  // polygons: anchor subsequence of each cluster's main loop
  for (int c = 0; c < nc; ++c) {
    std::vector<int> poly;
    for (int v : main_loop[c])
      if (anchor_id[v] >= 0 && (poly.empty() || poly.back() != anchor_id[v]))
        poly.push_back(anchor_id[v]);
    if (poly.size() >= 2 && poly.front() == poly.back()) poly.pop_back();
    out.mesh.polygons.push_back(std::move(poly));
    out.mesh.polygon_cluster.push_back(c);
  }
  return out;
}

CdtResult cdt_triangulate(const PolygonalExtraction& extraction) {
  CdtResult result;
  result.mesh.vertices = extraction.mesh.vertices;
  for (int p = 0; p < extraction.mesh.polygon_count(); ++p) {
    const int c = extraction.mesh.polygon_cluster[p];
    triangulate_polygon(extraction.mesh.polygons[p], extraction.mesh.vertices,
                        extraction.proxies[c].normal, extraction.cluster_centroids[c],
                        result.mesh, result.fan_fallbacks);
  }
  return result;
}

CdtResult cdt_triangulate(const PolygonalMesh& poly) {
  CdtResult result;
  result.mesh.vertices = poly.vertices;
  for (const auto& polygon : poly.polygons) {
    if (polygon.size() < 3) continue;
    // Newell normal and vertex mean stand in for the cluster proxy
    Vec3 normal = Vec3::Zero(), mean = Vec3::Zero();
    const int n = static_cast<int>(polygon.size());
    for (int i = 0; i < n; ++i) {
      const Vec3& p = poly.vertices[polygon[i]];
      const Vec3& q = poly.vertices[polygon[(i + 1) % n]];
      normal += Vec3((p.y() - q.y()) * (p.z() + q.z()), (p.z() - q.z()) * (p.x() + q.x()),
                     (p.x() - q.x()) * (p.y() + q.y()));
      mean += p;
    }
    mean /= n;
    if (normal.norm() == 0.0) normal = Vec3::UnitZ();
    normal.normalize();
    triangulate_polygon(polygon, poly.vertices, normal, mean, result.mesh, result.fan_fallbacks);
  }
  return result;
}

}  // namespace varimesh
