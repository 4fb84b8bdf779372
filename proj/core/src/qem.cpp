#include "varimesh/qem.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace varimesh {

namespace {

using Quadric = Eigen::Matrix4d;

Quadric plane_quadric(const Vec3& n, double d, double weight) {
  Eigen::Vector4d p(n.x(), n.y(), n.z(), d);
  return weight * (p * p.transpose());
}

double quadric_error(const Quadric& q, const Vec3& x) {
  Eigen::Vector4d h(x.x(), x.y(), x.z(), 1.0);
  return h.dot(q * h);
}

struct Candidate {
  double cost;
  int v0, v1;  // v0 < v1
  std::uint32_t gen0, gen1;
  Vec3 position;
};

struct CandidateOrder {
  bool operator()(const Candidate& a, const Candidate& b) const {
    if (a.cost != b.cost) return a.cost > b.cost;
    if (a.v0 != b.v0) return a.v0 > b.v0;
    return a.v1 > b.v1;
  }
};

class Simplifier {
 public:
  explicit Simplifier(const TriangleMesh& mesh)
      : vertices_(mesh.vertices), faces_(mesh.faces) {
    const int nv = static_cast<int>(vertices_.size());
    const int nf = static_cast<int>(faces_.size());
    quadrics_.assign(nv, Quadric::Zero());
    generation_.assign(nv, 0);
    vertex_alive_.assign(nv, 1);
    face_alive_.assign(nf, 1);
    vertex_faces_.assign(nv, {});
    alive_vertices_ = nv;
    alive_faces_ = nf;

    for (int f = 0; f < nf; ++f) {
      const auto& t = faces_[f];
      for (int k = 0; k < 3; ++k) vertex_faces_[t[k]].push_back(f);
      const Vec3 a = vertices_[t[0]], b = vertices_[t[1]], c = vertices_[t[2]];
      Vec3 n = (b - a).cross(c - a);
      const double area2 = n.norm();
      if (area2 <= 0.0) continue;
      n /= area2;
      Quadric q = plane_quadric(n, -n.dot(a), 0.5 * area2);
      for (int k = 0; k < 3; ++k) quadrics_[t[k]] += q;
    }

    // boundary constraints: perpendicular plane through each boundary edge
    std::unordered_map<std::uint64_t, std::pair<int, int>> edge_once;
    auto key = [](int u, int v) {
      if (u > v) std::swap(u, v);
      return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
    };
    for (int f = 0; f < nf; ++f) {
      const auto& t = faces_[f];
      for (int k = 0; k < 3; ++k) {
        auto it = edge_once.find(key(t[k], t[(k + 1) % 3]));
        if (it == edge_once.end())
          edge_once.emplace(key(t[k], t[(k + 1) % 3]), std::make_pair(f, k));
        else
          it->second.first = -1;  // interior
      }
    }
    for (const auto& [k, fk] : edge_once) {
      if (fk.first < 0) continue;
      const auto& t = faces_[fk.first];
      const int a = t[fk.second], b = t[(fk.second + 1) % 3];
      const Vec3 pa = vertices_[a], pb = vertices_[b];
      const Vec3 fn = triangle_normal(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]);
      Vec3 cn = (pb - pa).cross(fn);
      const double len = cn.norm();
      if (len <= 0.0) continue;
      cn /= len;
      Quadric q = plane_quadric(cn, -cn.dot(pa), kBoundaryWeight * (pb - pa).squaredNorm());
      quadrics_[a] += q;
      quadrics_[b] += q;
    }
  }

  QemResult run(const QemTarget& target) {
    QemResult result;
    if ((target.kind == QemTarget::Kind::Vertices && target.count >= alive_vertices_) ||
        (target.kind == QemTarget::Kind::Faces && target.count >= alive_faces_)) {
      result.mesh = compact();
      return result;
    }
    if (target.count < (target.kind == QemTarget::Kind::Vertices ? 3 : 1))
      throw std::invalid_argument("qem_simplify: target too small");

    for (int v = 0; v < static_cast<int>(vertices_.size()); ++v)
      if (vertex_alive_[v])
        for (int u : vertex_ring(v))
          if (u > v) push_edge(v, u);

    double total_error = 0.0;
    auto done = [&] {
      return target.kind == QemTarget::Kind::Vertices ? alive_vertices_ <= target.count
                                                      : alive_faces_ <= target.count;
    };
    while (!done() && !heap_.empty()) {
      Candidate c = heap_.top();
      heap_.pop();
      if (!vertex_alive_[c.v0] || !vertex_alive_[c.v1] || generation_[c.v0] != c.gen0 ||
          generation_[c.v1] != c.gen1)
        continue;

      auto shared = shared_faces(c.v0, c.v1);
      if (shared.empty()) continue;  // no longer an edge
      if (target.kind == QemTarget::Kind::Faces &&
          alive_faces_ - static_cast<int>(shared.size()) < target.count)
        continue;  // would overshoot the exact face budget
      if (!link_condition(c.v0, c.v1, shared)) continue;
      if (creates_duplicate_face(c.v0, c.v1, shared)) continue;
      if (flips_any_face(c.v0, c.v1, c.position, shared)) continue;

      collapse(c.v0, c.v1, c.position, shared);
      total_error += std::max(c.cost, 0.0);
      result.error_trace.push_back(total_error);
      ++result.collapses;
    }
    result.reached_target = done();
    result.mesh = compact();
    return result;
  }

 private:
  static constexpr double kBoundaryWeight = 1e3;

  std::vector<Vec3> vertices_;
  std::vector<std::array<int, 3>> faces_;
  std::vector<Quadric> quadrics_;
  std::vector<std::uint32_t> generation_;
  std::vector<char> vertex_alive_, face_alive_;
  std::vector<std::vector<int>> vertex_faces_;
  std::priority_queue<Candidate, std::vector<Candidate>, CandidateOrder> heap_;
  int alive_vertices_ = 0, alive_faces_ = 0;

  void prune_faces(int v) {
    auto& fs = vertex_faces_[v];
    fs.erase(std::remove_if(fs.begin(), fs.end(),
                            [this, v](int f) {
                              if (!face_alive_[f]) return true;
                              const auto& t = faces_[f];
                              return t[0] != v && t[1] != v && t[2] != v;
                            }),
             fs.end());
  }

  std::vector<int> shared_faces(int v0, int v1) const {
    std::vector<int> out;
    for (int f : vertex_faces_[v0]) {
      if (!face_alive_[f]) continue;
      const auto& t = faces_[f];
      bool has0 = false, has1 = false;
      for (int k = 0; k < 3; ++k) {
        has0 |= t[k] == v0;
        has1 |= t[k] == v1;
      }
      if (has0 && has1) out.push_back(f);
    }
    return out;
  }

  std::vector<int> vertex_ring(int v) const {
    std::vector<int> ring;
    for (int f : vertex_faces_[v]) {
      if (!face_alive_[f]) continue;
      for (int k = 0; k < 3; ++k)
        if (faces_[f][k] != v) ring.push_back(faces_[f][k]);
    }
    std::sort(ring.begin(), ring.end());
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
    return ring;
  }

  // Standard edge-collapse link condition: the common one-ring neighbors of
  // the endpoints must be exactly the opposite vertices of the shared faces.
  bool link_condition(int v0, int v1, const std::vector<int>& shared) const {
    auto r0 = vertex_ring(v0), r1 = vertex_ring(v1);
    std::vector<int> common;
    std::set_intersection(r0.begin(), r0.end(), r1.begin(), r1.end(), std::back_inserter(common));
    std::vector<int> opposite;
    for (int f : shared)
      for (int k = 0; k < 3; ++k)
        if (faces_[f][k] != v0 && faces_[f][k] != v1) opposite.push_back(faces_[f][k]);
    std::sort(opposite.begin(), opposite.end());
    opposite.erase(std::unique(opposite.begin(), opposite.end()), opposite.end());
    return common == opposite;
  }

  // Rejects collapses that would leave two surviving faces with the same
  // vertex set (a zero-volume flap, e.g. collapsing a tetrahedron edge).
  bool creates_duplicate_face(int v0, int v1, const std::vector<int>& shared) const {
    std::vector<std::array<int, 3>> survivors;
    for (int vid : {v0, v1}) {
      for (int f : vertex_faces_[vid]) {
        if (!face_alive_[f]) continue;
        if (std::find(shared.begin(), shared.end(), f) != shared.end()) continue;
        std::array<int, 3> t = faces_[f];
        for (int& v : t)
          if (v == v1) v = v0;
        std::sort(t.begin(), t.end());
        survivors.push_back(t);
      }
    }
    std::sort(survivors.begin(), survivors.end());
    return std::adjacent_find(survivors.begin(), survivors.end()) != survivors.end();
  }

  bool flips_any_face(int v0, int v1, const Vec3& pos, const std::vector<int>& shared) const {
    for (int vid : {v0, v1}) {
      for (int f : vertex_faces_[vid]) {
        if (!face_alive_[f]) continue;
        if (std::find(shared.begin(), shared.end(), f) != shared.end()) continue;
        const auto& t = faces_[f];
        Vec3 p[3], q[3];
        bool touches = false;
        for (int k = 0; k < 3; ++k) {
          p[k] = vertices_[t[k]];
          if (t[k] == v0 || t[k] == v1) {
            q[k] = pos;
            touches = true;
          } else {
            q[k] = p[k];
          }
        }
        if (!touches) continue;
        const Vec3 n_before = (p[1] - p[0]).cross(p[2] - p[0]);
        const Vec3 n_after = (q[1] - q[0]).cross(q[2] - q[0]);
        if (n_before.dot(n_after) <= 0.0) return true;
        if (n_after.squaredNorm() <= 1e-30 * n_before.squaredNorm()) return true;
      }
    }
    return false;
  }

  void collapse(int v0, int v1, const Vec3& pos, const std::vector<int>& shared) {
    for (int f : shared) {
      face_alive_[f] = 0;
      --alive_faces_;
    }
    vertices_[v0] = pos;
    quadrics_[v0] += quadrics_[v1];
    for (int f : vertex_faces_[v1]) {
      if (!face_alive_[f]) continue;
      auto& t = faces_[f];
      for (int k = 0; k < 3; ++k)
        if (t[k] == v1) t[k] = v0;
      vertex_faces_[v0].push_back(f);
    }
    vertex_alive_[v1] = 0;
    --alive_vertices_;
    vertex_faces_[v1].clear();
    prune_faces(v0);
    // only the moved vertex's quadric changed; edges between untouched ring
    // vertices keep their candidates
    ++generation_[v0];
    ++generation_[v1];
    push_vertex_candidates(v0);
  }

  void push_vertex_candidates(int v) {
    for (int u : vertex_ring(v)) push_edge(v, u);
  }

  void push_edge(int v0, int v1) {
    if (v0 > v1) std::swap(v0, v1);
    Candidate c;
    c.v0 = v0;
    c.v1 = v1;
    c.gen0 = generation_[v0];
    c.gen1 = generation_[v1];
    const Quadric q = quadrics_[v0] + quadrics_[v1];
    c.position = optimal_position(q, vertices_[v0], vertices_[v1]);
    c.cost = quadric_error(q, c.position);
    heap_.push(c);
  }

  static Vec3 optimal_position(const Quadric& q, const Vec3& a, const Vec3& b) {
    Mat3 A = q.topLeftCorner<3, 3>();
    Vec3 rhs = -q.topRightCorner<3, 1>();
    Eigen::FullPivLU<Mat3> lu(A);
    if (lu.isInvertible()) {
      Vec3 x = lu.solve(rhs);
      // keep the solve local; far-away solutions mean near-singular systems
      const double span = (b - a).norm();
      if ((x - 0.5 * (a + b)).norm() <= 8.0 * span + 1e-12) return x;
    }
    const Vec3 mid = 0.5 * (a + b);
    Vec3 best = a;
    double best_err = quadric_error(q, a);
    for (const Vec3& cand : {b, mid}) {
      double e = quadric_error(q, cand);
      if (e < best_err) {
        best_err = e;
        best = cand;
      }
    }
    return best;
  }

  TriangleMesh compact() const {
    TriangleMesh out;
    std::vector<int> remap(vertices_.size(), -1);
    for (size_t v = 0; v < vertices_.size(); ++v) {
      if (vertex_alive_[v]) {
        remap[v] = out.vertex_count();
        out.vertices.push_back(vertices_[v]);
      }
    }
    for (size_t f = 0; f < faces_.size(); ++f) {
      if (!face_alive_[f]) continue;
      out.faces.push_back({remap[faces_[f][0]], remap[faces_[f][1]], remap[faces_[f][2]]});
    }
    return out;
  }
};

}  // namespace

QemResult qem_simplify(const TriangleMesh& mesh, const QemTarget& target) {
  Simplifier s(mesh);
  return s.run(target);
}

}  // namespace varimesh
