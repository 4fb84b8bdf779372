#include "varimesh/shapes.hpp"

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace varimesh {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Monge patch curvatures for z = f(x,y) given gradient and Hessian of f.
CurvaturePair monge_curvatures(double fx, double fy, double fxx, double fxy, double fyy) {
  const double w2 = 1.0 + fx * fx + fy * fy;
  const double w = std::sqrt(w2);
  const double E = 1.0 + fx * fx, F = fx * fy, G = 1.0 + fy * fy;
  const double L = fxx / w, M = fxy / w, N = fyy / w;
  const double denom = E * G - F * F;
  const double K = (L * N - M * M) / denom;
  const double H = (E * N - 2.0 * F * M + G * L) / (2.0 * denom);
  const double disc = std::sqrt(std::max(H * H - K, 0.0));
  double k1 = H + disc, k2 = H - disc;
  if (std::abs(k1) < std::abs(k2)) std::swap(k1, k2);
  return {std::abs(k1), std::abs(k2)};
}

Mat3 adjugate(const Mat3& m) {
  Mat3 adj;
  adj(0, 0) = m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1);
  adj(0, 1) = m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2);
  adj(0, 2) = m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1);
  adj(1, 0) = m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2);
  adj(1, 1) = m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0);
  adj(1, 2) = m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2);
  adj(2, 0) = m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0);
  adj(2, 1) = m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1);
  adj(2, 2) = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return adj;
}

// Gaussian and mean curvature of an implicit surface F = 0 (Goldman 2005).
CurvaturePair quadric_curvatures(const Vec3& grad, const Mat3& hess) {
  const double g2 = grad.squaredNorm();
  const double g1 = std::sqrt(g2);
  const double K = grad.dot(adjugate(hess) * grad) / (g2 * g2);
  const double Hm =
      (grad.dot(hess * grad) - g2 * hess.trace()) / (2.0 * g2 * g1);
  const double disc = std::sqrt(std::max(Hm * Hm - K, 0.0));
  double k1 = Hm + disc, k2 = Hm - disc;
  if (std::abs(k1) < std::abs(k2)) std::swap(k1, k2);
  return {std::abs(k1), std::abs(k2)};
}

}  // namespace

AnalyticSurface AnalyticSurface::plane(double half) {
  return AnalyticSurface(SurfaceKind::Plane, half);
}
AnalyticSurface AnalyticSurface::paraboloid(double half) {
  return AnalyticSurface(SurfaceKind::Paraboloid, half);
}
AnalyticSurface AnalyticSurface::sphere(double radius) {
  return AnalyticSurface(SurfaceKind::Sphere, radius);
}
AnalyticSurface AnalyticSurface::ellipsoid(double a, double b, double c) {
  return AnalyticSurface(SurfaceKind::Ellipsoid, a, b, c);
}
AnalyticSurface AnalyticSurface::cylinder(double radius, double height) {
  return AnalyticSurface(SurfaceKind::Cylinder, radius, height);
}
AnalyticSurface AnalyticSurface::cube(double side) {
  return AnalyticSurface(SurfaceKind::Cube, side);
}

double AnalyticSurface::scale() const {
  switch (kind_) {
    case SurfaceKind::Plane:
    case SurfaceKind::Paraboloid:
      return 2.0 * a_;
    case SurfaceKind::Sphere:
      return 2.0 * a_;
    case SurfaceKind::Ellipsoid:
      return 2.0 * std::max({a_, b_, c_});
    case SurfaceKind::Cylinder:
      return std::max(2.0 * a_, b_);
    case SurfaceKind::Cube:
      return a_;
  }
  return 1.0;
}

Vec3 AnalyticSurface::project(const Vec3& p) const {
  switch (kind_) {
    case SurfaceKind::Plane:
      return {std::clamp(p.x(), -a_, a_), std::clamp(p.y(), -a_, a_), 0.0};
    case SurfaceKind::Sphere: {
      double n = p.norm();
      return n > 0.0 ? Vec3(p * (a_ / n)) : Vec3(a_, 0.0, 0.0);
    }
    case SurfaceKind::Paraboloid: {
      // Damped tangent stepping on the graph parameterization.
      double u = std::clamp(p.x(), -a_, a_), v = std::clamp(p.y(), -a_, a_);
      const double tol = 1e-10 * scale();
      for (int it = 0; it < 200; ++it) {
        const Vec3 q(u, v, u * u + v * v);
        const Vec3 r = p - q;
        const Vec3 tu(1.0, 0.0, 2.0 * u), tv(0.0, 1.0, 2.0 * v);
        // Gauss-Newton step for min |p - q(u,v)|^2
        const double a11 = tu.dot(tu), a12 = tu.dot(tv), a22 = tv.dot(tv);
        const double b1 = r.dot(tu), b2 = r.dot(tv);
        const double det = a11 * a22 - a12 * a12;
        double du = (b1 * a22 - b2 * a12) / det;
        double dv = (b2 * a11 - b1 * a12) / det;
        // the quadratic term can overshoot for far points
        double damp = 1.0;
        double dist0 = r.squaredNorm();
        double nu = u, nv = v;
        for (int back = 0; back < 30; ++back) {
          nu = std::clamp(u + damp * du, -a_, a_);
          nv = std::clamp(v + damp * dv, -a_, a_);
          Vec3 nq(nu, nv, nu * nu + nv * nv);
          if ((p - nq).squaredNorm() <= dist0) break;
          damp *= 0.5;
        }
        double moved = std::hypot(nu - u, nv - v);
        u = nu;
        v = nv;
        if (moved < tol) break;
      }
      return {u, v, u * u + v * v};
    }
    case SurfaceKind::Ellipsoid: {
      // Start from the radially scaled point, then damped tangent stepping
      // with re-projection onto the implicit surface along its gradient.
      const Vec3 inv2(1.0 / (a_ * a_), 1.0 / (b_ * b_), 1.0 / (c_ * c_));
      auto F = [&](const Vec3& q) {
        return q.x() * q.x() * inv2.x() + q.y() * q.y() * inv2.y() + q.z() * q.z() * inv2.z() -
               1.0;
      };
      auto gradF = [&](const Vec3& q) {
        return Vec3(2.0 * q.x() * inv2.x(), 2.0 * q.y() * inv2.y(), 2.0 * q.z() * inv2.z());
      };
      auto to_surface = [&](Vec3 q) {
        for (int k = 0; k < 8; ++k) {
          const double f = F(q);
          if (std::abs(f) < 1e-16) break;
          const Vec3 g = gradF(q);
          q -= g * (f / g.squaredNorm());
        }
        return q;
      };
      double t = std::sqrt(F(p) + 1.0);
      Vec3 q = t > 0.0 ? to_surface(p / t) : Vec3(a_, 0.0, 0.0);
      const double tol = 1e-13 * scale();
      for (int it = 0; it < 500; ++it) {
        const Vec3 n = gradF(q).normalized();
        const Vec3 r = p - q;
        Vec3 step = r - r.dot(n) * n;  // tangential part
        if (step.norm() < tol) break;  // first-order optimality reached
        double damp = 1.0;
        const double dist0 = r.squaredNorm();
        Vec3 nq = q;
        for (int back = 0; back < 30; ++back) {
          nq = to_surface(q + damp * step);
          if ((p - nq).squaredNorm() <= dist0) break;
          damp *= 0.5;
        }
        const double moved = (nq - q).norm();
        q = nq;
        if (moved < tol) break;
      }
      return q;
    }
    case SurfaceKind::Cylinder: {
      const double r = a_, hh = 0.5 * b_;
      const double rho = std::hypot(p.x(), p.y());
      const Vec3 radial = rho > 0.0 ? Vec3(p.x() / rho, p.y() / rho, 0.0) : Vec3(1.0, 0.0, 0.0);
      if (std::abs(p.z()) <= hh) {
        // candidates: side wall, and the nearer cap (for interior points)
        Vec3 side = radial * r + Vec3(0.0, 0.0, p.z());
        if (rho <= r) {
          double zcap = p.z() >= 0.0 ? hh : -hh;
          Vec3 cap(p.x(), p.y(), zcap);
          return (p - cap).squaredNorm() < (p - side).squaredNorm() ? cap : side;
        }
        return side;
      }
      const double zcap = p.z() > 0.0 ? hh : -hh;
      if (rho <= r) return {p.x(), p.y(), zcap};
      Vec3 rim = radial * r;
      return {rim.x(), rim.y(), zcap};
    }
    case SurfaceKind::Cube: {
      const double h = 0.5 * a_;
      Vec3 q(std::clamp(p.x(), -h, h), std::clamp(p.y(), -h, h), std::clamp(p.z(), -h, h));
      if ((q - p).squaredNorm() > 0.0) return q;  // outside: clamped point is on surface
      // inside: push to the nearest facet
      int axis = 0;
      double best = h - std::abs(q.x());
      if (h - std::abs(q.y()) < best) { best = h - std::abs(q.y()); axis = 1; }
      if (h - std::abs(q.z()) < best) { axis = 2; }
      q[axis] = q[axis] >= 0.0 ? h : -h;
      return q;
    }
  }
  return p;
}

Vec3 AnalyticSurface::normal_at(const Vec3& s) const {
  switch (kind_) {
    case SurfaceKind::Plane:
      return Vec3::UnitZ();
    case SurfaceKind::Paraboloid:
      return Vec3(-2.0 * s.x(), -2.0 * s.y(), 1.0).normalized();
    case SurfaceKind::Sphere:
      return s.normalized();
    case SurfaceKind::Ellipsoid:
      return Vec3(s.x() / (a_ * a_), s.y() / (b_ * b_), s.z() / (c_ * c_)).normalized();
    case SurfaceKind::Cylinder: {
      const double hh = 0.5 * b_;
      if (std::abs(std::abs(s.z()) - hh) < 1e-12 * scale() &&
          std::hypot(s.x(), s.y()) < a_ * (1.0 - 1e-12))
        return {0.0, 0.0, s.z() > 0.0 ? 1.0 : -1.0};
      return Vec3(s.x(), s.y(), 0.0).normalized();
    }
    case SurfaceKind::Cube: {
      const double h = 0.5 * a_;
      int axis = 0;
      double best = std::abs(std::abs(s.x()) - h);
      if (std::abs(std::abs(s.y()) - h) < best) { best = std::abs(std::abs(s.y()) - h); axis = 1; }
      if (std::abs(std::abs(s.z()) - h) < best) { axis = 2; }
      Vec3 n = Vec3::Zero();
      n[axis] = s[axis] >= 0.0 ? 1.0 : -1.0;
      return n;
    }
  }
  return Vec3::UnitZ();
}

std::optional<CurvaturePair> AnalyticSurface::principal_curvatures(const Vec3& s) const {
  switch (kind_) {
    case SurfaceKind::Plane:
      return CurvaturePair{0.0, 0.0};
    case SurfaceKind::Paraboloid:
      return monge_curvatures(2.0 * s.x(), 2.0 * s.y(), 2.0, 0.0, 2.0);
    case SurfaceKind::Sphere:
      return CurvaturePair{1.0 / a_, 1.0 / a_};
    case SurfaceKind::Ellipsoid: {
      const Vec3 grad(2.0 * s.x() / (a_ * a_), 2.0 * s.y() / (b_ * b_), 2.0 * s.z() / (c_ * c_));
      Mat3 hess = Mat3::Zero();
      hess(0, 0) = 2.0 / (a_ * a_);
      hess(1, 1) = 2.0 / (b_ * b_);
      hess(2, 2) = 2.0 / (c_ * c_);
      return quadric_curvatures(grad, hess);
    }
    case SurfaceKind::Cylinder: {
      const double hh = 0.5 * b_;
      const double rho = std::hypot(s.x(), s.y());
      const bool on_cap = std::abs(std::abs(s.z()) - hh) < 1e-9 * scale() && rho < a_ * (1.0 - 1e-9);
      if (on_cap) return CurvaturePair{0.0, 0.0};
      return CurvaturePair{1.0 / a_, 0.0};
    }
    case SurfaceKind::Cube: {
      const double h = 0.5 * a_;
      int near_facets = 0;
      for (int axis = 0; axis < 3; ++axis)
        if (std::abs(std::abs(s[axis]) - h) < 1e-9 * scale()) ++near_facets;
      if (near_facets > 1) return std::nullopt;  // edge or corner
      return CurvaturePair{0.0, 0.0};
    }
  }
  return std::nullopt;
}

double AnalyticSurface::gaussian_curvature(const Vec3& s) const {
  auto k = principal_curvatures(s);
  if (!k) return 0.0;
  // recover the sign for saddle-free shapes; all bundled shapes have K >= 0
  return k->k_max * k->k_min;
}

namespace {

TriangleMesh grid_mesh(int res, double half, bool paraboloid) {
  if (res < 2) throw std::invalid_argument("grid resolution must be >= 2");
  TriangleMesh mesh;
  mesh.vertices.reserve(static_cast<size_t>(res) * res);
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      double x = -half + 2.0 * half * i / (res - 1);
      double y = -half + 2.0 * half * j / (res - 1);
      mesh.vertices.push_back({x, y, paraboloid ? x * x + y * y : 0.0});
    }
  }
  auto id = [res](int i, int j) { return j * res + i; };
  for (int j = 0; j + 1 < res; ++j) {
    for (int i = 0; i + 1 < res; ++i) {
      // split each cell along the same diagonal; orientation CCW seen from +z
      mesh.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      mesh.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return mesh;
}

TriangleMesh icosphere(int level) {
  if (level < 0) throw std::invalid_argument("subdivision level must be >= 0");
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  TriangleMesh mesh;
  mesh.vertices = {{-1, phi, 0}, {1, phi, 0},  {-1, -phi, 0}, {1, -phi, 0},
                   {0, -1, phi}, {0, 1, phi},  {0, -1, -phi}, {0, 1, -phi},
                   {phi, 0, -1}, {phi, 0, 1},  {-phi, 0, -1}, {-phi, 0, 1}};
  for (auto& v : mesh.vertices) v.normalize();
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int u, int v) {
      auto key = std::minmax(u, v);
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      Vec3 m = (mesh.vertices[u] + mesh.vertices[v]).normalized();
      int id = mesh.vertex_count();
      mesh.vertices.push_back(m);
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> faces;
    faces.reserve(mesh.faces.size() * 4);
    for (const auto& f : mesh.faces) {
      int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
      faces.push_back({f[0], ab, ca});
      faces.push_back({f[1], bc, ab});
      faces.push_back({f[2], ca, bc});
      faces.push_back({ab, bc, ca});
    }
    mesh.faces = std::move(faces);
  }
  return mesh;
}

TriangleMesh cube_mesh(int res, double side) {
  if (res < 1) throw std::invalid_argument("cube resolution must be >= 1");
  TriangleMesh mesh;
  // vertices on the integer lattice of each facet, welded across edges
  std::unordered_map<std::uint64_t, int> lattice;
  const double h = 0.5 * side;
  auto vertex_id = [&](int x, int y, int z) {
    std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 42) |
                        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y) & 0x1FFFFF) << 21) |
                        (static_cast<std::uint32_t>(z) & 0x1FFFFF);
    auto it = lattice.find(key);
    if (it != lattice.end()) return it->second;
    int id = mesh.vertex_count();
    mesh.vertices.push_back({-h + side * x / res, -h + side * y / res, -h + side * z / res});
    lattice.emplace(key, id);
    return id;
  };
  // each facet: normal axis, fixed coordinate, and the two in-plane axes
  // ordered so the triangles wind CCW seen from outside
  struct Facet { int axis; int level; int u_axis; int v_axis; };
  const Facet facets[6] = {{2, res, 0, 1}, {2, 0, 1, 0}, {0, res, 1, 2},
                           {0, 0, 2, 1},   {1, res, 2, 0}, {1, 0, 0, 2}};
  for (const auto& facet : facets) {
    for (int j = 0; j < res; ++j) {
      for (int i = 0; i < res; ++i) {
        auto corner = [&](int di, int dj) {
          int coord[3];
          coord[facet.axis] = facet.level;
          coord[facet.u_axis] = i + di;
          coord[facet.v_axis] = j + dj;
          return vertex_id(coord[0], coord[1], coord[2]);
        };
        int v00 = corner(0, 0), v10 = corner(1, 0), v11 = corner(1, 1), v01 = corner(0, 1);
        mesh.faces.push_back({v00, v10, v11});
        mesh.faces.push_back({v00, v11, v01});
      }
    }
  }
  return mesh;
}

TriangleMesh cylinder_mesh(int res, double radius, double height) {
  if (res < 1) throw std::invalid_argument("cylinder resolution must be >= 1");
  TriangleMesh mesh;
  const int around = 4 * res;
  const double hh = 0.5 * height;
  auto ring_vertex = [&](double rho, double z, int k) {
    double t = 2.0 * kPi * k / around;
    mesh.vertices.push_back({rho * std::cos(t), rho * std::sin(t), z});
    return mesh.vertex_count() - 1;
  };
  // side: res+1 rings of `around` vertices
  std::vector<std::vector<int>> side(res + 1);
  for (int row = 0; row <= res; ++row) {
    double z = -hh + height * row / res;
    for (int k = 0; k < around; ++k) side[row].push_back(ring_vertex(radius, z, k));
  }
  for (int row = 0; row < res; ++row) {
    for (int k = 0; k < around; ++k) {
      int k1 = (k + 1) % around;
      int a = side[row][k], b = side[row][k1], c = side[row + 1][k1], d = side[row + 1][k];
      mesh.faces.push_back({a, b, c});
      mesh.faces.push_back({a, c, d});
    }
  }
  // caps: concentric rings down to a center vertex; top cap faces +z
  for (int top = 0; top < 2; ++top) {
    double z = top ? hh : -hh;
    std::vector<std::vector<int>> rings(res);
    rings[0] = side[top ? res : 0];  // reuse rim vertices to keep the mesh closed
    for (int ring = 1; ring < res; ++ring) {
      double rho = radius * (res - ring) / res;
      for (int k = 0; k < around; ++k) rings[ring].push_back(ring_vertex(rho, z, k));
    }
    mesh.vertices.push_back({0.0, 0.0, z});
    int center = mesh.vertex_count() - 1;
    for (int ring = 0; ring + 1 < res; ++ring) {
      for (int k = 0; k < around; ++k) {
        int k1 = (k + 1) % around;
        int a = rings[ring][k], b = rings[ring][k1], c = rings[ring + 1][k1], d = rings[ring + 1][k];
        if (top) {
          mesh.faces.push_back({a, b, c});
          mesh.faces.push_back({a, c, d});
        } else {
          mesh.faces.push_back({a, c, b});
          mesh.faces.push_back({a, d, c});
        }
      }
    }
    const auto& inner = rings[res - 1];
    for (int k = 0; k < around; ++k) {
      int k1 = (k + 1) % around;
      if (top)
        mesh.faces.push_back({inner[k], inner[k1], center});
      else
        mesh.faces.push_back({inner[k], center, inner[k1]});
    }
  }
  return mesh;
}

}  // namespace

TriangleMesh AnalyticSurface::tessellate(int resolution) const {
  switch (kind_) {
    case SurfaceKind::Plane:
      return grid_mesh(resolution, a_, false);
    case SurfaceKind::Paraboloid:
      return grid_mesh(resolution, a_, true);
    case SurfaceKind::Sphere: {
      TriangleMesh mesh = icosphere(resolution);
      for (auto& v : mesh.vertices) v *= a_;
      return mesh;
    }
    case SurfaceKind::Ellipsoid: {
      TriangleMesh mesh = icosphere(resolution);
      for (auto& v : mesh.vertices) v = Vec3(v.x() * a_, v.y() * b_, v.z() * c_);
      return mesh;
    }
    case SurfaceKind::Cylinder:
      return cylinder_mesh(resolution, a_, b_);
    case SurfaceKind::Cube:
      return cube_mesh(resolution, a_);
  }
  throw std::logic_error("unreachable");
}

TriangleMesh add_normal_noise(const TriangleMesh& mesh, const AnalyticSurface* surface,
                              double sigma, std::uint64_t seed) {
  TriangleMesh out = mesh;
  if (sigma <= 0.0) return out;
  const double stddev = sigma * mesh.bbox_diagonal();

  std::vector<Vec3> normals(mesh.vertices.size(), Vec3::Zero());
  if (surface) {
    for (size_t i = 0; i < mesh.vertices.size(); ++i)
      normals[i] = surface->normal_at(surface->project(mesh.vertices[i]));
  } else {
    for (const auto& f : mesh.faces) {
      Vec3 n = (mesh.vertices[f[1]] - mesh.vertices[f[0]])
                   .cross(mesh.vertices[f[2]] - mesh.vertices[f[0]]);
      for (int k = 0; k < 3; ++k) normals[f[k]] += n;
    }
    for (auto& n : normals) {
      double len = n.norm();
      if (len > 0.0) n /= len;
    }
  }

  // Box-Muller on top of mt19937_64: identical streams on every platform,
  // unlike std::normal_distribution.
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  };
  for (size_t i = 0; i < out.vertices.size(); ++i) {
    double u1 = uniform(), u2 = uniform();
    double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    out.vertices[i] += stddev * g * normals[i];
  }
  return out;
}

}  // namespace varimesh
