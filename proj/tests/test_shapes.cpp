#include <doctest.h>

#include "helpers.hpp"
#include "varimesh/shapes.hpp"

using namespace varimesh;
using namespace testutil;

TEST_CASE("tessellation counts match the closed forms") {
  CHECK(AnalyticSurface::plane().tessellate(2).vertex_count() == 4);
  CHECK(AnalyticSurface::plane().tessellate(2).face_count() == 2);

  auto para = AnalyticSurface::paraboloid().tessellate(65);
  CHECK(para.vertex_count() == 65 * 65);
  CHECK(para.face_count() == 2 * 64 * 64);

  // the dense benchmark input: 513 -> 263,169 vertices / 524,288 faces
  auto big = AnalyticSurface::paraboloid().tessellate(513);
  CHECK(big.vertex_count() == 263169);
  CHECK(big.face_count() == 524288);

  auto ico = AnalyticSurface::sphere(1.0).tessellate(0);  // minimal: icosahedron
  CHECK(ico.vertex_count() == 12);
  CHECK(ico.face_count() == 20);

  for (int r : {1, 3, 5}) {
    auto cube = AnalyticSurface::cube(1.0).tessellate(r);
    CHECK(cube.face_count() == 12 * r * r);
    cube.validate();
  }

  auto cyl = AnalyticSurface::cylinder(1.0, 2.0).tessellate(4);
  cyl.validate();
  CHECK(count_face_components(cyl, build_adjacency(cyl)) == 1);
}

TEST_CASE("ellipsoid level 7 matches the dense ellipsoid input size") {
  auto mesh = AnalyticSurface::ellipsoid(2, 1, 1).tessellate(7);
  CHECK(mesh.vertex_count() == 163842);
  CHECK(mesh.face_count() == 327680);
}

TEST_CASE("tessellation vertices lie exactly on the surface") {
  auto para = AnalyticSurface::paraboloid().tessellate(17);
  for (const auto& v : para.vertices)
    CHECK(std::abs(v.z() - (v.x() * v.x() + v.y() * v.y())) < 1e-14);

  auto ell = AnalyticSurface::ellipsoid(2, 1, 1).tessellate(3);
  for (const auto& v : ell.vertices) {
    const double r = v.x() * v.x() / 4 + v.y() * v.y() + v.z() * v.z();
    CHECK(std::abs(r - 1.0) < 1e-14);
  }

  auto sph = AnalyticSurface::sphere(2.5).tessellate(3);
  for (const auto& v : sph.vertices) CHECK(std::abs(v.norm() - 2.5) < 1e-13);
}

TEST_CASE("analytic curvatures at reference points") {
  AnalyticSurface para = AnalyticSurface::paraboloid();
  auto k0 = para.principal_curvatures({0, 0, 0});
  REQUIRE(k0.has_value());
  CHECK(k0->k_max == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(k0->k_min == doctest::Approx(2.0).epsilon(1e-12));
  // at radius rho: k_max/k_min = 1 + 4 rho^2
  const Vec3 p(0.5, 0.5, 0.5);
  auto kp = para.principal_curvatures(p);
  CHECK(kp->k_max / kp->k_min == doctest::Approx(1.0 + 4.0 * 0.5).epsilon(1e-9));

  AnalyticSurface sph = AnalyticSurface::sphere(2.0);
  auto ks = sph.principal_curvatures({0, 0, 2});
  CHECK(ks->k_max == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(ks->k_min == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sph.gaussian_curvature({0, 0, 2}) == doctest::Approx(0.25).epsilon(1e-12));

  AnalyticSurface ell = AnalyticSurface::ellipsoid(2, 1, 1);
  // tip of the long axis: k1 = k2 = a/b^2 = 2, K = 4
  auto kt = ell.principal_curvatures({2, 0, 0});
  CHECK(kt->k_max == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(kt->k_min == doctest::Approx(2.0).epsilon(1e-9));

  AnalyticSurface plane = AnalyticSurface::plane();
  CHECK(plane.gaussian_curvature({0.1, 0.1, 0}) == 0.0);

  AnalyticSurface cube = AnalyticSurface::cube(2.0);
  CHECK(cube.principal_curvatures({0.2, 0.3, 1.0}).has_value());
  CHECK(!cube.principal_curvatures({1.0, 1.0, 0.0}).has_value());  // on an edge
}

TEST_CASE("projection: closest point properties") {
  AnalyticSurface sph = AnalyticSurface::sphere(1.5);
  CHECK((sph.project({3, 0, 0}) - Vec3(1.5, 0, 0)).norm() < 1e-12);

  // ellipsoid: projected point satisfies the first-order optimality condition
  // (p - q parallel to the surface gradient at q)
  AnalyticSurface ell = AnalyticSurface::ellipsoid(2, 1, 1);
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    // near-surface queries (the metric path projects cluster centroids, which
    // hug the surface); first-order optimality: p - q parallel to the normal
    const double theta = rng.uniform(0, 2 * M_PI), z = rng.uniform(-1, 1);
    const double rr = std::sqrt(1 - z * z);
    const Vec3 on_surface(2 * rr * std::cos(theta), rr * std::sin(theta), z);
    const Vec3 p = on_surface + 0.05 * rng.point();
    const Vec3 q = ell.project(p);
    const double on = q.x() * q.x() / 4 + q.y() * q.y() + q.z() * q.z();
    CHECK(std::abs(on - 1.0) < 1e-10);
    const Vec3 n = ell.normal_at(q);
    const Vec3 r = p - q;
    if (r.norm() > 1e-8) CHECK((r - r.dot(n) * n).norm() < 1e-8);
  }
  // distant queries still land on the surface at a locally optimal point
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 p = rng.point(2.5);
    const Vec3 q = ell.project(p);
    CHECK(std::abs(q.x() * q.x() / 4 + q.y() * q.y() + q.z() * q.z() - 1.0) < 1e-10);
    const Vec3 n = ell.normal_at(q);
    const Vec3 r = p - q;
    if (r.norm() > 1e-6) CHECK((r - r.dot(n) * n).norm() < 1e-6 * std::max(1.0, r.norm()));
  }

  // paraboloid: projecting an on-surface point is the identity
  AnalyticSurface para = AnalyticSurface::paraboloid();
  for (int trial = 0; trial < 50; ++trial) {
    const double x = rng.uniform(-0.9, 0.9), y = rng.uniform(-0.9, 0.9);
    const Vec3 s(x, y, x * x + y * y);
    CHECK((para.project(s) - s).norm() < 1e-9);
    const Vec3 off = s + 0.05 * para.normal_at(s);
    CHECK((para.project(off) - s).norm() < 1e-6);
  }

  // cylinder: the three regimes
  AnalyticSurface cyl = AnalyticSurface::cylinder(1.0, 2.0);
  CHECK((cyl.project({2, 0, 0}) - Vec3(1, 0, 0)).norm() < 1e-12);          // side
  CHECK((cyl.project({0.3, 0, 5}) - Vec3(0.3, 0, 1)).norm() < 1e-12);      // cap
  CHECK((cyl.project({2, 0, 2}) - Vec3(1, 0, 1)).norm() < 1e-12);          // rim
  CHECK((cyl.project({0.99, 0, 0}) - Vec3(1, 0, 0)).norm() < 1e-12);       // inside -> side
}

TEST_CASE("finite-difference curvature of the tessellation converges") {
  // local quadric fit in the analytic tangent frame at interior grid vertices;
  // the fitted principal curvatures must approach the analytic ones
  AnalyticSurface para = AnalyticSurface::paraboloid();
  for (int res : {65, 257}) {
    TriangleMesh mesh = para.tessellate(res);
    double worst = 0.0;
    // probe a fixed set of interior vertices
    for (int probe = 0; probe < 25; ++probe) {
      const int i = res / 4 + (probe % 5) * res / 10;
      const int j = res / 4 + (probe / 5) * res / 10;
      const int vid = j * res + i;
      const Vec3 v = mesh.vertices[vid];
      const Vec3 n = para.normal_at(v);
      Vec3 e1 = std::abs(n.z()) < 0.9 ? n.cross(Vec3::UnitZ()).normalized()
                                      : n.cross(Vec3::UnitX()).normalized();
      const Vec3 e2 = n.cross(e1);
      // fit h = a u^2 + b uv + c v^2 over the 8 grid neighbors
      Eigen::MatrixXd A(8, 3);
      Eigen::VectorXd h(8);
      int row = 0;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const Vec3 d = mesh.vertices[(j + dj) * res + (i + di)] - v;
          const double u = d.dot(e1), w = d.dot(e2);
          A.row(row) << u * u, u * w, w * w;
          h(row) = d.dot(n);
          ++row;
        }
      }
      const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(h);
      Eigen::Matrix2d shape;
      shape << 2 * coef(0), coef(1), coef(1), 2 * coef(2);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(shape);
      double k1 = std::abs(es.eigenvalues()(1)), k2 = std::abs(es.eigenvalues()(0));
      if (k1 < k2) std::swap(k1, k2);
      auto analytic = para.principal_curvatures(v);
      worst = std::max(worst, std::abs(k1 / analytic->k_max - 1.0));
      worst = std::max(worst, std::abs(k2 / analytic->k_min - 1.0));
    }
    if (res == 257) CHECK(worst < 0.01);  // < 1% away from boundaries
  }
}

TEST_CASE("normal noise: identity at zero, calibrated spread, determinism") {
  AnalyticSurface para = AnalyticSurface::paraboloid();
  TriangleMesh mesh = para.tessellate(129);  // 16641 vertices >= 1e4

  auto same = add_normal_noise(mesh, &para, 0.0, 9);
  for (int v = 0; v < mesh.vertex_count(); ++v)
    CHECK((same.vertices[v] - mesh.vertices[v]).norm() == 0.0);

  const double sigma = 0.002;
  auto noisy = add_normal_noise(mesh, &para, sigma, 9);
  double sum2 = 0.0;
  for (int v = 0; v < mesh.vertex_count(); ++v)
    sum2 += (noisy.vertices[v] - mesh.vertices[v]).squaredNorm();
  const double sample_std = std::sqrt(sum2 / mesh.vertex_count());
  CHECK(sample_std == doctest::Approx(sigma * mesh.bbox_diagonal()).epsilon(0.05));

  auto again = add_normal_noise(mesh, &para, sigma, 9);
  for (int v = 0; v < mesh.vertex_count(); ++v)
    CHECK((again.vertices[v] - noisy.vertices[v]).norm() == 0.0);

  // averaged face normals when no analytic surface is provided
  auto fallback = add_normal_noise(mesh, nullptr, sigma, 9);
  CHECK(fallback.vertex_count() == mesh.vertex_count());
}
