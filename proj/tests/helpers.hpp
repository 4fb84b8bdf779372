#pragma once

// Shared test fixtures and independent oracles. Everything here must stay
// independent of the library's incremental update paths: moments are summed
// directly, patch integrals use Gauss-Legendre quadrature on the analytic
// surface.

#include <cmath>
#include <random>
#include <vector>

#include "varimesh/mesh.hpp"
#include "varimesh/moments.hpp"

namespace testutil {

using varimesh::ClusterMoments;
using varimesh::Mat3;
using varimesh::TriangleMesh;
using varimesh::TriangleMoments;
using varimesh::Vec3;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  Vec3 point(double extent = 1.0) {
    return {uniform(-extent, extent), uniform(-extent, extent), uniform(-extent, extent)};
  }
  std::mt19937_64& raw() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline TriangleMoments random_triangle(Rng& rng, double extent = 1.0) {
  return varimesh::triangle_moments(rng.point(extent), rng.point(extent), rng.point(extent));
}

/// From-scratch oracle: direct summation with the parallel-axis shift, no
/// incremental merging anywhere.
inline ClusterMoments direct_moments(const std::vector<TriangleMoments>& tris) {
  ClusterMoments out;
  double area = 0.0;
  Vec3 first = Vec3::Zero();
  for (const auto& t : tris) {
    area += t.area;
    first += t.area * t.centroid;
  }
  out.area = area;
  out.face_count = static_cast<long>(tris.size());
  out.centroid = area > 0.0 ? Vec3(first / area) : Vec3::Zero();
  Mat3 cov = Mat3::Zero();
  for (const auto& t : tris) {
    const Vec3 d = t.centroid - out.centroid;
    cov += t.cov + t.area * (d * d.transpose());
  }
  out.cov = cov;
  return out;
}

inline double rel_diff(double a, double b, double scale = 1.0) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), scale});
}

inline double rel_diff(const Vec3& a, const Vec3& b, double scale = 1.0) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), scale});
}

inline double rel_diff(const Mat3& a, const Mat3& b, double scale = 1.0) {
  return (a - b).norm() / std::max({a.norm(), b.norm(), scale});
}

inline double moments_rel_diff(const ClusterMoments& a, const ClusterMoments& b) {
  double d = rel_diff(a.area, b.area);
  d = std::max(d, rel_diff(a.centroid, b.centroid, a.area > 0 ? std::sqrt(a.area) : 1.0));
  d = std::max(d, rel_diff(a.cov, b.cov, a.area * a.area));
  return d;
}

/// Gauss-Legendre nodes/weights on [-1, 1] via Newton iteration.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
      }
      double dp = n * (t * p0 - p1) / (t * t - 1.0);
      double step = p0 / dp;
      t -= step;
      if (std::abs(step) < 1e-15) break;
    }
    p0 = 1.0;
    p1 = 0.0;
    for (int j = 0; j < n; ++j) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
    }
    double dp = n * (t * p0 - p1) / (t * t - 1.0);
    x[i] = -t;
    x[n - 1 - i] = t;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

/// Dense surface integral of the moments of the patch
/// z = (k1 u^2 + k2 v^2)/2 over [-e1,e1] x [-e2,e2], with the exact area
/// element. The independent oracle for the asymptotic eigenvalue and
/// determinant laws.
inline ClusterMoments patch_quadrature_moments(double k1, double k2, double e1, double e2,
                                               int order = 64) {
  std::vector<double> xs, ws;
  gauss_legendre(order, xs, ws);
  double m0 = 0.0;
  Vec3 m1 = Vec3::Zero();
  Mat3 m2 = Mat3::Zero();
  for (int i = 0; i < order; ++i) {
    const double u = xs[i] * e1, wu = ws[i] * e1;
    for (int j = 0; j < order; ++j) {
      const double v = xs[j] * e2, wv = ws[j] * e2;
      const double area_el = std::sqrt(1.0 + k1 * k1 * u * u + k2 * k2 * v * v);
      const double w = wu * wv * area_el;
      const Vec3 p(u, v, 0.5 * (k1 * u * u + k2 * v * v));
      m0 += w;
      m1 += w * p;
      m2 += w * (p * p.transpose());
    }
  }
  ClusterMoments out;
  out.area = m0;
  out.centroid = m1 / m0;
  out.cov = m2 - (m1 * m1.transpose()) / m0;
  out.face_count = 1;
  return out;
}

/// Uniform random point on a triangle.
inline Vec3 sample_triangle(Rng& rng, const Vec3& a, const Vec3& b, const Vec3& c) {
  double r1 = std::sqrt(rng.uniform());
  double r2 = rng.uniform();
  return (1.0 - r1) * a + r1 * (1.0 - r2) * b + r1 * r2 * c;
}

/// Small deterministic test meshes.
TriangleMesh tetrahedron();
TriangleMesh two_triangle_square();
TriangleMesh strip_grid(int nx, int ny);  // unit-cell grid on z=0

}  // namespace testutil
