#pragma once

#include <cstdint>
#include <optional>

#include "varimesh/mesh.hpp"

namespace varimesh {

enum class SurfaceKind { Plane, Paraboloid, Sphere, Ellipsoid, Cylinder, Cube };

/// Principal curvature magnitudes at a surface point, |k_max| >= |k_min|.
struct CurvaturePair {
  double k_max = 0.0;
  double k_min = 0.0;
};

/// Analytic test surfaces with exact curvature evaluators, a closest-point
/// projector and deterministic tessellations.
///
/// Conventions:
///  - plane:       z = 0 over [-half, half]^2
///  - paraboloid:  z = x^2 + y^2 over [-half, half]^2
///  - sphere:      radius R centered at the origin
///  - ellipsoid:   semi-axes (a, b, c), axis-aligned, origin-centered
///  - cylinder:    radius R, z in [-h/2, h/2], capped at both ends
///  - cube:        axis-aligned, side s, origin-centered
class AnalyticSurface {
 public:
  static AnalyticSurface plane(double half = 1.0);
  static AnalyticSurface paraboloid(double half = 1.0);
  static AnalyticSurface sphere(double radius = 1.0);
  static AnalyticSurface ellipsoid(double a, double b, double c);
  static AnalyticSurface cylinder(double radius, double height);
  static AnalyticSurface cube(double side = 1.0);

  SurfaceKind kind() const { return kind_; }

  /// Closest point on the surface. Exact for plane/sphere/cylinder/cube;
  /// damped tangent-stepping iteration (tolerance 1e-10 of the shape scale)
  /// for paraboloid and ellipsoid.
  Vec3 project(const Vec3& p) const;

  /// Outward unit normal at a point on (or near) the surface.
  Vec3 normal_at(const Vec3& s) const;

  /// Principal curvature magnitudes at a surface point. Unset on cube edges
  /// (curvature undefined there, interior facet points return {0,0}).
  std::optional<CurvaturePair> principal_curvatures(const Vec3& s) const;

  /// Gaussian curvature k1*k2 (signed).
  double gaussian_curvature(const Vec3& s) const;

  /// Deterministic tessellation. Grid surfaces (plane, paraboloid) use an
  /// n x n vertex grid (resolution = n >= 2); the cube uses resolution
  /// cells per side per facet (12*res^2 faces); cylinder uses resolution as
  /// both the ring count per cap and row count on the side; sphere/ellipsoid
  /// use resolution as the icosahedron subdivision level (0 = icosahedron).
  TriangleMesh tessellate(int resolution) const;

  /// Characteristic length (used for iteration tolerances).
  double scale() const;

 private:
  AnalyticSurface(SurfaceKind kind, double p0, double p1 = 0.0, double p2 = 0.0)
      : kind_(kind), a_(p0), b_(p1), c_(p2) {}

  SurfaceKind kind_;
  double a_, b_, c_;  // meaning depends on kind
};

/// Displaces each vertex along the surface normal (or the averaged incident
/// face normal when no surface is given) by a Gaussian sample with standard
/// deviation sigma * bounding-box diagonal. Deterministic per seed.
TriangleMesh add_normal_noise(const TriangleMesh& mesh, const AnalyticSurface* surface,
                              double sigma, std::uint64_t seed);

}  // namespace varimesh
