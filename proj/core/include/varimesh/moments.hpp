#pragma once

#include "varimesh/mesh.hpp"

namespace varimesh {

/// Surface moments of a cluster of faces: total area, area centroid, and the
/// covariance integral centered at the centroid. Supports O(1) merge with
/// another cluster and O(1) removal of a subregion, so the optimization loops
/// never touch face lists.
struct ClusterMoments {
  double area = 0.0;
  Vec3 centroid = Vec3::Zero();
  Mat3 cov = Mat3::Zero();
  long face_count = 0;

  static ClusterMoments from_triangle(const TriangleMoments& t) {
    return {t.area, t.centroid, t.cov, 1};
  }
  bool empty() const { return face_count == 0; }
};

/// Exact moments of the union of two disjoint regions. The covariance update
/// shifts each part to the merged centroid:
///   U_k = U_i + U_j + A_i d_i d_i^T + A_j d_j d_j^T,  d = x_c - x_c(k)
ClusterMoments merge(const ClusterMoments& a, const ClusterMoments& b);

/// Exact moments of `whole` minus `part`, the inverse of merge. `part` must be
/// a genuine subregion; throws std::invalid_argument if the remaining area is
/// not positive (empty part against empty whole is the identity).
ClusterMoments split(const ClusterMoments& whole, const ClusterMoments& part);

enum class EnergyMode {
  Pca,                  // det(U)/area^4 with the degenerate planar branch
  PlaneFittingBaseline  // smallest covariance eigenvalue (best-plane residual)
};

/// Knobs of the cluster energy. The degeneracy threshold compares
/// det(U)/area^5, which is dimensionless only once the mesh is scaled to unit
/// bounding-box diagonal; the pipeline always evaluates energies in that
/// canonical frame.
struct EnergyParams {
  double degenerate_threshold = 1e-12;  // t: det/area^5 below this is planar
  double quality_coefficient = 1e-4;    // alpha: weight of the planar quality term
  EnergyMode mode = EnergyMode::Pca;
};

/// det and trace straight from the 3x3 entries; no eigendecomposition.
double det3(const Mat3& m);
inline double trace3(const Mat3& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

/// Variance energy of one cluster:
///   det(U)/area^4, or alpha * trace(U) * area when det(U)/area^5 < t.
/// det is clamped at zero so roundoff on planar clusters cannot produce a
/// negative energy. Requires area > 0.
double pca_energy(const ClusterMoments& m, const EnergyParams& params);

/// Integral of squared distances to the best fitting plane = smallest
/// eigenvalue of the covariance (clamped at zero).
double plane_fitting_energy(const ClusterMoments& m);

/// Energy under the configured mode.
double cluster_energy(const ClusterMoments& m, const EnergyParams& params);

/// Increase of total energy caused by merging two clusters:
///   E(merge(a,b)) - E(a) - E(b). May be negative.
double merge_cost(const ClusterMoments& a, const ClusterMoments& b, const EnergyParams& params);

/// Best fitting plane n·x + d = 0 of a cluster.
struct PlaneProxy {
  Vec3 normal = Vec3::UnitZ();
  double offset = 0.0;
  int cluster = -1;
  bool ambiguous = false;  // two smallest eigenvalues nearly equal

  double signed_distance(const Vec3& p) const { return normal.dot(p) + offset; }
  Vec3 project(const Vec3& p) const { return p - signed_distance(p) * normal; }
};

/// Plane through the centroid with the smallest-eigenvalue eigenvector as
/// normal. The sign is chosen so the normal has nonnegative dot product with
/// `orientation_hint` (pass the cluster's area-weighted face normal; a zero
/// hint keeps the solver's sign). Flags ambiguity when the two smallest
/// eigenvalues agree within 1e-9 * trace.
PlaneProxy proxy_plane(const ClusterMoments& m, const Vec3& orientation_hint = Vec3::Zero());

/// Eigenvalues of the covariance in decreasing order.
Vec3 covariance_eigenvalues(const Mat3& cov);

}  // namespace varimesh
