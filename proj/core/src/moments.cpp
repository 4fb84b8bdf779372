#include "varimesh/moments.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace varimesh {

ClusterMoments merge(const ClusterMoments& a, const ClusterMoments& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  ClusterMoments out;
  out.area = a.area + b.area;
  out.face_count = a.face_count + b.face_count;
  out.centroid = (a.area * a.centroid + b.area * b.centroid) / out.area;
  const Vec3 da = a.centroid - out.centroid;
  const Vec3 db = b.centroid - out.centroid;
  out.cov = a.cov + b.cov + a.area * (da * da.transpose()) + b.area * (db * db.transpose());
  return out;
}

ClusterMoments split(const ClusterMoments& whole, const ClusterMoments& part) {
  if (part.empty()) return whole;
  ClusterMoments out;
  out.area = whole.area - part.area;
  out.face_count = whole.face_count - part.face_count;
  if (!(out.area > 0.0) || out.face_count < 0)
    throw std::invalid_argument("split: part is not a proper subregion of whole");
  out.centroid = (whole.area * whole.centroid - part.area * part.centroid) / out.area;
  const Vec3 dr = out.centroid - whole.centroid;
  const Vec3 dp = part.centroid - whole.centroid;
  out.cov = whole.cov - part.cov - out.area * (dr * dr.transpose()) -
            part.area * (dp * dp.transpose());
  return out;
}

double det3(const Mat3& m) {
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
         m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double pca_energy(const ClusterMoments& m, const EnergyParams& params) {
  const double area = m.area;
  const double det = std::max(det3(m.cov), 0.0);
  const double area4 = (area * area) * (area * area);
  if (det < params.degenerate_threshold * area4 * area)
    return params.quality_coefficient * trace3(m.cov) * area;
  return det / area4;
}

double plane_fitting_energy(const ClusterMoments& m) {
  return std::max(covariance_eigenvalues(m.cov).z(), 0.0);
}

double cluster_energy(const ClusterMoments& m, const EnergyParams& params) {
  return params.mode == EnergyMode::Pca ? pca_energy(m, params) : plane_fitting_energy(m);
}

double merge_cost(const ClusterMoments& a, const ClusterMoments& b, const EnergyParams& params) {
  return cluster_energy(merge(a, b), params) - cluster_energy(a, params) -
         cluster_energy(b, params);
}

Vec3 covariance_eigenvalues(const Mat3& cov) {
  Eigen::SelfAdjointEigenSolver<Mat3> solver(cov, Eigen::EigenvaluesOnly);
  Vec3 ev = solver.eigenvalues();  // ascending
  return {ev.z(), ev.y(), ev.x()};
}

PlaneProxy proxy_plane(const ClusterMoments& m, const Vec3& orientation_hint) {
  if (!(m.area > 0.0)) throw std::invalid_argument("proxy_plane: empty cluster");
  Eigen::SelfAdjointEigenSolver<Mat3> solver(m.cov);
  PlaneProxy proxy;
  Vec3 normal = solver.eigenvectors().col(0);  // smallest eigenvalue first
  const Vec3 ev = solver.eigenvalues();
  proxy.ambiguous = (ev.y() - ev.x()) <= 1e-9 * trace3(m.cov);
  if (orientation_hint.squaredNorm() > 0.0 && normal.dot(orientation_hint) < 0.0)
    normal = -normal;
  proxy.normal = normal.normalized();
  proxy.offset = -proxy.normal.dot(m.centroid);
  return proxy;
}

}  // namespace varimesh
