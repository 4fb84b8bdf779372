#pragma once

#include <array>
#include <vector>

#include "varimesh/moments.hpp"
#include "varimesh/partition.hpp"
#include "varimesh/shapes.hpp"

namespace varimesh {

/// Axis-aligned BVH over triangles answering exact closest-point queries.
class ClosestPointIndex {
 public:
  explicit ClosestPointIndex(const TriangleMesh& mesh);

  struct Hit {
    double distance = 0.0;
    Vec3 point = Vec3::Zero();
    int triangle = -1;
  };
  Hit closest(const Vec3& query) const;

 private:
  struct Node {
    Box3 box;
    int left = -1, right = -1;  // children, or leaf range when left < 0
    int begin = 0, end = 0;
  };
  int build(std::vector<int>& tris, int begin, int end);

  std::vector<Node> nodes_;
  std::vector<int> order_;
  std::vector<std::array<Vec3, 3>> triangles_;
  int root_ = -1;
};

/// Exact closest point on a triangle to a point.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// One-sided approximation error: for each vertex of `original`, the distance
/// to the closest point on `result`, normalized by the bounding-box diagonal
/// of `original`.
struct OneSidedError {
  std::vector<double> distances;  // normalized, one per original vertex
  double mean = 0.0;
  double max = 0.0;
  double bbox_diagonal = 0.0;  // of the original, in model units
};
OneSidedError one_sided_error(const TriangleMesh& original, const TriangleMesh& result,
                              int threads = 1);

/// Relative aspect ratio error per cluster: (r_m - r_t)/r_t, where r_m is
/// sqrt(lambda1/lambda2) of the cluster covariance and r_t is
/// sqrt(|k_max/k_min|) at the projection of the cluster centroid onto the
/// analytic surface. Clusters sitting on flat or umbilic-degenerate spots
/// (k_min ~ 0) are excluded and counted separately.
struct AspectRatioReport {
  std::vector<double> dr;        // per included cluster
  std::vector<int> cluster_ids;  // matching entries of dr
  int excluded_flat = 0;
  std::array<long, 40> histogram{};  // uniform bins over [-1, 1], ends clamped
  double median_abs_dr = 0.0;
};
AspectRatioReport aspect_ratio_error(const std::vector<ClusterMoments>& clusters,
                                     const AnalyticSurface& surface,
                                     const std::vector<char>* include = nullptr);

/// Cluster size statistics against the Gaussian-curvature size law:
/// area * sqrt(K) at the projected centroid should equalize across clusters.
/// Clusters over K <= 0 are excluded from both statistics.
struct SizeReport {
  std::vector<double> area_sqrt_k;
  double cv_area_sqrt_k = 0.0;  // coefficient of variation (std/mean)
  double cv_raw_area = 0.0;     // same clusters, raw areas
  int excluded_nonpositive_k = 0;
};
SizeReport size_distribution(const std::vector<ClusterMoments>& clusters,
                             const AnalyticSurface& surface,
                             const std::vector<char>* include = nullptr);

/// Clusters with at least one face on the open mesh boundary.
std::vector<char> clusters_touching_boundary(const Partition& partition,
                                             const struct FaceAdjacency& adj);

/// Coefficient of variation (population std / mean) of a sample.
double coefficient_of_variation(const std::vector<double>& values);

}  // namespace varimesh
