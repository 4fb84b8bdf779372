#include "varimesh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "varimesh/mesh.hpp"

namespace varimesh {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Ericson, Real-Time Collision Detection, 5.1.5
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return a;

  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return b;

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return c;

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);

  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

namespace {

double box_sq_distance(const Box3& box, const Vec3& p) {
  double d2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    double d = std::max({box.lo[k] - p[k], 0.0, p[k] - box.hi[k]});
    d2 += d * d;
  }
  return d2;
}

}  // namespace

ClosestPointIndex::ClosestPointIndex(const TriangleMesh& mesh) {
  if (mesh.faces.empty()) throw std::invalid_argument("ClosestPointIndex: empty mesh");
  triangles_.resize(mesh.faces.size());
  for (size_t f = 0; f < mesh.faces.size(); ++f)
    triangles_[f] = {mesh.vertices[mesh.faces[f][0]], mesh.vertices[mesh.faces[f][1]],
                     mesh.vertices[mesh.faces[f][2]]};
  std::vector<int> tris(triangles_.size());
  std::iota(tris.begin(), tris.end(), 0);
  nodes_.reserve(2 * triangles_.size());
  root_ = build(tris, 0, static_cast<int>(tris.size()));
  order_ = std::move(tris);
}

int ClosestPointIndex::build(std::vector<int>& tris, int begin, int end) {
  Node node;
  node.begin = begin;
  node.end = end;
  Box3 centroid_box;
  for (int i = begin; i < end; ++i) {
    const auto& t = triangles_[tris[i]];
    node.box.expand(t[0]);
    node.box.expand(t[1]);
    node.box.expand(t[2]);
    centroid_box.expand((t[0] + t[1] + t[2]) / 3.0);
  }
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= 4) return index;

  int axis = 0;
  const Vec3 ext = centroid_box.extent();
  if (ext.y() > ext.x()) axis = 1;
  if (ext.z() > ext[axis]) axis = 2;
  const int mid = (begin + end) / 2;
  std::nth_element(tris.begin() + begin, tris.begin() + mid, tris.begin() + end,
                   [this, axis](int a, int b) {
                     const auto &ta = triangles_[a], &tb = triangles_[b];
                     return ta[0][axis] + ta[1][axis] + ta[2][axis] <
                            tb[0][axis] + tb[1][axis] + tb[2][axis];
                   });
  const int left = build(tris, begin, mid);
  const int right = build(tris, mid, end);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

ClosestPointIndex::Hit ClosestPointIndex::closest(const Vec3& query) const {
  Hit best;
  double best_sq = std::numeric_limits<double>::infinity();
  int stack[128];
  int top = 0;
  stack[top++] = root_;
  while (top > 0) {
    const Node& node = nodes_[stack[--top]];
    if (box_sq_distance(node.box, query) >= best_sq) continue;
    if (node.left < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int t = order_[i];
        const auto& tri = triangles_[t];
        const Vec3 q = closest_point_on_triangle(query, tri[0], tri[1], tri[2]);
        const double d2 = (q - query).squaredNorm();
        if (d2 < best_sq) {
          best_sq = d2;
          best.point = q;
          best.triangle = t;
        }
      }
    } else {
      // visit the nearer child first
      const double dl = box_sq_distance(nodes_[node.left].box, query);
      const double dr = box_sq_distance(nodes_[node.right].box, query);
      const int near = dl <= dr ? node.left : node.right;
      const int far = dl <= dr ? node.right : node.left;
      stack[top++] = far;
      stack[top++] = near;
    }
  }
  best.distance = std::sqrt(best_sq);
  return best;
}

OneSidedError one_sided_error(const TriangleMesh& original, const TriangleMesh& result,
                              int threads) {
  if (original.vertices.empty() || result.faces.empty())
    throw std::invalid_argument("one_sided_error: empty input");
  ClosestPointIndex index(result);
  OneSidedError report;
  report.bbox_diagonal = original.bbox_diagonal();
  const double inv_diag = 1.0 / report.bbox_diagonal;
  const int nv = original.vertex_count();
  report.distances.resize(nv);

  auto worker = [&](int begin, int end) {
    for (int v = begin; v < end; ++v)
      report.distances[v] = index.closest(original.vertices[v]).distance * inv_diag;
  };
  threads = std::max(1, threads);
  if (threads == 1 || nv < 4096) {
    worker(0, nv);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (nv + threads - 1) / threads;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back(worker, t * chunk, std::min(nv, (t + 1) * chunk));
    for (auto& th : pool) th.join();
  }

  double sum = 0.0;
  for (double d : report.distances) {
    sum += d;
    report.max = std::max(report.max, d);
  }
  report.mean = sum / nv;
  return report;
}

AspectRatioReport aspect_ratio_error(const std::vector<ClusterMoments>& clusters,
                                     const AnalyticSurface& surface,
                                     const std::vector<char>* include) {
  AspectRatioReport report;
  const double flat_tol = 1e-9 / surface.scale();
  for (size_t c = 0; c < clusters.size(); ++c) {
    if (include && !(*include)[c]) continue;
    const Vec3 s = surface.project(clusters[c].centroid);
    auto curvature = surface.principal_curvatures(s);
    if (!curvature || curvature->k_min <= flat_tol) {
      ++report.excluded_flat;
      continue;
    }
    const Vec3 ev = covariance_eigenvalues(clusters[c].cov);
    const double lambda2 = std::max(ev.y(), 0.0);
    if (lambda2 <= 0.0) {
      ++report.excluded_flat;
      continue;
    }
    const double r_m = std::sqrt(std::max(ev.x(), 0.0) / lambda2);
    const double r_t = std::sqrt(curvature->k_max / curvature->k_min);
    const double dr = (r_m - r_t) / r_t;
    report.dr.push_back(dr);
    report.cluster_ids.push_back(static_cast<int>(c));
    const double clamped = std::clamp(dr, -1.0, 1.0);
    int bin = std::min(39, static_cast<int>((clamped + 1.0) * 20.0));
    ++report.histogram[bin];
  }
  if (!report.dr.empty()) {
    std::vector<double> abs_dr(report.dr.size());
    for (size_t i = 0; i < report.dr.size(); ++i) abs_dr[i] = std::abs(report.dr[i]);
    std::sort(abs_dr.begin(), abs_dr.end());
    const size_t n = abs_dr.size();
    report.median_abs_dr = n % 2 ? abs_dr[n / 2] : 0.5 * (abs_dr[n / 2 - 1] + abs_dr[n / 2]);
  }
  return report;
}

double coefficient_of_variation(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  if (mean == 0.0) return 0.0;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= values.size();
  return std::sqrt(var) / mean;
}

SizeReport size_distribution(const std::vector<ClusterMoments>& clusters,
                             const AnalyticSurface& surface, const std::vector<char>* include) {
  SizeReport report;
  std::vector<double> raw_area;
  for (size_t c = 0; c < clusters.size(); ++c) {
    if (include && !(*include)[c]) continue;
    const Vec3 s = surface.project(clusters[c].centroid);
    const double K = surface.gaussian_curvature(s);
    if (K <= 0.0) {
      ++report.excluded_nonpositive_k;
      continue;
    }
    report.area_sqrt_k.push_back(clusters[c].area * std::sqrt(K));
    raw_area.push_back(clusters[c].area);
  }
  report.cv_area_sqrt_k = coefficient_of_variation(report.area_sqrt_k);
  report.cv_raw_area = coefficient_of_variation(raw_area);
  return report;
}

std::vector<char> clusters_touching_boundary(const Partition& partition,
                                             const FaceAdjacency& adj) {
  std::vector<char> touches(partition.cluster_count(), 0);
  for (int f = 0; f < partition.face_count(); ++f)
    if (adj.has_boundary_edge(f)) touches[partition.face_to_cluster[f]] = 1;
  return touches;
}

}  // namespace varimesh
