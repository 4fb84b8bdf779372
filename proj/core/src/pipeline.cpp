#include "varimesh/pipeline.hpp"

#include <chrono>

#include <json.hpp>

namespace varimesh {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

ClusterMoments moments_to_original(const ClusterMoments& m, const MeshFrame& frame) {
  ClusterMoments out = m;
  const double s = frame.scale;
  out.area = m.area * s * s;
  out.centroid = frame.to_original(m.centroid);
  out.cov = m.cov * (s * s * s * s);
  return out;
}

std::vector<ClusterMoments> RemeshResult::cluster_moments_original() const {
  std::vector<ClusterMoments> out(partition.clusters.size());
  for (size_t c = 0; c < out.size(); ++c)
    out[c] = moments_to_original(partition.clusters[c], frame);
  return out;
}

RemeshResult run_remesh(const TriangleMesh& input, const RunConfig& config) {
  const auto t_total = Clock::now();
  RemeshResult result;
  result.frame = MeshFrame::of(input);

  const TriangleMesh canonical = to_canonical(input, result.frame);
  const FaceAdjacency adj = build_adjacency(canonical);
  const auto face_moments = all_triangle_moments(canonical);

  auto t0 = Clock::now();
  MergeResult merged = initial_partition(adj, face_moments, config.clusters, config.energy);
  result.partition = std::move(merged.partition);
  result.merge_energy_trace = std::move(merged.energy_trace);
  result.timings.merge_ms = ms_since(t0);

  t0 = Clock::now();
  result.swap_stats = optimize(result.partition, adj, face_moments, config.energy, config.swap);
  result.swap_energy_trace = result.swap_stats.energy_trace;
  result.timings.swap_ms = ms_since(t0);

  t0 = Clock::now();
  result.clean_stats = clean(result.partition, adj, face_moments, config.energy);

  if (config.mode != OutputMode::Partition) {
    result.extraction =
        extract_polygonal(canonical, adj, result.partition, config.boundary_corner_deg);
    result.polygonal = result.extraction.mesh;
    for (auto& v : result.polygonal.vertices) v = result.frame.to_original(v);

    CdtResult cdt = cdt_triangulate(result.extraction);
    result.cdt_mesh = std::move(cdt.mesh);
    for (auto& v : result.cdt_mesh.vertices) v = result.frame.to_original(v);

    if (config.mode == OutputMode::Triangular) {
      QemTarget target = config.budget.value_or(QemTarget::vertices(config.clusters));
      result.qem_stats = qem_simplify(result.cdt_mesh, target);
      result.final_mesh = result.qem_stats.mesh;
    } else {
      result.final_mesh = result.cdt_mesh;
    }
  }
  result.timings.mesh_ms = ms_since(t0);

  if (config.compute_error && config.mode != OutputMode::Partition &&
      !result.final_mesh.faces.empty()) {
    t0 = Clock::now();
    result.error = one_sided_error(input, result.final_mesh, config.threads);
    result.timings.metrics_ms = ms_since(t0);
  }
  result.timings.total_ms = ms_since(t_total);
  return result;
}

namespace {

// long traces are strided down for the report
nlohmann::json sampled_trace(const std::vector<double>& trace, size_t max_points = 512) {
  nlohmann::json arr = nlohmann::json::array();
  if (trace.empty()) return arr;
  const size_t stride = std::max<size_t>(1, (trace.size() + max_points - 1) / max_points);
  for (size_t i = 0; i < trace.size(); i += stride) arr.push_back(trace[i]);
  if ((trace.size() - 1) % stride != 0) arr.push_back(trace.back());
  return arr;
}

}  // namespace

std::string report_json(const TriangleMesh& input, const RunConfig& config,
                        const RemeshResult& result, const AnalyticSurface* surface,
                        bool with_timings) {
  nlohmann::json j;
  j["input"] = {{"vertices", input.vertex_count()},
                {"faces", input.face_count()},
                {"bbox_diag", input.bbox_diagonal()}};

  nlohmann::json out;
  switch (config.mode) {
    case OutputMode::Partition:
      out["clusters"] = result.partition.cluster_count();
      break;
    case OutputMode::Polygonal:
      out["vertices"] = result.polygonal.vertex_count();
      out["polygons"] = result.polygonal.polygon_count();
      break;
    case OutputMode::Triangular:
      out["vertices"] = result.final_mesh.vertex_count();
      out["faces"] = result.final_mesh.face_count();
      break;
  }
  j["output"] = out;

  j["config"] = {{"clusters", config.clusters},
                 {"mode", config.mode == OutputMode::Partition    ? "partition"
                          : config.mode == OutputMode::Polygonal ? "polygonal"
                                                                 : "triangular"},
                 {"energy_mode",
                  config.energy.mode == EnergyMode::Pca ? "pca" : "plane_fitting_baseline"},
                 {"degenerate_threshold", config.energy.degenerate_threshold},
                 {"quality_coefficient", config.energy.quality_coefficient},
                 {"swap_epsilon_rel", config.swap.epsilon_rel},
                 {"max_swap_iterations", config.swap.max_iterations},
                 {"threads", config.threads}};

  nlohmann::json trace;
  trace["merge"] = sampled_trace(result.merge_energy_trace);
  trace["swap"] = result.swap_energy_trace;
  j["energy_trace"] = trace;
  j["swap"] = {{"iterations", result.swap_stats.iterations},
               {"accepted", result.swap_stats.accepted},
               {"converged", result.swap_stats.converged}};
  j["cleaning"] = {{"components_merged", result.clean_stats.components_merged},
                   {"faces_moved", result.clean_stats.faces_moved},
                   {"unresolved", result.clean_stats.unresolved}};

  if (result.error) {
    j["mean_error"] = result.error->mean;
    j["max_error"] = result.error->max;
  } else {
    j["mean_error"] = nullptr;
    j["max_error"] = nullptr;
  }

  if (surface) {
    const auto moments = result.cluster_moments_original();
    const auto ar = aspect_ratio_error(moments, *surface);
    const auto sz = size_distribution(moments, *surface);
    j["dr_histogram"] = ar.histogram;
    j["dr_median_abs"] = ar.median_abs_dr;
    j["dr_excluded_flat"] = ar.excluded_flat;
    j["size_cv"] = {{"area_sqrt_k", sz.cv_area_sqrt_k},
                    {"raw_area", sz.cv_raw_area},
                    {"excluded_nonpositive_k", sz.excluded_nonpositive_k}};
  } else {
    j["dr_histogram"] = nullptr;
    j["size_cv"] = nullptr;
  }

  if (with_timings) {
    j["timings_ms"] = {{"merge", result.timings.merge_ms},
                       {"swap", result.timings.swap_ms},
                       {"mesh", result.timings.mesh_ms},
                       {"metrics", result.timings.metrics_ms},
                       {"total", result.timings.total_ms}};
  }
  return j.dump(2) + "\n";
}

}  // namespace varimesh
