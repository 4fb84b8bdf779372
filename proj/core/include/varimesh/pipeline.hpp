#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "varimesh/clean.hpp"
#include "varimesh/merge.hpp"
#include "varimesh/meshgen.hpp"
#include "varimesh/metrics.hpp"
#include "varimesh/qem.hpp"
#include "varimesh/swap.hpp"

namespace varimesh {

enum class OutputMode { Partition, Polygonal, Triangular };

/// One remeshing run: all knobs of the merge/swap/clean/meshing pipeline.
struct RunConfig {
  int clusters = 500;
  OutputMode mode = OutputMode::Polygonal;
  std::optional<QemTarget> budget;  // triangular mode; defaults to `clusters` vertices
  EnergyParams energy;
  SwapSchedule swap;
  double boundary_corner_deg = 60.0;
  int threads = 1;
  bool compute_error = true;  // one-sided error of the triangulated output
};

struct StageTimings {
  double merge_ms = 0.0;
  double swap_ms = 0.0;
  double mesh_ms = 0.0;  // clean + extraction + CDT + QEM
  double metrics_ms = 0.0;
  double total_ms = 0.0;
};

/// Everything a run produces. Meshes are in the input's original coordinates;
/// partition moments are kept in the canonical unit-diagonal frame together
/// with the frame that maps them back.
struct RemeshResult {
  MeshFrame frame;
  Partition partition;  // canonical-frame moments
  std::vector<double> merge_energy_trace;
  std::vector<double> swap_energy_trace;
  SwapResult swap_stats;
  CleanResult clean_stats;

  PolygonalExtraction extraction;  // canonical frame
  PolygonalMesh polygonal;         // original coordinates
  TriangleMesh cdt_mesh;           // original coordinates
  TriangleMesh final_mesh;         // after QEM (triangular mode)
  QemResult qem_stats;

  std::optional<OneSidedError> error;  // original -> triangulated output
  StageTimings timings;

  /// Cluster moments mapped back to original units.
  std::vector<ClusterMoments> cluster_moments_original() const;
};

/// Runs load -> adjacency -> merge -> swap -> clean (and, per mode,
/// extraction -> CDT -> QEM) on a validated mesh.
RemeshResult run_remesh(const TriangleMesh& input, const RunConfig& config);

/// Moments rescaled from the canonical frame to original units
/// (area x s^2, covariance x s^4, centroid de-normalized).
ClusterMoments moments_to_original(const ClusterMoments& m, const MeshFrame& frame);

/// The JSON report for a run (schema documented in the README). Timings are
/// included unless `with_timings` is false (byte-identical reruns).
std::string report_json(const TriangleMesh& input, const RunConfig& config,
                        const RemeshResult& result, const AnalyticSurface* surface,
                        bool with_timings);

}  // namespace varimesh
