// varimesh: variance-driven surface remeshing.
//
//   varimesh generate-shape paraboloid --resolution 257 --out paraboloid.ply
//   varimesh remesh paraboloid.ply --clusters 500 --mode polygonal --out-dir out/
//   varimesh evaluate paraboloid.ply out/paraboloid_cdt.obj

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "varimesh/mesh_io.hpp"
#include "varimesh/pipeline.hpp"
#include "varimesh/shapes.hpp"

namespace fs = std::filesystem;
using namespace varimesh;

namespace {

std::vector<double> parse_params(const std::string& spec) {
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(std::stod(tok));
  return out;
}

// "<kind>[:p1,p2,...]", e.g. "ellipsoid:2,1,1" or "sphere:1"
AnalyticSurface parse_surface(const std::string& spec) {
  const size_t colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  std::vector<double> p =
      colon == std::string::npos ? std::vector<double>{} : parse_params(spec.substr(colon + 1));
  auto arg = [&p](size_t i, double fallback) { return i < p.size() ? p[i] : fallback; };
  if (kind == "plane") return AnalyticSurface::plane(arg(0, 1.0));
  if (kind == "paraboloid") return AnalyticSurface::paraboloid(arg(0, 1.0));
  if (kind == "sphere") return AnalyticSurface::sphere(arg(0, 1.0));
  if (kind == "ellipsoid") return AnalyticSurface::ellipsoid(arg(0, 2.0), arg(1, 1.0), arg(2, 1.0));
  if (kind == "cylinder") return AnalyticSurface::cylinder(arg(0, 1.0), arg(1, 2.0));
  if (kind == "cube") return AnalyticSurface::cube(arg(0, 1.0));
  throw CLI::ValidationError("unknown surface kind '" + kind + "'");
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
}

int cmd_remesh(const std::string& input_path, RunConfig config, const std::string& out_dir,
               std::string report_path, const std::string& surface_spec, bool with_timings,
               int target_vertices, int target_faces) {
  if (target_vertices > 0 && target_faces > 0)
    throw CLI::ValidationError("--target-vertices and --target-faces are exclusive");
  if (target_vertices > 0) config.budget = QemTarget::vertices(target_vertices);
  if (target_faces > 0) config.budget = QemTarget::faces(target_faces);

  TriangleMesh input = load_mesh(input_path);
  std::cerr << "loaded " << input_path << ": " << input.vertex_count() << " vertices, "
            << input.face_count() << " faces\n";

  RemeshResult result = run_remesh(input, config);

  fs::create_directories(out_dir);
  const std::string stem = (fs::path(out_dir) / stem_of(input_path)).string();

  // colored partition for visual inspection
  TriangleMesh colored = input;
  colored.face_colors.resize(colored.faces.size());
  for (int f = 0; f < colored.face_count(); ++f)
    colored.face_colors[f] = cluster_color(result.partition.face_to_cluster[f]);
  write_mesh(colored, stem + "_partition.ply");

  if (config.mode != OutputMode::Partition) {
    write_polygonal_mesh(result.polygonal, stem + "_polygons.obj");
    write_mesh(result.cdt_mesh, stem + "_cdt.obj");
  }
  if (config.mode == OutputMode::Triangular) write_mesh(result.final_mesh, stem + "_final.obj");

  std::optional<AnalyticSurface> surface;
  if (!surface_spec.empty()) surface = parse_surface(surface_spec);
  if (report_path.empty()) report_path = stem + "_report.json";
  write_text(report_path,
             report_json(input, config, result, surface ? &*surface : nullptr, with_timings));

  std::cerr << "clusters: " << result.partition.cluster_count()
            << ", swap passes: " << result.swap_stats.iterations
            << " (accepted " << result.swap_stats.accepted << ")"
            << ", cleaned faces: " << result.clean_stats.faces_moved << "\n";
  if (config.mode != OutputMode::Partition)
    std::cerr << "polygons: " << result.polygonal.polygon_count()
              << ", cdt faces: " << result.cdt_mesh.face_count() << "\n";
  if (config.mode == OutputMode::Triangular)
    std::cerr << "final: " << result.final_mesh.vertex_count() << " vertices, "
              << result.final_mesh.face_count() << " faces\n";
  if (result.error)
    std::cout << "mean_error " << result.error->mean << "\nmax_error " << result.error->max
              << "\n";
  std::cerr << "report: " << report_path << "\n";
  return 0;
}

int cmd_evaluate(const std::string& original_path, const std::string& result_path,
                 const std::string& report_path, int threads) {
  TriangleMesh original = load_mesh(original_path);
  TriangleMesh result = load_mesh(result_path);
  OneSidedError err = one_sided_error(original, result, threads);
  std::cout << "mean_error " << err.mean << "\nmax_error " << err.max << "\n";
  if (!report_path.empty()) {
    std::ostringstream json;
    json.precision(17);
    json << "{\n  \"original\": \"" << original_path << "\",\n  \"result\": \"" << result_path
         << "\",\n  \"bbox_diag\": " << err.bbox_diagonal << ",\n  \"mean_error\": " << err.mean
         << ",\n  \"max_error\": " << err.max << "\n}\n";
    write_text(report_path, json.str());
  }
  return 0;
}

int cmd_generate(const std::string& kind_spec, int resolution, const std::string& out_path,
                 double noise_sigma, std::uint64_t seed) {
  AnalyticSurface surface = parse_surface(kind_spec);
  TriangleMesh mesh = surface.tessellate(resolution);
  if (noise_sigma > 0.0) mesh = add_normal_noise(mesh, &surface, noise_sigma, seed);
  mesh.validate();
  write_mesh(mesh, out_path);
  std::cerr << "wrote " << out_path << ": " << mesh.vertex_count() << " vertices, "
            << mesh.face_count() << " faces\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variance-driven surface remeshing"};
  app.require_subcommand(1);

  // remesh
  auto* remesh = app.add_subcommand("remesh", "partition a mesh and extract a coarse mesh");
  std::string input_path, out_dir = ".", report_path, surface_spec, mode_str = "polygonal",
              energy_str = "pca";
  RunConfig config;
  int target_vertices = 0, target_faces = 0;
  bool no_timings = false;
  remesh->add_option("input", input_path, "input mesh (.obj/.ply)")->required();
  remesh->add_option("-n,--clusters", config.clusters, "number of clusters")
      ->default_val(500);
  remesh->add_option("--mode", mode_str, "partition | polygonal | triangular")
      ->check(CLI::IsMember({"partition", "polygonal", "triangular"}))
      ->default_val("polygonal");
  remesh->add_option("--target-vertices", target_vertices,
                     "vertex budget for the simplification stage (triangular mode)");
  remesh->add_option("--target-faces", target_faces,
                     "face budget for the simplification stage (triangular mode)");
  remesh->add_option("--energy", energy_str, "pca | plane (plane-fitting baseline)")
      ->check(CLI::IsMember({"pca", "plane"}))
      ->default_val("pca");
  remesh
      ->add_option("-t,--degenerate-threshold", config.energy.degenerate_threshold,
                   "det/area^5 below this marks a planar cluster (unit-diagonal frame)")
      ->default_val(1e-12);
  remesh
      ->add_option("-a,--alpha", config.energy.quality_coefficient,
                   "quality coefficient of the planar branch")
      ->default_val(1e-4);
  remesh
      ->add_option("--swap-epsilon", config.swap.epsilon_rel,
                   "relative minimum energy decrease per accepted swap")
      ->default_val(1e-14);
  remesh->add_option("--max-swap-iterations", config.swap.max_iterations)->default_val(100);
  remesh->add_option("--boundary-corner-deg", config.boundary_corner_deg,
                     "open-boundary turn angle that forces an anchor")
      ->default_val(60.0);
  remesh->add_option("--threads", config.threads, "threads for parallel sections")
      ->default_val(1);
  remesh->add_option("-o,--out-dir", out_dir, "output directory")->default_val(".");
  remesh->add_option("--report", report_path, "report JSON path");
  remesh->add_option("--analytic", surface_spec,
                     "analytic reference surface for curvature metrics, e.g. ellipsoid:2,1,1");
  remesh->add_flag("--no-timings", no_timings, "omit timings from the report");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "one-sided approximation error");
  std::string eval_original, eval_result, eval_report;
  int eval_threads = 1;
  evaluate->add_option("original", eval_original)->required();
  evaluate->add_option("result", eval_result)->required();
  evaluate->add_option("--report", eval_report, "write a JSON report");
  evaluate->add_option("--threads", eval_threads)->default_val(1);

  // generate-shape
  auto* generate = app.add_subcommand("generate-shape", "tessellate an analytic surface");
  std::string gen_kind, gen_out;
  int gen_resolution = 65;
  double gen_sigma = 0.0;
  std::uint64_t gen_seed = 0;
  generate
      ->add_option("kind", gen_kind,
                   "plane[:half] | paraboloid[:half] | sphere[:r] | ellipsoid[:a,b,c] | "
                   "cylinder[:r,h] | cube[:side]")
      ->required();
  generate->add_option("-r,--resolution", gen_resolution,
                       "grid vertices per side; subdivision level for sphere/ellipsoid")
      ->default_val(65);
  generate->add_option("-o,--out", gen_out, "output mesh path")->required();
  generate->add_option("--noise-sigma", gen_sigma,
                       "normal-direction Gaussian noise, fraction of the bbox diagonal")
      ->default_val(0.0);
  generate->add_option("--seed", gen_seed)->default_val(0);

  CLI11_PARSE(app, argc, argv);

  try {
    if (remesh->parsed()) {
      config.mode = mode_str == "partition"    ? OutputMode::Partition
                    : mode_str == "polygonal" ? OutputMode::Polygonal
                                              : OutputMode::Triangular;
      config.energy.mode =
          energy_str == "pca" ? EnergyMode::Pca : EnergyMode::PlaneFittingBaseline;
      return cmd_remesh(input_path, config, out_dir, report_path, surface_spec, !no_timings,
                        target_vertices, target_faces);
    }
    if (evaluate->parsed())
      return cmd_evaluate(eval_original, eval_result, eval_report, eval_threads);
    if (generate->parsed())
      return cmd_generate(gen_kind, gen_resolution, gen_out, gen_sigma, gen_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
