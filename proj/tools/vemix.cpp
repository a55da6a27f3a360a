// vemix: solve one manufactured problem or run a convergence study.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "vemix/error.hpp"
#include "vemix/harness.hpp"

namespace fs = std::filesystem;

namespace {

struct SolveArgs {
  std::string problem;
  std::string form;
  std::string mesh;
  int n = 0;
  int k = 2;
  std::uint64_t seed = 1;
  std::string out;
  std::string dump_dir;
};

void dump_matrices(const fs::path& dir, const vemix::Discretization& disc, const vemix::SaddleSystem& system) {
  fs::create_directories(dir);
  vemix::write_coordinate((dir / "K.txt").string(), system.K);
  vemix::write_coordinate((dir / "B.txt").string(), system.B);
  std::ofstream sigma(dir / "sigma.txt");
  sigma.precision(17);
  for (Eigen::Index i = 0; i < system.sigma.size(); ++i) sigma << system.sigma(i) << '\n';

  std::ofstream proj(dir / "projectors.csv");
  using vemix::ProjectorKind;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const vemix::ProjectorSet& p = disc.projectors(e);
    for (ProjectorKind kind : {ProjectorKind::divergence, ProjectorKind::nabla_k, ProjectorKind::eps_k,
                               ProjectorKind::zero_k, ProjectorKind::zero_km1_grad, ProjectorKind::zero_km1_eps}) {
      vemix::write_projector_csv(proj, kind, e, disc.k(), p.get(kind));
    }
  }
}

int run_solve(const SolveArgs& a) {
  const vemix::ProblemKind problem = vemix::parse_problem(a.problem);
  const vemix::StiffnessForm form = vemix::parse_stiffness_form(a.form);

  vemix::PolygonalMesh mesh;
  std::string family;
  if (a.mesh.rfind("file:", 0) == 0) {
    family = "file";
    mesh = vemix::read_mesh(a.mesh.substr(5));
  } else {
    family = vemix::to_string(vemix::parse_mesh_family(a.mesh));
    if (a.n < 1) throw vemix::InvalidArgumentError("--n must be positive for generated meshes");
    mesh = vemix::generate_mesh(vemix::parse_mesh_family(a.mesh), a.n, a.seed);
  }

  const vemix::ManufacturedCase c = vemix::case_for(problem);
  vemix::RunOptions options;
  options.seed = a.seed;
  const vemix::RunOutcome r = vemix::run_case(problem, form, c, mesh, a.k, options);

  if (!a.dump_dir.empty()) {
    const bool convection = problem == vemix::ProblemKind::navier_stokes;
    const vemix::Discretization disc(mesh, a.k);
    dump_matrices(a.dump_dir, disc, vemix::assemble(disc, form, c.problem_data(form, convection)));
  }

  vemix::ConvergenceRow row;
  row.family = family;
  row.n = a.n;
  row.k = a.k;
  row.h = r.h;
  row.gndof = r.gndof;
  row.errors = r.errors;
  if (!a.out.empty()) vemix::write_csv(a.out, {row});
  vemix::write_csv(std::cout, {row});
  spdlog::info("residual {:.2e}, sum ||div u_h||^2 = {:.2e}, mean(p_h) = {:.2e}, iterations {}", r.result.residual,
               r.result.divergence_norm2, r.result.pressure_mean, r.result.iterations);
  return 0;
}

int run_study(const std::string& config_path) {
  const vemix::StudyConfig cfg = vemix::read_study_config(config_path);
  const std::vector<vemix::ConvergenceRow> rows = vemix::run_study(cfg);
  for (int k : cfg.k_list) {
    std::vector<vemix::ConvergenceRow> part;
    for (const auto& r : rows)
      if (r.k == k) part.push_back(r);
    const std::string path = vemix::study_output_path(cfg, k);
    vemix::write_csv(path, part);
    spdlog::info("wrote {}", path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"High-order mixed virtual element solver"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  SolveArgs solve;
  CLI::App* s = app.add_subcommand("solve", "Solve one manufactured problem");
  s->add_option("--problem", solve.problem, "stokes, darcy or navier-stokes")->required();
  s->add_option("--form", solve.form, "eps, grad or zero")->required();
  s->add_option("--mesh", solve.mesh, "quad, hexa, voro or file:PATH")->required();
  s->add_option("--n", solve.n, "Mesh resolution");
  s->add_option("--k", solve.k, "Polynomial degree")->check(CLI::Range(2, 12));
  s->add_option("--seed", solve.seed, "Mesh seed");
  s->add_option("--out", solve.out, "CSV output file");
  s->add_option("--dump-matrices", solve.dump_dir, "Directory for K, B and projector dumps");

  std::string config;
  CLI::App* st = app.add_subcommand("study", "Run a convergence study");
  st->add_option("--config", config, "key=value config file")->required();

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("vemix"));
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  try {
    if (s->parsed()) return run_solve(solve);
    return run_study(config);
  } catch (const vemix::Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 2;
  }
}
