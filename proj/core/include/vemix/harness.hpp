#pragma once

// Manufactured solutions, error norms and convergence studies.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vemix/mesh.hpp"
#include "vemix/system.hpp"

namespace vemix {

using MatrixFunction = std::function<Eigen::Matrix2d(const Point&)>;

enum class ProblemKind { stokes, darcy, navier_stokes };

ProblemKind parse_problem(const std::string& name);
std::string to_string(ProblemKind problem);
/// Default form for each problem: eps, zero and grad respectively.
StiffnessForm default_form(ProblemKind problem);

struct ManufacturedCase {
  std::string name;
  VectorFunction u;
  MatrixFunction grad_u;  ///< (grad u)_{rc} = d u_r / d x_c
  VectorFunction laplacian_u;
  VectorFunction grad_div_u;
  ScalarFunction div_u;
  ScalarFunction p;
  VectorFunction grad_p;

  /// f = A u - grad p, plus (grad u) u when `convection` is set, where A u is
  /// u, -lap u or -div eps(u) = -(lap u + grad div u)/2 for the three forms.
  VectorFunction load(StiffnessForm form, bool convection) const;
  ProblemData problem_data(StiffnessForm form, bool convection) const;
};

/// stokes_s51, darcy_s52 or navier_stokes_s53.
ManufacturedCase manufactured_case(const std::string& name);
/// Divergence-free u = curl(psi) with deg psi = k+1 and a zero-mean pressure
/// of degree k-1, both with random coefficients drawn from `seed`.
ManufacturedCase polynomial_patch_case(int k, std::uint64_t seed = 1);
ManufacturedCase case_for(ProblemKind problem);

struct ErrorNorms {
  double u_h1 = 0.0;
  double u_l2 = 0.0;
  double p_l2 = 0.0;
};

/// Errors against the nabla and L2 projections of u_h, on a polygon rule of
/// degree 2k+2.
ErrorNorms compute_errors(const Discretization& disc, const SolveResult& result, const ManufacturedCase& c);

/// log(e_prev/e_cur) / log(h_prev/h_cur).
double convergence_rate(double e_prev, double e_cur, double h_prev, double h_cur);

struct RunOptions {
  std::uint64_t seed = 1;
  PicardOptions picard;
};

struct RunOutcome {
  double h = 0.0;
  int gndof = 0;
  ErrorNorms errors;
  SolveResult result;
};

/// Assembles and solves one problem on one mesh.
RunOutcome run_case(ProblemKind problem, StiffnessForm form, const ManufacturedCase& c, const PolygonalMesh& mesh,
                    int k, const RunOptions& options = {});

struct ConvergenceRow {
  std::string family;
  int n = 0;
  int k = 0;
  double h = 0.0;
  int gndof = 0;
  ErrorNorms errors;
  std::optional<double> rate_h1;
  std::optional<double> rate_l2;
  std::optional<double> rate_p;
};

/// Fills the rates of each row from the previous row with the same k.
void fill_rates(std::vector<ConvergenceRow>& rows);

struct StudyConfig {
  ProblemKind problem = ProblemKind::stokes;
  StiffnessForm form = StiffnessForm::eps;
  MeshFamily family = MeshFamily::quad;
  std::vector<int> n_list = {4, 8, 16, 32};
  std::vector<int> k_list = {2, 3};
  std::uint64_t seed = 1;
  double tol = 1e-10;
  int max_iter = 50;
  std::string output = "results.csv";
};

/// Flat "key = value" lines; '#' starts a comment. Lists are comma separated.
StudyConfig parse_study_config(std::istream& in);
StudyConfig read_study_config(const std::string& path);

/// Rows ordered by k, then n.
std::vector<ConvergenceRow> run_study(const StudyConfig& config);

/// Output path for one k: the configured path when a single k is studied,
/// otherwise "<stem>_k<K><ext>".
std::string study_output_path(const StudyConfig& config, int k);

void write_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void write_csv(const std::string& path, const std::vector<ConvergenceRow>& rows);

}  // namespace vemix
