#pragma once

// Local matrices, global saddle-point assembly and solvers.
//
// The global system is
//
//   [ K    0    B^T ] [ chi    ]   [ f ]
//   [ 0    0    s^T ] [ lambda ] = [ 0 ]
//   [ B    s    0   ] [ rho    ]   [ g ]
//
// with pressure p_h = sum_E (h_E/|E|) sum_l rho_l m_l. It is the discrete form
// of a(u, v) + b(v, p) = (f, v), b(u, q) = (g, q) with b(v, q) = int div(v) q,
// so the strong momentum equation reads A u - grad p = f.

#include <Eigen/Sparse>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "vemix/projectors.hpp"
#include "vemix/space.hpp"

namespace vemix {

/// Bilinear form a(u, v): int u.v, int grad u : grad v, or int eps(u) : eps(v).
enum class StiffnessForm { zero, grad, eps };

StiffnessForm parse_stiffness_form(const std::string& name);
std::string to_string(StiffnessForm form);

/// (I - D Pi)^T (I - D Pi) with D the DoFs of the monomials.
Eigen::MatrixXd stabilization(const Eigen::MatrixXd& projector, const Eigen::MatrixXd& dofs_of_monomials);

Eigen::MatrixXd local_stiffness(StiffnessForm form, const LocalElement& el, const ProjectorSet& p);

/// Row 1: (h_E/|E|) int_dE phi_i . n; rows l >= 2: unit rows on the
/// divergence DoFs.
Eigen::MatrixXd local_b_matrix(const LocalElement& el);

/// (h_E/|E|) int_E m_l.
Eigen::VectorXd local_sigma(const LocalElement& el);

using VectorFunction = std::function<Point(const Point&)>;
using ScalarFunction = std::function<double(const Point&)>;

/// f_E,i = int (Pi0 f) . Pi0 phi_i.
Eigen::VectorXd local_load(const LocalElement& el, const ProjectorSet& p, const VectorFunction& f);
/// g_E,l = (h_E/|E|) int g m_l.
Eigen::VectorXd local_divergence_load(const LocalElement& el, const ScalarFunction& g);

/// C(w)_{ji} = int [(Pi0_{k-1} grad phi_i)(Pi0_k w)] . Pi0_k phi_j.
Eigen::MatrixXd local_convection(const LocalElement& el, const ProjectorSet& p, const Eigen::VectorXd& w);

/// Mesh, DoF map and the per-element projectors.
class Discretization {
 public:
  Discretization(PolygonalMesh mesh, int k);

  const PolygonalMesh& mesh() const noexcept { return mesh_; }
  int k() const noexcept { return k_; }
  const GlobalDoFMap& dofs() const noexcept { return dofs_; }
  int num_elements() const noexcept { return static_cast<int>(elements_.size()); }
  const LocalElement& element(int e) const { return elements_.at(e); }
  const ProjectorSet& projectors(int e) const { return projectors_.at(e); }

  /// Restriction of a global velocity vector to element e.
  Eigen::VectorXd local_values(int e, const Eigen::VectorXd& global) const;

 private:
  PolygonalMesh mesh_;
  int k_;
  GlobalDoFMap dofs_;
  std::vector<LocalElement> elements_;
  std::vector<ProjectorSet> projectors_;
};

struct ProblemData {
  VectorFunction load;
  ScalarFunction divergence_load;
  /// Velocity on the boundary; every boundary DoF is a Dirichlet DoF.
  VectorFunction dirichlet;
};

using SparseMatrix = Eigen::SparseMatrix<double>;

struct SaddleSystem {
  SparseMatrix K;  ///< GNDoF x GNDoF
  SparseMatrix B;  ///< pressure x GNDoF
  Eigen::VectorXd sigma;
  Eigen::VectorXd f;
  Eigen::VectorXd g;
  std::vector<bool> dirichlet_mask;
  Eigen::VectorXd dirichlet_values;  ///< GNDoF, zero off the boundary

  int num_velocity() const noexcept { return static_cast<int>(f.size()); }
  int num_pressure() const noexcept { return static_cast<int>(g.size()); }
};

SaddleSystem assemble(const Discretization& disc, StiffnessForm form, const ProblemData& data);

/// Global convection matrix C(w) for a global velocity vector w.
SparseMatrix assemble_convection(const Discretization& disc, const Eigen::VectorXd& w);

/// Matrix acting on [free velocity DoFs, lambda, rho] after eliminating the
/// Dirichlet DoFs, together with its right-hand side.
struct ReducedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  std::vector<int> free_dofs;
};

ReducedSystem reduce(const SaddleSystem& system);

struct SolveResult {
  Eigen::VectorXd chi;  ///< all velocity DoFs, boundary values included
  Eigen::VectorXd rho;
  double lambda = 0.0;
  double residual = 0.0;  ///< relative residual of the reduced system
  /// sum_E || div u_h ||^2_{L2(E)} from the divergence reconstruction.
  double divergence_norm2 = 0.0;
  /// sum_E int_E p_h.
  double pressure_mean = 0.0;
  int iterations = 0;
  std::vector<double> increments;
};

SolveResult solve_linear(const SaddleSystem& system);

/// Fills divergence_norm2 and pressure_mean.
void report_constraints(const Discretization& disc, const SaddleSystem& system, SolveResult& result);

struct PicardOptions {
  double tol = 1e-10;
  int max_iter = 50;
};

/// Picard iteration with K = K_grad + C(u^{m-1}) starting from the Stokes
/// solution. `system` must hold the grad-form blocks. Throws SolverError when
/// max_iter is reached; the message carries the increment history.
SolveResult solve_navier_stokes(const Discretization& disc, const SaddleSystem& system,
                                const PicardOptions& options = {});

/// Coordinate text format, one "row col value" triple per line, 0-based.
void write_coordinate(std::ostream& out, const SparseMatrix& matrix);
void write_coordinate(const std::string& path, const SparseMatrix& matrix);

}  // namespace vemix
