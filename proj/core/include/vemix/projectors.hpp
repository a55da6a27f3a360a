#pragma once

// Local projectors computed from DoF values only.
//
// Every projector is a dense matrix with one column per local DoF; column i
// holds the polynomial coefficients of the projection of the i-th basis
// function. Targets:
//   divergence        M_{k-1}           (pi_{k-1} rows)
//   nabla, eps, zero  [M_k]^2           (2 pi_k rows)
//   zero_grad/eps     [M_{k-1}]^{2x2}   (4 pi_{k-1} rows)

#include <iosfwd>
#include <string>
#include <vector>

#include "vemix/quadrature.hpp"
#include "vemix/space.hpp"

namespace vemix {

/// Per-element data shared by the projectors and the local matrices.
struct LocalElement {
  int id = -1;
  ElementGeometry geometry;
  LocalSpace space;
  /// Element rule of degree max(2k, 3k-1).
  PolygonRule rule;
  /// Integrals of the scaled monomials up to degree 3k-1.
  MonomialMoments moments;

  int k() const noexcept { return space.k(); }
  int ndof() const noexcept { return space.ndof(); }
  const ElementFrame& frame() const noexcept { return geometry.frame; }
};

int element_rule_degree(int k) noexcept;

LocalElement build_local_element(int k, const ElementGeometry& geometry, int id = -1);

enum class ProjectorKind { divergence, nabla_k, eps_k, zero_k, zero_km1_grad, zero_km1_eps };

std::string to_string(ProjectorKind kind);

Eigen::MatrixXd divergence_matrix(const LocalElement& el);
Eigen::MatrixXd pi_nabla_matrix(const LocalElement& el);
Eigen::MatrixXd pi_eps_matrix(const LocalElement& el);
/// Uses the reconstructed divergence and the enhancing condition internally.
Eigen::MatrixXd pi_zero_matrix(const LocalElement& el);
Eigen::MatrixXd pi_zero_grad_matrix(const LocalElement& el);
Eigen::MatrixXd pi_zero_eps_matrix(const LocalElement& el);

/// DoF values of every vector monomial of [M_k]^2 (NDoF x 2 pi_k), exact.
Eigen::MatrixXd polynomial_dof_matrix(const LocalElement& el);

struct ProjectorSet {
  Eigen::MatrixXd divergence;
  Eigen::MatrixXd nabla;
  Eigen::MatrixXd eps;
  Eigen::MatrixXd zero;
  Eigen::MatrixXd zero_grad;
  Eigen::MatrixXd zero_eps;
  /// polynomial_dof_matrix, used by the stabilization.
  Eigen::MatrixXd dofs_of_monomials;

  const Eigen::MatrixXd& get(ProjectorKind kind) const;
};

ProjectorSet compute_projectors(const LocalElement& el);

/// CSV dump: a header line "kind,element,k,rows,cols" and its values, then
/// the matrix row-major.
void write_projector_csv(std::ostream& out, ProjectorKind kind, int element, int k,
                         const Eigen::MatrixXd& matrix);

/// Gram matrix of [M_n]^2 in the L2 inner product.
Eigen::MatrixXd vector_mass(const MonomialMoments& moments, int n);
/// Gram matrix of [M_n]^2 in the H1 seminorm.
Eigen::MatrixXd vector_stiffness(const MonomialMoments& moments, const ElementFrame& frame, int n);
/// Gram matrix of [M_n]^2 in the strain inner product.
Eigen::MatrixXd vector_strain(const MonomialMoments& moments, const ElementFrame& frame, int n);
/// Gram matrix of [M_n]^{2x2} in the Frobenius L2 inner product.
Eigen::MatrixXd matrix_mass(const MonomialMoments& moments, int n);

/// Solves A X = B with partial pivoting in extended precision. Warns through
/// spdlog when the reciprocal condition estimate is below 1e-12 and throws
/// DegenerateElementError when A is numerically singular.
Eigen::MatrixXd solve_local(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const std::string& what);

}  // namespace vemix
