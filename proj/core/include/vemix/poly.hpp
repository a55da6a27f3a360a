#pragma once

// Scaled monomial algebra on a polygon.
//
// A scaled monomial is m_a(x) = ((x - x_E) / h_E)^a1 ((y - y_E) / h_E)^a2.
// Monomials are ordered by degree, and inside one degree by descending
// x-exponent: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), (3,0), ...
//
// Vector polynomials store all x-component coefficients first, then all
// y-component coefficients. Matrix polynomials store four blocks in the order
// (1,1), (1,2), (2,1), (2,2). A polynomial of degree -1 is the zero
// polynomial with an empty coefficient vector.

#include <Eigen/Dense>

#include <vector>

#include "vemix/error.hpp"

namespace vemix {

using Point = Eigen::Vector2d;

/// Dimension of P_n in two variables; 0 for n < 0.
constexpr int poly_dim(int n) noexcept { return n < 0 ? 0 : (n + 1) * (n + 2) / 2; }

struct MultiIndex {
  int a1 = 0;
  int a2 = 0;

  constexpr int degree() const noexcept { return a1 + a2; }
  /// The null monomial m_0 = 0 is represented by any negative exponent.
  constexpr bool is_null() const noexcept { return a1 < 0 || a2 < 0; }

  friend constexpr bool operator==(MultiIndex, MultiIndex) = default;
  friend constexpr MultiIndex operator+(MultiIndex a, MultiIndex b) noexcept {
    return {a.a1 + b.a1, a.a2 + b.a2};
  }
};

/// Zero-based position of a multi-index in the graded ordering.
constexpr int monomial_position(MultiIndex a) noexcept {
  const int d = a.degree();
  return d * (d + 1) / 2 + a.a2;
}

/// Inverse of monomial_position.
MultiIndex monomial_at(int position);

/// One-based index -> multi-index (1 -> (0,0), 2 -> (1,0), 3 -> (0,1), ...).
/// Throws InvalidIndexError for i < 1.
MultiIndex index_to_multiindex(int i);

/// One-based index of a multi-index; inverse of index_to_multiindex.
int multiindex_to_index(MultiIndex a);

/// Centroid, diameter and area of an element.
struct ElementFrame {
  Point centroid = Point::Zero();
  double diameter = 1.0;
  double area = 1.0;

  Point scaled(const Point& x) const { return (x - centroid) / diameter; }
};

double eval_monomial(MultiIndex alpha, const ElementFrame& frame, const Point& x);

/// Values of every monomial of degree <= n at x, in graded order.
Eigen::VectorXd eval_monomials(int n, const ElementFrame& frame, const Point& x);

class ScalarPolynomial {
 public:
  ScalarPolynomial() = default;
  explicit ScalarPolynomial(int degree);
  ScalarPolynomial(int degree, Eigen::VectorXd coeffs);

  static ScalarPolynomial monomial(MultiIndex alpha, double scale = 1.0);

  int degree() const noexcept { return degree_; }
  const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
  Eigen::VectorXd& coeffs() noexcept { return coeffs_; }

  double coeff(MultiIndex a) const;
  /// Adds c to the coefficient of m_a; null monomials are dropped.
  void add(MultiIndex a, double c);

  double operator()(const ElementFrame& frame, const Point& x) const;

 private:
  int degree_ = -1;
  Eigen::VectorXd coeffs_;
};

class VectorPolynomial {
 public:
  VectorPolynomial() = default;
  explicit VectorPolynomial(int degree);
  VectorPolynomial(int degree, Eigen::VectorXd coeffs);

  /// The i-th element (zero-based) of the basis [M_n]^2.
  static VectorPolynomial unit(int i, int n);

  int degree() const noexcept { return degree_; }
  const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
  Eigen::VectorXd& coeffs() noexcept { return coeffs_; }

  ScalarPolynomial component(int c) const;
  void add(int component, MultiIndex a, double c);

  Point operator()(const ElementFrame& frame, const Point& x) const;

 private:
  int degree_ = -1;
  Eigen::VectorXd coeffs_;
};

class MatrixPolynomial {
 public:
  MatrixPolynomial() = default;
  explicit MatrixPolynomial(int degree);
  MatrixPolynomial(int degree, Eigen::VectorXd coeffs);

  /// The j-th element (zero-based) of the basis [M_n]^{2x2}.
  static MatrixPolynomial unit(int j, int n);

  int degree() const noexcept { return degree_; }
  const Eigen::VectorXd& coeffs() const noexcept { return coeffs_; }
  Eigen::VectorXd& coeffs() noexcept { return coeffs_; }

  ScalarPolynomial entry(int row, int col) const;
  void add(int row, int col, MultiIndex a, double c);

  Eigen::Matrix2d operator()(const ElementFrame& frame, const Point& x) const;

 private:
  int degree_ = -1;
  Eigen::VectorXd coeffs_;
};

/// Slot (component, multi-index) of the i-th vector monomial of [M_n]^2.
struct VectorSlot {
  int component;
  MultiIndex alpha;
};
VectorSlot vector_slot(int i, int n);

struct MatrixSlot {
  int row;
  int col;
  MultiIndex alpha;
};
MatrixSlot matrix_slot(int j, int n);

// Differential operators. The 1/h_E chain-rule factors come from the frame.
ScalarPolynomial partial(const ScalarPolynomial& p, int direction, const ElementFrame& frame);
VectorPolynomial gradient(const ScalarPolynomial& p, const ElementFrame& frame);
/// (grad v)_{rc} = d v_r / d x_c.
MatrixPolynomial gradient(const VectorPolynomial& v, const ElementFrame& frame);
ScalarPolynomial divergence(const VectorPolynomial& v, const ElementFrame& frame);
/// Row-wise divergence of a matrix field.
VectorPolynomial divergence(const MatrixPolynomial& m, const ElementFrame& frame);
VectorPolynomial laplacian(const VectorPolynomial& v, const ElementFrame& frame);
MatrixPolynomial symmetric_part(const MatrixPolynomial& m);

ScalarPolynomial product(const ScalarPolynomial& a, const ScalarPolynomial& b);
/// m_perp * q with m_perp = (m_(0,1), -m_(1,0)).
VectorPolynomial times_mperp(const ScalarPolynomial& q);

VectorPolynomial operator+(const VectorPolynomial& a, const VectorPolynomial& b);
VectorPolynomial operator-(const VectorPolynomial& a, const VectorPolynomial& b);
VectorPolynomial operator*(double s, const VectorPolynomial& a);

/// Raise the stored degree without changing the polynomial.
ScalarPolynomial elevate(const ScalarPolynomial& p, int degree);
VectorPolynomial elevate(const VectorPolynomial& p, int degree);
MatrixPolynomial elevate(const MatrixPolynomial& p, int degree);

VectorPolynomial grad_monomial(MultiIndex alpha, const ElementFrame& frame);
VectorPolynomial laplacian_vector_monomial(int i, int n, const ElementFrame& frame);
VectorPolynomial div_eps_vector_monomial(int i, int n, const ElementFrame& frame);
VectorPolynomial div_matrix_monomial(int j, int n, const ElementFrame& frame);

/// p = grad(grad_part) + m_perp * perp_part with grad_part free of constants.
struct GradPerpDecomposition {
  ScalarPolynomial grad_part;
  ScalarPolynomial perp_part;
};

GradPerpDecomposition decompose_vector_monomial(int i, int n, const ElementFrame& frame);
GradPerpDecomposition decompose_vector_polynomial(const VectorPolynomial& p,
                                                  const ElementFrame& frame);
VectorPolynomial reconstruct(const GradPerpDecomposition& d, const ElementFrame& frame);

/// Integrals of the scaled monomials of degree <= max_degree over one element.
class MonomialMoments {
 public:
  MonomialMoments() = default;
  MonomialMoments(int max_degree, Eigen::VectorXd values)
      : max_degree_(max_degree), values_(std::move(values)) {}

  int max_degree() const noexcept { return max_degree_; }

  /// Integral of m_a; 0 for the null monomial.
  double operator()(MultiIndex a) const;

  double integrate(const ScalarPolynomial& p) const;
  /// Integral of a * b.
  double integrate(const ScalarPolynomial& a, const ScalarPolynomial& b) const;
  /// Integral of a . b.
  double integrate(const VectorPolynomial& a, const VectorPolynomial& b) const;
  /// Integral of a : b.
  double integrate(const MatrixPolynomial& a, const MatrixPolynomial& b) const;

  /// Gram matrix of the scalar monomials of degree <= n.
  Eigen::MatrixXd scalar_mass(int n) const;

 private:
  int max_degree_ = -1;
  Eigen::VectorXd values_;
};

}  // namespace vemix
