#include "vemix/poly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vemix {

MultiIndex monomial_at(int position) {
  if (position < 0) {
    throw InvalidIndexError("negative monomial position " + std::to_string(position));
  }
  int d = 0;
  while (poly_dim(d) <= position) ++d;
  const int offset = position - poly_dim(d - 1);
  return {d - offset, offset};
}

MultiIndex index_to_multiindex(int i) {
  if (i < 1) throw InvalidIndexError("monomial index must be >= 1, got " + std::to_string(i));
  return monomial_at(i - 1);
}

int multiindex_to_index(MultiIndex a) {
  if (a.is_null()) throw InvalidIndexError("the null monomial has no index");
  return monomial_position(a) + 1;
}

double eval_monomial(MultiIndex alpha, const ElementFrame& frame, const Point& x) {
  if (alpha.is_null()) return 0.0;
  const Point s = frame.scaled(x);
  return std::pow(s.x(), alpha.a1) * std::pow(s.y(), alpha.a2);
}

Eigen::VectorXd eval_monomials(int n, const ElementFrame& frame, const Point& x) {
  Eigen::VectorXd values(poly_dim(n));
  if (n < 0) return values;
  const Point s = frame.scaled(x);
  values(0) = 1.0;
  for (int d = 1; d <= n; ++d) {
    const int prev = poly_dim(d - 2);
    const int cur = poly_dim(d - 1);
    // x times every monomial of degree d-1, then y times the last one.
    for (int j = 0; j < d; ++j) values(cur + j) = values(prev + j) * s.x();
    values(cur + d) = values(prev + d - 1) * s.y();
  }
  return values;
}

// ---------------------------------------------------------------- scalar

ScalarPolynomial::ScalarPolynomial(int degree)
    : degree_(std::max(degree, -1)), coeffs_(Eigen::VectorXd::Zero(poly_dim(degree))) {}

ScalarPolynomial::ScalarPolynomial(int degree, Eigen::VectorXd coeffs)
    : degree_(std::max(degree, -1)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != poly_dim(degree)) {
    throw InvalidArgumentError("scalar polynomial of degree " + std::to_string(degree) +
                               " needs " + std::to_string(poly_dim(degree)) + " coefficients");
  }
}

ScalarPolynomial ScalarPolynomial::monomial(MultiIndex alpha, double scale) {
  ScalarPolynomial p(alpha.is_null() ? -1 : alpha.degree());
  p.add(alpha, scale);
  return p;
}

double ScalarPolynomial::coeff(MultiIndex a) const {
  if (a.is_null() || a.degree() > degree_) return 0.0;
  return coeffs_(monomial_position(a));
}

void ScalarPolynomial::add(MultiIndex a, double c) {
  if (a.is_null()) return;
  if (a.degree() > degree_) {
    throw InvalidArgumentError("monomial degree exceeds polynomial degree");
  }
  coeffs_(monomial_position(a)) += c;
}

double ScalarPolynomial::operator()(const ElementFrame& frame, const Point& x) const {
  if (degree_ < 0) return 0.0;
  return coeffs_.dot(eval_monomials(degree_, frame, x));
}

// ---------------------------------------------------------------- vector

VectorPolynomial::VectorPolynomial(int degree)
    : degree_(std::max(degree, -1)), coeffs_(Eigen::VectorXd::Zero(2 * poly_dim(degree))) {}

VectorPolynomial::VectorPolynomial(int degree, Eigen::VectorXd coeffs)
    : degree_(std::max(degree, -1)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != 2 * poly_dim(degree)) {
    throw InvalidArgumentError("vector polynomial coefficient count mismatch");
  }
}

VectorPolynomial VectorPolynomial::unit(int i, int n) {
  VectorPolynomial p(n);
  if (i < 0 || i >= p.coeffs_.size()) throw InvalidIndexError("vector monomial index out of range");
  p.coeffs_(i) = 1.0;
  return p;
}

ScalarPolynomial VectorPolynomial::component(int c) const {
  const int m = poly_dim(degree_);
  return ScalarPolynomial(degree_, coeffs_.segment(c * m, m));
}

void VectorPolynomial::add(int component, MultiIndex a, double c) {
  if (a.is_null()) return;
  if (a.degree() > degree_) throw InvalidArgumentError("monomial degree exceeds polynomial degree");
  coeffs_(component * poly_dim(degree_) + monomial_position(a)) += c;
}

Point VectorPolynomial::operator()(const ElementFrame& frame, const Point& x) const {
  if (degree_ < 0) return Point::Zero();
  const int m = poly_dim(degree_);
  const Eigen::VectorXd v = eval_monomials(degree_, frame, x);
  return {coeffs_.head(m).dot(v), coeffs_.tail(m).dot(v)};
}

VectorSlot vector_slot(int i, int n) {
  const int m = poly_dim(n);
  if (i < 0 || i >= 2 * m) throw InvalidIndexError("vector monomial index out of range");
  return {i / m, monomial_at(i % m)};
}

// ---------------------------------------------------------------- matrix

MatrixPolynomial::MatrixPolynomial(int degree)
    : degree_(std::max(degree, -1)), coeffs_(Eigen::VectorXd::Zero(4 * poly_dim(degree))) {}

MatrixPolynomial::MatrixPolynomial(int degree, Eigen::VectorXd coeffs)
    : degree_(std::max(degree, -1)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != 4 * poly_dim(degree)) {
    throw InvalidArgumentError("matrix polynomial coefficient count mismatch");
  }
}

MatrixPolynomial MatrixPolynomial::unit(int j, int n) {
  MatrixPolynomial p(n);
  if (j < 0 || j >= p.coeffs_.size()) throw InvalidIndexError("matrix monomial index out of range");
  p.coeffs_(j) = 1.0;
  return p;
}

ScalarPolynomial MatrixPolynomial::entry(int row, int col) const {
  const int m = poly_dim(degree_);
  return ScalarPolynomial(degree_, coeffs_.segment((2 * row + col) * m, m));
}

void MatrixPolynomial::add(int row, int col, MultiIndex a, double c) {
  if (a.is_null()) return;
  if (a.degree() > degree_) throw InvalidArgumentError("monomial degree exceeds polynomial degree");
  coeffs_((2 * row + col) * poly_dim(degree_) + monomial_position(a)) += c;
}

Eigen::Matrix2d MatrixPolynomial::operator()(const ElementFrame& frame, const Point& x) const {
  Eigen::Matrix2d out = Eigen::Matrix2d::Zero();
  if (degree_ < 0) return out;
  const int m = poly_dim(degree_);
  const Eigen::VectorXd v = eval_monomials(degree_, frame, x);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out(r, c) = coeffs_.segment((2 * r + c) * m, m).dot(v);
  return out;
}

MatrixSlot matrix_slot(int j, int n) {
  const int m = poly_dim(n);
  if (j < 0 || j >= 4 * m) throw InvalidIndexError("matrix monomial index out of range");
  const int block = j / m;
  return {block / 2, block % 2, monomial_at(j % m)};
}

// ---------------------------------------------------------------- operators

ScalarPolynomial partial(const ScalarPolynomial& p, int direction, const ElementFrame& frame) {
  ScalarPolynomial out(p.degree() - 1);
  for (int pos = 0; pos < p.coeffs().size(); ++pos) {
    const double c = p.coeffs()(pos);
    if (c == 0.0) continue;
    const MultiIndex a = monomial_at(pos);
    if (direction == 0 && a.a1 > 0) out.add({a.a1 - 1, a.a2}, c * a.a1 / frame.diameter);
    if (direction == 1 && a.a2 > 0) out.add({a.a1, a.a2 - 1}, c * a.a2 / frame.diameter);
  }
  return out;
}

namespace {

VectorPolynomial from_components(const ScalarPolynomial& x, const ScalarPolynomial& y) {
  const int n = std::max(x.degree(), y.degree());
  const int m = poly_dim(n);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * m);
  c.segment(0, x.coeffs().size()) = x.coeffs();
  c.segment(m, y.coeffs().size()) = y.coeffs();
  return VectorPolynomial(n, std::move(c));
}

}  // namespace

VectorPolynomial gradient(const ScalarPolynomial& p, const ElementFrame& frame) {
  return from_components(partial(p, 0, frame), partial(p, 1, frame));
}

MatrixPolynomial gradient(const VectorPolynomial& v, const ElementFrame& frame) {
  const int n = v.degree() - 1;
  const int m = poly_dim(n);
  Eigen::VectorXd c(4 * m);
  for (int r = 0; r < 2; ++r) {
    const ScalarPolynomial comp = v.component(r);
    for (int d = 0; d < 2; ++d) c.segment((2 * r + d) * m, m) = partial(comp, d, frame).coeffs();
  }
  return MatrixPolynomial(n, std::move(c));
}

ScalarPolynomial divergence(const VectorPolynomial& v, const ElementFrame& frame) {
  ScalarPolynomial out = partial(v.component(0), 0, frame);
  out.coeffs() += partial(v.component(1), 1, frame).coeffs();
  return out;
}

VectorPolynomial divergence(const MatrixPolynomial& m, const ElementFrame& frame) {
  ScalarPolynomial rows[2];
  for (int r = 0; r < 2; ++r) {
    rows[r] = partial(m.entry(r, 0), 0, frame);
    rows[r].coeffs() += partial(m.entry(r, 1), 1, frame).coeffs();
  }
  return from_components(rows[0], rows[1]);
}

VectorPolynomial laplacian(const VectorPolynomial& v, const ElementFrame& frame) {
  ScalarPolynomial comps[2];
  for (int r = 0; r < 2; ++r) {
    const ScalarPolynomial c = v.component(r);
    comps[r] = partial(partial(c, 0, frame), 0, frame);
    comps[r].coeffs() += partial(partial(c, 1, frame), 1, frame).coeffs();
  }
  return from_components(comps[0], comps[1]);
}

MatrixPolynomial symmetric_part(const MatrixPolynomial& m) {
  const int k = poly_dim(m.degree());
  Eigen::VectorXd c = m.coeffs();
  const Eigen::VectorXd off = 0.5 * (m.coeffs().segment(k, k) + m.coeffs().segment(2 * k, k));
  c.segment(k, k) = off;
  c.segment(2 * k, k) = off;
  return MatrixPolynomial(m.degree(), std::move(c));
}

ScalarPolynomial product(const ScalarPolynomial& a, const ScalarPolynomial& b) {
  if (a.degree() < 0 || b.degree() < 0) return ScalarPolynomial();
  ScalarPolynomial out(a.degree() + b.degree());
  for (int i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()(i) == 0.0) continue;
    const MultiIndex ai = monomial_at(i);
    for (int j = 0; j < b.coeffs().size(); ++j) {
      if (b.coeffs()(j) == 0.0) continue;
      out.add(ai + monomial_at(j), a.coeffs()(i) * b.coeffs()(j));
    }
  }
  return out;
}

VectorPolynomial times_mperp(const ScalarPolynomial& q) {
  VectorPolynomial out(q.degree() < 0 ? -1 : q.degree() + 1);
  for (int pos = 0; pos < q.coeffs().size(); ++pos) {
    const double c = q.coeffs()(pos);
    if (c == 0.0) continue;
    const MultiIndex a = monomial_at(pos);
    out.add(0, {a.a1, a.a2 + 1}, c);
    out.add(1, {a.a1 + 1, a.a2}, -c);
  }
  return out;
}

ScalarPolynomial elevate(const ScalarPolynomial& p, int degree) {
  if (degree < p.degree()) throw InvalidArgumentError("cannot lower polynomial degree");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(poly_dim(degree));
  c.head(p.coeffs().size()) = p.coeffs();
  return ScalarPolynomial(degree, std::move(c));
}

VectorPolynomial elevate(const VectorPolynomial& p, int degree) {
  if (degree < p.degree()) throw InvalidArgumentError("cannot lower polynomial degree");
  const int m = poly_dim(degree);
  const int old = poly_dim(p.degree());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(2 * m);
  for (int r = 0; r < 2; ++r) c.segment(r * m, old) = p.coeffs().segment(r * old, old);
  return VectorPolynomial(degree, std::move(c));
}

MatrixPolynomial elevate(const MatrixPolynomial& p, int degree) {
  if (degree < p.degree()) throw InvalidArgumentError("cannot lower polynomial degree");
  const int m = poly_dim(degree);
  const int old = poly_dim(p.degree());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(4 * m);
  for (int r = 0; r < 4; ++r) c.segment(r * m, old) = p.coeffs().segment(r * old, old);
  return MatrixPolynomial(degree, std::move(c));
}

VectorPolynomial operator+(const VectorPolynomial& a, const VectorPolynomial& b) {
  const int n = std::max(a.degree(), b.degree());
  VectorPolynomial out = elevate(a, n);
  out.coeffs() += elevate(b, n).coeffs();
  return out;
}

VectorPolynomial operator-(const VectorPolynomial& a, const VectorPolynomial& b) {
  return a + (-1.0) * b;
}

VectorPolynomial operator*(double s, const VectorPolynomial& a) {
  return VectorPolynomial(a.degree(), s * a.coeffs());
}

VectorPolynomial grad_monomial(MultiIndex alpha, const ElementFrame& frame) {
  return gradient(ScalarPolynomial::monomial(alpha), frame);
}

VectorPolynomial laplacian_vector_monomial(int i, int n, const ElementFrame& frame) {
  return laplacian(VectorPolynomial::unit(i, n), frame);
}

VectorPolynomial div_eps_vector_monomial(int i, int n, const ElementFrame& frame) {
  return divergence(symmetric_part(gradient(VectorPolynomial::unit(i, n), frame)), frame);
}

VectorPolynomial div_matrix_monomial(int j, int n, const ElementFrame& frame) {
  return divergence(MatrixPolynomial::unit(j, n), frame);
}

// ---------------------------------------------------------------- decomposition

namespace {

void accumulate_decomposition(GradPerpDecomposition& d, int component, MultiIndex a, double c,
                              const ElementFrame& frame) {
  const double denom = a.degree() + 1.0;
  if (component == 0) {
    d.grad_part.add({a.a1 + 1, a.a2}, c * frame.diameter / denom);
    d.perp_part.add({a.a1, a.a2 - 1}, c * a.a2 / denom);
  } else {
    d.grad_part.add({a.a1, a.a2 + 1}, c * frame.diameter / denom);
    d.perp_part.add({a.a1 - 1, a.a2}, -c * a.a1 / denom);
  }
}

}  // namespace

GradPerpDecomposition decompose_vector_monomial(int i, int n, const ElementFrame& frame) {
  return decompose_vector_polynomial(VectorPolynomial::unit(i, n), frame);
}

GradPerpDecomposition decompose_vector_polynomial(const VectorPolynomial& p,
                                                  const ElementFrame& frame) {
  const int n = p.degree();
  GradPerpDecomposition d{ScalarPolynomial(n < 0 ? -1 : n + 1), ScalarPolynomial(n - 1)};
  const int m = poly_dim(n);
  for (int i = 0; i < 2 * m; ++i) {
    const double c = p.coeffs()(i);
    if (c == 0.0) continue;
    accumulate_decomposition(d, i / m, monomial_at(i % m), c, frame);
  }
  return d;
}

VectorPolynomial reconstruct(const GradPerpDecomposition& d, const ElementFrame& frame) {
  return gradient(d.grad_part, frame) + times_mperp(d.perp_part);
}

// ---------------------------------------------------------------- moments

double MonomialMoments::operator()(MultiIndex a) const {
  if (a.is_null()) return 0.0;
  if (a.degree() > max_degree_) {
    throw InvalidArgumentError("monomial moment of degree " + std::to_string(a.degree()) +
                               " requested, table holds degree " + std::to_string(max_degree_));
  }
  return values_(monomial_position(a));
}

double MonomialMoments::integrate(const ScalarPolynomial& p) const {
  if (p.degree() < 0) return 0.0;
  if (p.degree() > max_degree_) {
    throw InvalidArgumentError("polynomial degree exceeds moment table");
  }
  return p.coeffs().dot(values_.head(p.coeffs().size()));
}

double MonomialMoments::integrate(const ScalarPolynomial& a, const ScalarPolynomial& b) const {
  double sum = 0.0;
  for (int i = 0; i < a.coeffs().size(); ++i) {
    if (a.coeffs()(i) == 0.0) continue;
    const MultiIndex ai = monomial_at(i);
    for (int j = 0; j < b.coeffs().size(); ++j) {
      if (b.coeffs()(j) == 0.0) continue;
      sum += a.coeffs()(i) * b.coeffs()(j) * (*this)(ai + monomial_at(j));
    }
  }
  return sum;
}

double MonomialMoments::integrate(const VectorPolynomial& a, const VectorPolynomial& b) const {
  return integrate(a.component(0), b.component(0)) + integrate(a.component(1), b.component(1));
}

double MonomialMoments::integrate(const MatrixPolynomial& a, const MatrixPolynomial& b) const {
  double sum = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) sum += integrate(a.entry(r, c), b.entry(r, c));
  return sum;
}

Eigen::MatrixXd MonomialMoments::scalar_mass(int n) const {
  const int m = poly_dim(n);
  Eigen::MatrixXd mass(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= i; ++j) mass(i, j) = mass(j, i) = (*this)(monomial_at(i) + monomial_at(j));
  return mass;
}

}  // namespace vemix
