#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "vemix/error.hpp"
#include "vemix/poly.hpp"

using namespace vemix;

namespace {

const ElementFrame kFrame{Point(0.3, -0.2), 0.7, 0.25};

std::vector<Point> sample_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-0.5, 0.5);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.push_back(kFrame.centroid + kFrame.diameter * Point(d(rng), d(rng)));
  return pts;
}

}  // namespace

TEST(MultiIndex, OneBasedIndexing) {
  EXPECT_EQ(index_to_multiindex(1), (MultiIndex{0, 0}));
  EXPECT_EQ(index_to_multiindex(4), (MultiIndex{2, 0}));
  EXPECT_EQ(index_to_multiindex(5), (MultiIndex{1, 1}));
  EXPECT_EQ(index_to_multiindex(6), (MultiIndex{0, 2}));
  EXPECT_THROW(index_to_multiindex(0), InvalidIndexError);
}

TEST(MultiIndex, GradedEnumerationRoundTrip) {
  // brute-force enumeration: degree ascending, x power descending
  int i = 1;
  for (int d = 0; d <= 8; ++d) {
    for (int a1 = d; a1 >= 0; --a1, ++i) {
      const MultiIndex a{a1, d - a1};
      EXPECT_EQ(index_to_multiindex(i), a);
      EXPECT_EQ(multiindex_to_index(a), i);
    }
  }
  EXPECT_EQ(i - 1, poly_dim(8));
}

TEST(Monomial, Evaluation) {
  const ElementFrame f{Point(0, 0), 2.0, 1.0};
  EXPECT_DOUBLE_EQ(eval_monomial({0, 0}, kFrame, Point(5, 5)), 1.0);
  EXPECT_DOUBLE_EQ(eval_monomial({1, 0}, kFrame, kFrame.centroid + Point(kFrame.diameter, 0)), 1.0);
  EXPECT_DOUBLE_EQ(eval_monomial({2, 1}, f, Point(1, 1)), 0.125);
  EXPECT_EQ(eval_monomial({-1, 2}, f, Point(1, 1)), 0.0);
}

TEST(Monomial, BasisSizes) {
  for (int n = 0; n <= 6; ++n) {
    EXPECT_EQ(ScalarPolynomial(n).coeffs().size(), poly_dim(n));
    EXPECT_EQ(VectorPolynomial(n).coeffs().size(), 2 * poly_dim(n));
    EXPECT_EQ(MatrixPolynomial(n).coeffs().size(), 4 * poly_dim(n));
  }
  EXPECT_EQ(poly_dim(6), 28);
}

TEST(Monomial, GradExamples) {
  const double h = kFrame.diameter;
  const VectorPolynomial g0 = grad_monomial({0, 0}, kFrame);
  EXPECT_TRUE(g0.coeffs().size() == 0 || g0.coeffs().isZero());

  const VectorPolynomial g11 = grad_monomial({1, 1}, kFrame);
  EXPECT_DOUBLE_EQ(g11.component(0).coeff({0, 1}), 1.0 / h);
  EXPECT_DOUBLE_EQ(g11.component(1).coeff({1, 0}), 1.0 / h);

  const VectorPolynomial g20 = grad_monomial({2, 0}, kFrame);
  EXPECT_DOUBLE_EQ(g20.component(0).coeff({1, 0}), 2.0 / h);
  EXPECT_DOUBLE_EQ(g20.component(1).coeffs().cwiseAbs().sum(), 0.0);
}

TEST(Monomial, LaplacianExamples) {
  const double h = kFrame.diameter;
  const int m = poly_dim(2);
  const VectorPolynomial l0 = laplacian_vector_monomial(0, 2, kFrame);
  EXPECT_TRUE(l0.coeffs().isZero());
  const VectorPolynomial l20 = laplacian_vector_monomial(monomial_position({2, 0}), 2, kFrame);
  EXPECT_DOUBLE_EQ(l20.component(0).coeff({0, 0}), 2.0 / (h * h));
  EXPECT_DOUBLE_EQ(l20.component(1).coeffs().cwiseAbs().sum(), 0.0);
  EXPECT_TRUE(laplacian_vector_monomial(m + monomial_position({1, 1}), 2, kFrame).coeffs().isZero());
}

TEST(Monomial, DivMatrixExamples) {
  EXPECT_TRUE(div_matrix_monomial(0, 1, kFrame).coeffs().isZero());
  const VectorPolynomial d = div_matrix_monomial(monomial_position({1, 0}), 1, kFrame);
  EXPECT_DOUBLE_EQ(d.component(0).coeff({0, 0}), 1.0 / kFrame.diameter);
  EXPECT_DOUBLE_EQ(d.component(1).coeffs().cwiseAbs().sum(), 0.0);
}

TEST(Monomial, OperatorsMatchFiniteDifferences) {
  std::mt19937_64 rng(3);
  const int n = 4;
  const VectorPolynomial v(n, oracle::random_coeffs(2 * poly_dim(n), rng));
  const auto fv = [&](const Point& x) { return v(kFrame, x); };
  const MatrixPolynomial G = gradient(v, kFrame);
  const ScalarPolynomial D = divergence(v, kFrame);
  const VectorPolynomial L = laplacian(v, kFrame);
  const VectorPolynomial DE = divergence(symmetric_part(G), kFrame);
  for (const Point& x : sample_points(10, 5)) {
    const Eigen::Matrix2d J = oracle::fd_jacobian(fv, x);
    const Eigen::Matrix2d g = G(kFrame, x);
    EXPECT_LE((g - J).norm(), 1e-6 * std::max(1.0, J.norm()));
    EXPECT_NEAR(D(kFrame, x), J.trace(), 1e-6 * std::max(1.0, J.norm()));

    const auto gradient_at = [&](const Point& y) { return G(kFrame, y); };
    Point lap = Point::Zero();
    Point div_eps = Point::Zero();
    for (int c = 0; c < 2; ++c) {
      Point e = Point::Zero();
      e[c] = 1e-4;
      const Eigen::Matrix2d dG = (gradient_at(x + e) - gradient_at(x - e)) / 2e-4;
      lap += dG.col(c);
      div_eps += 0.5 * (dG.col(c) + dG.row(c).transpose());
    }
    EXPECT_LE((L(kFrame, x) - lap).norm(), 1e-6 * std::max(1.0, lap.norm()));
    EXPECT_LE((DE(kFrame, x) - div_eps).norm(), 1e-6 * std::max(1.0, div_eps.norm()));
  }
}

TEST(Decomposition, MonomialExamples) {
  const double h = kFrame.diameter;
  const int m = poly_dim(1);
  auto d = decompose_vector_monomial(0, 0, kFrame);
  EXPECT_DOUBLE_EQ(d.grad_part.coeff({1, 0}), h);
  EXPECT_TRUE(d.perp_part.coeffs().size() == 0 || d.perp_part.coeffs().isZero());

  d = decompose_vector_monomial(monomial_position({0, 1}), 1, kFrame);
  EXPECT_DOUBLE_EQ(d.grad_part.coeff({1, 1}), h / 2);
  EXPECT_DOUBLE_EQ(d.perp_part.coeff({0, 0}), 0.5);

  d = decompose_vector_monomial(m + monomial_position({1, 0}), 1, kFrame);
  EXPECT_DOUBLE_EQ(d.grad_part.coeff({1, 1}), h / 2);
  EXPECT_DOUBLE_EQ(d.perp_part.coeff({0, 0}), -0.5);
}

TEST(Decomposition, PolynomialExamples) {
  const VectorPolynomial zero(2);
  const auto dz = decompose_vector_polynomial(zero, kFrame);
  EXPECT_TRUE(dz.grad_part.coeffs().isZero());
  EXPECT_TRUE(dz.perp_part.coeffs().isZero());

  const VectorPolynomial g = grad_monomial({2, 0}, kFrame);
  const auto dg = decompose_vector_polynomial(g, kFrame);
  EXPECT_NEAR(dg.grad_part.coeff({2, 0}), 1.0, 1e-15);
  EXPECT_NEAR(dg.grad_part.coeffs().cwiseAbs().sum(), 1.0, 1e-15);
  EXPECT_NEAR(dg.perp_part.coeffs().cwiseAbs().sum(), 0.0, 1e-15);

  // (m_01, -m_10) = m_perp, so the perp part is the constant 1.
  VectorPolynomial mp(1);
  mp.add(0, {0, 1}, 1.0);
  mp.add(1, {1, 0}, -1.0);
  const auto dp = decompose_vector_polynomial(mp, kFrame);
  EXPECT_NEAR(dp.grad_part.coeffs().cwiseAbs().sum(), 0.0, 1e-15);
  EXPECT_NEAR(dp.perp_part.coeff({0, 0}), 1.0, 1e-15);
}

TEST(Decomposition, ReconstructsEveryMonomial) {
  for (int n = 0; n <= 6; ++n) {
    for (int i = 0; i < 2 * poly_dim(n); ++i) {
      const GradPerpDecomposition d = decompose_vector_monomial(i, n, kFrame);
      EXPECT_EQ(d.grad_part.coeff({0, 0}), 0.0);
      const VectorPolynomial r = elevate(reconstruct(d, kFrame), n);
      EXPECT_LE((r.coeffs() - VectorPolynomial::unit(i, n).coeffs()).cwiseAbs().maxCoeff(), 1e-14)
          << "n=" << n << " i=" << i;
    }
  }
}

TEST(Decomposition, ReconstructionPointwise) {
  std::mt19937_64 rng(9);
  const int n = 5;
  const VectorPolynomial p(n, oracle::random_coeffs(2 * poly_dim(n), rng));
  const GradPerpDecomposition d = decompose_vector_polynomial(p, kFrame);
  const VectorPolynomial gp = gradient(d.grad_part, kFrame);
  for (const Point& x : sample_points(10, 1)) {
    const Point s = kFrame.scaled(x);
    const Point rebuilt = gp(kFrame, x) + Point(s.y(), -s.x()) * d.perp_part(kFrame, x);
    EXPECT_LE((rebuilt - p(kFrame, x)).norm(), 1e-12);
  }
}
