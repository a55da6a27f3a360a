#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vemix/error.hpp"
#include "vemix/projectors.hpp"

using namespace vemix;

namespace {

VectorField field_of(const VectorPolynomial& p, const ElementFrame& f) {
  const ScalarPolynomial dp = divergence(p, f);
  return {[p, f](const Point& x) { return p(f, x); }, [dp, f](const Point& x) { return dp(f, x); }};
}

Eigen::VectorXd interpolate_poly(const LocalElement& el, const VectorPolynomial& p) {
  return interpolate(field_of(p, el.frame()), el.space, el.geometry, el.rule);
}

VectorPolynomial affine(const ElementFrame& f, Point c, double rot, int k) {
  // c + rot * (y, -x) written in scaled monomials about the centroid
  VectorPolynomial p(k);
  p.add(0, {0, 0}, c.x() + rot * f.centroid.y());
  p.add(1, {0, 0}, c.y() - rot * f.centroid.x());
  p.add(0, {0, 1}, rot * f.diameter);
  p.add(1, {1, 0}, -rot * f.diameter);
  return p;
}

double rel(const Eigen::VectorXd& got, const Eigen::VectorXd& want) { return oracle::relative_error(got, want); }

}  // namespace

TEST(DivergenceMatrix, Examples) {
  const LocalElement sq = build_local_element(2, polygon_geometry(std::vector<Point>{Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)}));
  const Eigen::MatrixXd D = divergence_matrix(sq);
  const VectorField radial{[](const Point& x) { return Point(x.x() - 0.5, x.y() - 0.5); }, [](const Point&) { return 2.0; }};
  const Eigen::VectorXd d = D * interpolate(radial, sq.space, sq.geometry, sq.rule);
  EXPECT_NEAR(d(0), 2.0, 1e-14);
  EXPECT_NEAR(d.tail(2).norm(), 0.0, 1e-14);

  // (x^2, 0) on a square centered at the origin: div = 2 h m_(1,0)
  const LocalElement c = build_local_element(2, polygon_geometry(std::vector<Point>{Point(-1, -1), Point(1, -1), Point(1, 1), Point(-1, 1)}));
  const VectorField sq_x{[](const Point& x) { return Point(x.x() * x.x(), 0); }, [](const Point& x) { return 2 * x.x(); }};
  const Eigen::VectorXd dc = divergence_matrix(c) * interpolate(sq_x, c.space, c.geometry, c.rule);
  EXPECT_NEAR(dc(0), 0.0, 1e-14);
  EXPECT_NEAR(dc(1), 2 * c.frame().diameter, 1e-13);
  EXPECT_NEAR(dc(2), 0.0, 1e-14);

  const VectorField constant{[](const Point&) { return Point(3, -2); }, [](const Point&) { return 0.0; }};
  EXPECT_LE((divergence_matrix(c) * interpolate(constant, c.space, c.geometry, c.rule)).norm(), 1e-14);
}

class Reproduction : public ::testing::TestWithParam<std::tuple<MeshFamily, int>> {};

TEST_P(Reproduction, AdmissiblePolynomials) {
  const auto [family, k] = GetParam();
  const PolygonalMesh mesh = generate_mesh(family, 4, 7);
  std::mt19937_64 rng(17 + k);
  for (int e : {0, 5, 10}) {
    const LocalElement el = build_local_element(k, element_geometry(mesh, e), e);
    const ProjectorSet P = compute_projectors(el);
    const ElementFrame& f = el.frame();
    for (int s = 0; s < 5; ++s) {
      const VectorPolynomial p(k, oracle::random_coeffs(2 * poly_dim(k), rng));
      const Eigen::VectorXd chi = interpolate_poly(el, p);
      const MatrixPolynomial G = elevate(gradient(p, f), k - 1);
      EXPECT_LE(rel(P.divergence * chi, elevate(divergence(p, f), k - 1).coeffs()), 1e-11);
      EXPECT_LE(rel(P.nabla * chi, p.coeffs()), 1e-11);
      EXPECT_LE(rel(P.eps * chi, p.coeffs()), 1e-11);
      EXPECT_LE(rel(P.zero * chi, p.coeffs()), 1e-11);
      EXPECT_LE(rel(P.zero_grad * chi, G.coeffs()), 1e-11);
      EXPECT_LE(rel(P.zero_eps * chi, symmetric_part(G).coeffs()), 1e-11);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(FamiliesAndDegrees, Reproduction,
                         ::testing::Combine(::testing::Values(MeshFamily::quad, MeshFamily::hexa, MeshFamily::voro),
                                            ::testing::Values(2, 3, 4)));

TEST(Projectors, RigidMotionsAndConstants) {
  const PolygonalMesh mesh = generate_mesh(MeshFamily::voro, 3, 4);
  for (int k = 2; k <= 4; ++k) {
    const LocalElement el = build_local_element(k, element_geometry(mesh, 2), 2);
    const ProjectorSet P = compute_projectors(el);
    const ElementFrame& f = el.frame();

    const VectorPolynomial c = affine(f, Point(0.7, -1.3), 0.0, k);
    const Eigen::VectorXd chi_c = interpolate_poly(el, c);
    EXPECT_LE(rel(P.nabla * chi_c, c.coeffs()), 1e-11);
    EXPECT_LE(rel(P.zero * chi_c, c.coeffs()), 1e-11);
    EXPECT_LE((P.zero_grad * chi_c).norm(), 1e-11);

    const VectorPolynomial r = affine(f, Point(0.2, 0.4), 1.5, k);
    const Eigen::VectorXd chi_r = interpolate_poly(el, r);
    EXPECT_LE(rel(P.eps * chi_r, r.coeffs()), 1e-12);
    EXPECT_LE(rel(P.nabla * chi_r, r.coeffs()), 1e-11);
    EXPECT_LE((P.zero_eps * chi_r).norm(), 1e-11);
    const MatrixPolynomial G(k - 1, P.zero_grad * chi_r);
    EXPECT_NEAR(G.entry(0, 1).coeff({0, 0}), 1.5, 1e-11);
    EXPECT_NEAR(G.entry(1, 0).coeff({0, 0}), -1.5, 1e-11);
    EXPECT_NEAR(G.entry(0, 0).coeffs().norm() + G.entry(1, 1).coeffs().norm(), 0.0, 1e-11);

    EXPECT_EQ((P.eps * Eigen::VectorXd::Zero(el.ndof())).norm(), 0.0);
  }
}

// Properties that must hold for an arbitrary DoF vector, not only for
// interpolants of polynomials.
TEST(Projectors, VirtualDofVectors) {
  const PolygonalMesh mesh = generate_mesh(MeshFamily::hexa, 3, 9);
  std::mt19937_64 rng(5);
  for (int k = 2; k <= 5; ++k) {
    const LocalElement el = build_local_element(k, element_geometry(mesh, 4), 4);
    const ProjectorSet P = compute_projectors(el);
    const LocalSpace& sp = el.space;
    const ElementFrame& f = el.frame();
    const ElementGeometry& g = el.geometry;
    const QuadratureRule1D& lob = sp.lobatto();
    for (int s = 0; s < 3; ++s) {
      const Eigen::VectorXd chi = oracle::random_coeffs(el.ndof(), rng);

      // divergence: flux through the boundary and the D^div moments
      const ScalarPolynomial dv(k - 1, P.divergence * chi);
      double flux = 0.0;
      for (int e = 0; e < g.num_vertices(); ++e) {
        const std::vector<int> nodes = sp.edge_nodes(e);
        for (int i = 0; i <= k; ++i) {
          const Point v(chi(2 * nodes[i]), chi(2 * nodes[i] + 1));
          flux += 0.5 * g.lengths[e] * lob.weights[i] * v.dot(g.normals[e]);
        }
      }
      EXPECT_NEAR(el.rule.integrate([&](const Point& x) { return dv(f, x); }), flux, 1e-12 * (1 + std::abs(flux)));
      for (int l = 1; l < poly_dim(k - 1); ++l) {
        const MultiIndex a = monomial_at(l);
        const double m = el.rule.integrate([&](const Point& x) { return dv(f, x) * eval_monomial(a, f, x); });
        EXPECT_NEAR(m, f.area / f.diameter * chi(sp.div_dof(l)), 1e-12);
      }

      // zero_k keeps the m_perp moments
      const VectorPolynomial p0(k, P.zero * chi);
      for (int b = 0; b < sp.num_perp_dofs(); ++b) {
        const MultiIndex a = monomial_at(b);
        const double m = el.rule.integrate([&](const Point& x) {
          const Point s2 = f.scaled(x);
          return p0(f, x).dot(Point(s2.y(), -s2.x())) * eval_monomial(a, f, x);
        });
        EXPECT_NEAR(m / f.area, chi(sp.perp_dof(b)), 1e-11);
      }

      // zero_eps is the symmetric part of zero_grad and symmetric-valued
      const MatrixPolynomial G(k - 1, P.zero_grad * chi);
      const MatrixPolynomial E(k - 1, P.zero_eps * chi);
      EXPECT_LE((symmetric_part(G).coeffs() - E.coeffs()).norm(), 1e-11 * (1 + G.coeffs().norm()));
      EXPECT_LE((E.entry(0, 1).coeffs() - E.entry(1, 0).coeffs()).norm(), 1e-14);

      // idempotence of zero_k on its own output
      const Eigen::VectorXd chi2 = interpolate_poly(el, p0);
      EXPECT_LE(rel(P.zero * chi2, p0.coeffs()), 1e-11);
    }
  }
}

TEST(Projectors, DofsOfMonomialsMatchesInterpolation) {
  const LocalElement el = build_local_element(3, element_geometry(generate_mesh(MeshFamily::voro, 3, 1), 0));
  const Eigen::MatrixXd D = polynomial_dof_matrix(el);
  ASSERT_EQ(D.cols(), 2 * poly_dim(3));
  for (int i = 0; i < D.cols(); ++i) {
    const Eigen::VectorXd chi = interpolate_poly(el, VectorPolynomial::unit(i, 3));
    EXPECT_LE((D.col(i) - chi).norm(), 1e-13 * (1 + chi.norm())) << "i=" << i;
  }
}

TEST(Projectors, CsvDump) {
  Eigen::MatrixXd m(2, 3);
  m << 1, 2, 3, 4, 5, 0.1;
  std::ostringstream out;
  write_projector_csv(out, ProjectorKind::nabla_k, 7, 2, m);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "kind,element,k,rows,cols");
  std::getline(in, line);
  EXPECT_EQ(line, to_string(ProjectorKind::nabla_k) + ",7,2,2,3");
  std::getline(in, line);
  EXPECT_EQ(line, "1,2,3");
  std::getline(in, line);
  EXPECT_EQ(std::stod(line.substr(line.rfind(',') + 1)), 0.1);
}

TEST(Projectors, SingularLocalSolveRejected) {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Ones(3, 3);
  EXPECT_THROW(solve_local(A, Eigen::MatrixXd::Identity(3, 3), "test"), DegenerateElementError);
}
