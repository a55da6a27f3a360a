#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "vemix/error.hpp"
#include "vemix/harness.hpp"

using namespace vemix;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<Point> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(d(rng), d(rng));
  return pts;
}

// Load rebuilt from u and p by finite differences only.
Point fd_load(const ManufacturedCase& c, StiffnessForm form, bool convection, const Point& x) {
  constexpr double h = 1e-4;
  const Eigen::Matrix2d J = oracle::fd_jacobian(c.u, x, 1e-6);
  const Point grad_p(oracle::fd_partial(c.p, x, 0, 1e-6), oracle::fd_partial(c.p, x, 1, 1e-6));
  // second differences of u along each axis and the mixed one
  const auto second = [&](int a, int b) {
    Point ea = Point::Zero(), eb = Point::Zero();
    ea[a] = h;
    eb[b] = h;
    return Point((c.u(x + ea + eb) - c.u(x + ea - eb) - c.u(x - ea + eb) + c.u(x - ea - eb)) / (4 * h * h));
  };
  const Point uxx = second(0, 0), uyy = second(1, 1), uxy = second(0, 1);
  const Point lap = uxx + uyy;
  const Point grad_div(uxx.x() + uxy.y(), uxy.x() + uyy.y());
  Point au;
  switch (form) {
    case StiffnessForm::zero: au = c.u(x); break;
    case StiffnessForm::grad: au = -lap; break;
    case StiffnessForm::eps: au = -0.5 * (lap + grad_div); break;
  }
  Point f = au - grad_p;
  if (convection) f += J * c.u(x);
  return f;
}

}  // namespace

TEST(ManufacturedCases, PrintedValues) {
  const ManufacturedCase s = manufactured_case("stokes_s51");
  EXPECT_NEAR(s.u(Point(0.25, 0.25)).x(), 0.0, 1e-16);
  const ManufacturedCase d = manufactured_case("darcy_s52");
  EXPECT_DOUBLE_EQ(d.p(Point(0, 0)), 1.0);
  EXPECT_NEAR(d.div_u(Point(0, 0)), -2 * kPi * kPi, 1e-12);
  EXPECT_NEAR(d.problem_data(StiffnessForm::zero, false).divergence_load(Point(0, 0)), -2 * kPi * kPi, 1e-12);
  EXPECT_THROW(manufactured_case("brinkman"), InvalidArgumentError);
}

TEST(ManufacturedCases, LoadsMatchFiniteDifferences) {
  const std::tuple<std::string, StiffnessForm, bool> cases[] = {
      {"stokes_s51", StiffnessForm::eps, false},
      {"stokes_s51", StiffnessForm::grad, false},
      {"darcy_s52", StiffnessForm::zero, false},
      {"navier_stokes_s53", StiffnessForm::grad, true},
  };
  for (const auto& [name, form, convection] : cases) {
    const ManufacturedCase c = manufactured_case(name);
    const VectorFunction f = c.load(form, convection);
    double scale = 0.0;
    for (const Point& x : random_points(20, 1)) scale = std::max(scale, f(x).norm());
    for (const Point& x : random_points(20, 1)) {
      const Point want = fd_load(c, form, convection, x);
      EXPECT_LE((f(x) - want).norm(), 1e-6 * std::max(scale, 1.0)) << name << " at " << x.transpose();
      EXPECT_LE((c.grad_u(x) - oracle::fd_jacobian(c.u, x, 1e-6)).norm(), 1e-6 * (1 + c.grad_u(x).norm())) << name;
    }
  }
}

TEST(ManufacturedCases, DivergenceFreeAndDarcyIdentity) {
  const ManufacturedCase s = manufactured_case("stokes_s51");
  const ManufacturedCase ns = manufactured_case("navier_stokes_s53");
  const ManufacturedCase d = manufactured_case("darcy_s52");
  for (const Point& x : random_points(100, 2)) {
    EXPECT_LE(std::abs(s.div_u(x)), 1e-12);
    EXPECT_LE(std::abs(s.grad_u(x).trace()), 1e-12);
    EXPECT_LE(std::abs(ns.div_u(x)), 1e-12);
    EXPECT_LE(std::abs(ns.grad_u(x).trace()), 1e-12);
    EXPECT_LE((d.u(x) - d.grad_p(x)).norm(), 1e-12);
  }
}

TEST(ManufacturedCases, PatchCaseIsAdmissible) {
  for (int k = 2; k <= 5; ++k) {
    const ManufacturedCase c = polynomial_patch_case(k, 3);
    const PolygonalMesh mesh = generate_mesh(MeshFamily::quad, 2, 0);
    double mean = 0.0;
    for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
      const ElementGeometry g = element_geometry(mesh, static_cast<int>(e));
      mean += polygon_rule(g, k).integrate(c.p);
    }
    EXPECT_NEAR(mean, 0.0, 1e-14);
    for (const Point& x : random_points(10, 4)) EXPECT_LE(std::abs(c.div_u(x)), 1e-12);
  }
}

TEST(Errors, ZeroSolutionAgainstZeroCase) {
  ManufacturedCase zero;
  zero.u = [](const Point&) { return Point(0, 0); };
  zero.grad_u = [](const Point&) { return Eigen::Matrix2d::Zero().eval(); };
  zero.p = [](const Point&) { return 0.0; };
  const Discretization disc(generate_mesh(MeshFamily::hexa, 3, 1), 2);
  SolveResult r;
  r.chi = Eigen::VectorXd::Zero(disc.dofs().num_velocity_dofs());
  r.rho = Eigen::VectorXd::Zero(disc.dofs().num_pressure_dofs());
  const ErrorNorms e = compute_errors(disc, r, zero);
  EXPECT_EQ(e.u_h1, 0.0);
  EXPECT_EQ(e.u_l2, 0.0);
  EXPECT_EQ(e.p_l2, 0.0);
}

TEST(Errors, PatchCaseIsReproduced) {
  const ManufacturedCase c = polynomial_patch_case(3, 5);
  const RunOutcome r = run_case(ProblemKind::stokes, StiffnessForm::grad, c, generate_mesh(MeshFamily::voro, 3, 2), 3);
  EXPECT_LE(r.errors.u_h1, 1e-9);
  EXPECT_LE(r.errors.u_l2, 1e-9);
  EXPECT_LE(r.errors.p_l2, 1e-9);
}

TEST(Errors, PressureShiftInvariance) {
  const ManufacturedCase base = manufactured_case("stokes_s51");
  const PolygonalMesh mesh = generate_mesh(MeshFamily::quad, 4, 0);
  const RunOutcome r = run_case(ProblemKind::stokes, StiffnessForm::eps, base, mesh, 2);
  const Discretization disc(mesh, 2);

  ManufacturedCase shifted = base;
  shifted.p = [p = base.p](const Point& x) { return p(x) + 0.75; };
  SolveResult moved = r.result;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const ElementFrame& f = disc.element(e).frame();
    moved.rho(disc.dofs().pressure_offset(e)) += 0.75 * f.area / f.diameter;
  }
  EXPECT_NEAR(compute_errors(disc, moved, shifted).p_l2, r.errors.p_l2, 1e-12);
}

TEST(Rates, Formula) {
  EXPECT_NEAR(convergence_rate(1e-2, 2.5e-3, 0.1, 0.05), 2.0, 1e-12);
  EXPECT_TRUE(std::isnan(convergence_rate(0.0, 1e-3, 0.1, 0.05)));
  EXPECT_TRUE(std::isnan(convergence_rate(1e-2, 1e-3, 0.1, 0.1)));
}

TEST(StudyConfig, ParsesAndDefaults) {
  std::istringstream in("# darcy study\nproblem = darcy\nfamily = voro  # random cells\nn_list = 4, 8\nk_list = 3\n"
                        "output = out.csv\n");
  const StudyConfig c = parse_study_config(in);
  EXPECT_EQ(c.problem, ProblemKind::darcy);
  EXPECT_EQ(c.form, StiffnessForm::zero);
  EXPECT_EQ(c.family, MeshFamily::voro);
  EXPECT_EQ(c.n_list, (std::vector<int>{4, 8}));
  EXPECT_EQ(c.k_list, (std::vector<int>{3}));
  EXPECT_EQ(c.output, "out.csv");
  EXPECT_EQ(study_output_path(c, 3), "out.csv");

  StudyConfig two = c;
  two.k_list = {2, 3};
  EXPECT_EQ(study_output_path(two, 2), "out_k2.csv");
}

TEST(StudyConfig, ErrorsCarryLineNumbers) {
  const auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_study_config(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("problem = stokes\ncolour = red\n"), 2);
  EXPECT_EQ(line_of("# c\n\nk_list = 1\n"), 3);
  EXPECT_EQ(line_of("family = tri\n"), 1);
  EXPECT_EQ(line_of("n_list = 4, x\n"), 1);
  EXPECT_EQ(line_of("tol\n"), 1);
  EXPECT_EQ(line_of("problem = stokes\nmax_iter = 0\n"), 2);
}

TEST(Study, CsvIsBitStableWithEmptyFirstRates) {
  StudyConfig c;
  c.problem = ProblemKind::stokes;
  c.form = StiffnessForm::eps;
  c.family = MeshFamily::voro;
  c.n_list = {2, 4};
  c.k_list = {2};
  c.seed = 4;
  std::ostringstream a, b;
  write_csv(a, run_study(c));
  write_csv(b, run_study(c));
  EXPECT_EQ(a.str(), b.str());

  std::istringstream in(a.str());
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  EXPECT_EQ(header, "family,n,h,gndof,err_u_h1,err_u_l2,err_p_l2,rate_h1,rate_l2,rate_p");
  EXPECT_EQ(first.substr(first.size() - 3), ",,,");
  EXPECT_NE(second.substr(second.size() - 3), ",,,");
  EXPECT_EQ(first.substr(0, 7), "voro,2,");
}

TEST(Study, StokesQuadRate) {
  StudyConfig c;
  c.n_list = {4, 8, 16};
  c.k_list = {2};
  const std::vector<ConvergenceRow> rows = run_study(c);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(*rows[i].rate_h1, 1.8);
}

TEST(Study, DarcyVoronoiRate) {
  StudyConfig c;
  c.problem = ProblemKind::darcy;
  c.form = StiffnessForm::zero;
  c.family = MeshFamily::voro;
  c.n_list = {4, 8, 16};
  c.k_list = {2};
  const std::vector<ConvergenceRow> rows = run_study(c);
  EXPECT_GE(*rows.back().rate_l2, 2.7);
}
