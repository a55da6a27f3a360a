#include "vemix/harness.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "vemix/error.hpp"

namespace vemix {

ProblemKind parse_problem(const std::string& name) {
  if (name == "stokes") return ProblemKind::stokes;
  if (name == "darcy") return ProblemKind::darcy;
  if (name == "navier-stokes") return ProblemKind::navier_stokes;
  throw InvalidArgumentError("unknown problem '" + name + "' (expected stokes, darcy or navier-stokes)");
}

std::string to_string(ProblemKind problem) {
  switch (problem) {
    case ProblemKind::stokes: return "stokes";
    case ProblemKind::darcy: return "darcy";
    case ProblemKind::navier_stokes: return "navier-stokes";
  }
  return "unknown";
}

StiffnessForm default_form(ProblemKind problem) {
  switch (problem) {
    case ProblemKind::stokes: return StiffnessForm::eps;
    case ProblemKind::darcy: return StiffnessForm::zero;
    case ProblemKind::navier_stokes: return StiffnessForm::grad;
  }
  return StiffnessForm::eps;
}

VectorFunction ManufacturedCase::load(StiffnessForm form, bool convection) const {
  return [c = *this, form, convection](const Point& x) -> Point {
    Point f;
    switch (form) {
      case StiffnessForm::zero: f = c.u(x); break;
      case StiffnessForm::grad: f = -c.laplacian_u(x); break;
      case StiffnessForm::eps: f = -0.5 * (c.laplacian_u(x) + c.grad_div_u(x)); break;
    }
    f -= c.grad_p(x);
    if (convection) f += c.grad_u(x) * c.u(x);
    return f;
  };
}

ProblemData ManufacturedCase::problem_data(StiffnessForm form, bool convection) const {
  return ProblemData{load(form, convection), div_u, u};
}

namespace {

// u = s (a(x) b(y), -a(y) b(x)), divergence free when a' is a multiple of b.
struct SeparableField {
  double s;
  std::function<double(double)> a, da, dda, b, db, ddb;

  Point u(const Point& x) const { return {s * a(x[0]) * b(x[1]), -s * a(x[1]) * b(x[0])}; }
  Eigen::Matrix2d grad(const Point& x) const {
    Eigen::Matrix2d g;
    g << s * da(x[0]) * b(x[1]), s * a(x[0]) * db(x[1]),
        -s * a(x[1]) * db(x[0]), -s * da(x[1]) * b(x[0]);
    return g;
  }
  Point laplacian(const Point& x) const {
    return {s * (dda(x[0]) * b(x[1]) + a(x[0]) * ddb(x[1])),
            -s * (dda(x[1]) * b(x[0]) + a(x[1]) * ddb(x[0]))};
  }
  double div(const Point& x) const { return s * (da(x[0]) * b(x[1]) - da(x[1]) * b(x[0])); }
  Point grad_div(const Point& x) const {
    return {s * (dda(x[0]) * b(x[1]) - da(x[1]) * db(x[0])),
            s * (da(x[0]) * db(x[1]) - dda(x[1]) * b(x[0]))};
  }
};

ManufacturedCase from_field(std::string name, const SeparableField& w, ScalarFunction p, VectorFunction grad_p) {
  ManufacturedCase c;
  c.name = std::move(name);
  c.u = [w](const Point& x) { return w.u(x); };
  c.grad_u = [w](const Point& x) { return w.grad(x); };
  c.laplacian_u = [w](const Point& x) { return w.laplacian(x); };
  c.grad_div_u = [w](const Point& x) { return w.grad_div(x); };
  c.div_u = [w](const Point& x) { return w.div(x); };
  c.p = std::move(p);
  c.grad_p = std::move(grad_p);
  return c;
}

ManufacturedCase stokes_case() {
  constexpr double pi = std::numbers::pi;
  SeparableField w;
  w.s = 0.5;
  w.a = [](double t) { return std::pow(std::sin(2 * pi * t), 2); };
  w.da = [](double t) { return 2 * pi * std::sin(4 * pi * t); };
  w.dda = [](double t) { return 8 * pi * pi * std::cos(4 * pi * t); };
  w.b = [](double t) { return 0.5 * std::sin(4 * pi * t); };
  w.db = [](double t) { return 2 * pi * std::cos(4 * pi * t); };
  w.ddb = [](double t) { return -8 * pi * pi * std::sin(4 * pi * t); };
  return from_field(
      "stokes_s51", w, [](const Point& x) { return std::sin(2 * pi * x[0]) * std::cos(2 * pi * x[1]); },
      [](const Point& x) -> Point {
        return {2 * pi * std::cos(2 * pi * x[0]) * std::cos(2 * pi * x[1]),
                -2 * pi * std::sin(2 * pi * x[0]) * std::sin(2 * pi * x[1])};
      });
}

ManufacturedCase navier_stokes_case() {
  SeparableField w;
  w.s = -0.5;
  w.a = [](double t) { return std::pow(std::cos(t), 2); };
  w.da = [](double t) { return -std::sin(2 * t); };
  w.dda = [](double t) { return -2 * std::cos(2 * t); };
  w.b = [](double t) { return 0.5 * std::sin(2 * t); };
  w.db = [](double t) { return std::cos(2 * t); };
  w.ddb = [](double t) { return -2 * std::sin(2 * t); };
  return from_field(
      "navier_stokes_s53", w, [](const Point& x) { return std::sin(x[0]) - std::sin(x[1]); },
      [](const Point& x) -> Point { return {std::cos(x[0]), -std::cos(x[1])}; });
}

// u = grad p with p = cos(pi x) cos(pi y).
ManufacturedCase darcy_case() {
  constexpr double pi = std::numbers::pi;
  ManufacturedCase c;
  c.name = "darcy_s52";
  c.p = [](const Point& x) { return std::cos(pi * x[0]) * std::cos(pi * x[1]); };
  c.grad_p = [](const Point& x) -> Point {
    return {-pi * std::sin(pi * x[0]) * std::cos(pi * x[1]), -pi * std::cos(pi * x[0]) * std::sin(pi * x[1])};
  };
  c.u = c.grad_p;
  c.grad_u = [](const Point& x) {
    const double cc = std::cos(pi * x[0]) * std::cos(pi * x[1]);
    const double ss = std::sin(pi * x[0]) * std::sin(pi * x[1]);
    Eigen::Matrix2d g;
    g << -pi * pi * cc, pi * pi * ss, pi * pi * ss, -pi * pi * cc;
    return g;
  };
  c.div_u = [](const Point& x) { return -2 * pi * pi * std::cos(pi * x[0]) * std::cos(pi * x[1]); };
  // lap(grad p) = grad div u = grad(lap p) = -2 pi^2 u
  c.laplacian_u = [u = c.u](const Point& x) -> Point { return -2 * pi * pi * u(x); };
  c.grad_div_u = c.laplacian_u;
  return c;
}

// Polynomial in global coordinates, sum of c x^a y^b.
struct GlobalPolynomial {
  struct Term {
    int a, b;
    double c;
  };
  std::vector<Term> terms;

  double operator()(const Point& x) const {
    double s = 0.0;
    for (const Term& t : terms) s += t.c * std::pow(x[0], t.a) * std::pow(x[1], t.b);
    return s;
  }
  GlobalPolynomial d(int dir) const {
    GlobalPolynomial out;
    for (const Term& t : terms) {
      const int e = dir == 0 ? t.a : t.b;
      if (e == 0) continue;
      out.terms.push_back(dir == 0 ? Term{t.a - 1, t.b, t.c * e} : Term{t.a, t.b - 1, t.c * e});
    }
    return out;
  }
  double unit_square_mean() const {
    double s = 0.0;
    for (const Term& t : terms) s += t.c / ((t.a + 1.0) * (t.b + 1.0));
    return s;
  }

  static GlobalPolynomial random(int degree, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GlobalPolynomial p;
    for (int n = 0; n <= degree; ++n)
      for (int b = 0; b <= n; ++b) p.terms.push_back({n - b, b, dist(rng)});
    return p;
  }
};

}  // namespace

ManufacturedCase polynomial_patch_case(int k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgumentError("patch case needs k >= 2");
  std::mt19937_64 rng(seed);
  const GlobalPolynomial psi = GlobalPolynomial::random(k + 1, rng);
  GlobalPolynomial p = GlobalPolynomial::random(k - 1, rng);
  p.terms.push_back({0, 0, -p.unit_square_mean()});

  const GlobalPolynomial px = psi.d(0), py = psi.d(1);
  const GlobalPolynomial pxx = px.d(0), pxy = px.d(1), pyy = py.d(1);
  const GlobalPolynomial lap_x = pxx.d(0), lap_y = pxx.d(1);  // d/dx and d/dy of psi_xx
  const GlobalPolynomial pyyx = pyy.d(0), pyyy = pyy.d(1);
  const GlobalPolynomial gpx = p.d(0), gpy = p.d(1);

  ManufacturedCase c;
  c.name = "polynomial_patch_k" + std::to_string(k);
  c.u = [=](const Point& x) -> Point { return {py(x), -px(x)}; };
  c.grad_u = [=](const Point& x) {
    Eigen::Matrix2d g;
    g << pxy(x), pyy(x), -pxx(x), -pxy(x);
    return g;
  };
  // lap u = (d_y lap psi, -d_x lap psi)
  c.laplacian_u = [=](const Point& x) -> Point { return {lap_y(x) + pyyy(x), -(lap_x(x) + pyyx(x))}; };
  c.grad_div_u = [](const Point&) -> Point { return Point::Zero(); };
  c.div_u = [](const Point&) { return 0.0; };
  c.p = [=](const Point& x) { return p(x); };
  c.grad_p = [=](const Point& x) -> Point { return {gpx(x), gpy(x)}; };
  return c;
}

ManufacturedCase manufactured_case(const std::string& name) {
  if (name == "stokes_s51") return stokes_case();
  if (name == "darcy_s52") return darcy_case();
  if (name == "navier_stokes_s53") return navier_stokes_case();
  throw InvalidArgumentError("unknown manufactured case '" + name + "'");
}

ManufacturedCase case_for(ProblemKind problem) {
  switch (problem) {
    case ProblemKind::stokes: return stokes_case();
    case ProblemKind::darcy: return darcy_case();
    case ProblemKind::navier_stokes: return navier_stokes_case();
  }
  throw InvalidArgumentError("unknown problem");
}

ErrorNorms compute_errors(const Discretization& disc, const SolveResult& result, const ManufacturedCase& c) {
  const int k = disc.k();
  const int mp = disc.dofs().pressure_per_element();
  double h1 = 0.0, l2 = 0.0, pl2 = 0.0;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const LocalElement& el = disc.element(e);
    const ProjectorSet& P = disc.projectors(e);
    const ElementFrame& f = el.frame();
    const Eigen::VectorXd chi = disc.local_values(e, result.chi);
    const VectorPolynomial un(k, P.nabla * chi);
    const MatrixPolynomial gun = gradient(un, f);
    const VectorPolynomial u0(k, P.zero * chi);
    const ScalarPolynomial ph(k - 1, (f.diameter / f.area) * result.rho.segment(disc.dofs().pressure_offset(e), mp));

    const PolygonRule rule = polygon_rule(el.geometry, 2 * k + 2);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point& x = rule.points[q];
      const double w = rule.weights[q];
      h1 += w * (c.grad_u(x) - gun(f, x)).squaredNorm();
      l2 += w * (c.u(x) - u0(f, x)).squaredNorm();
      pl2 += w * std::pow(c.p(x) - ph(f, x), 2);
    }
  }
  return {std::sqrt(h1), std::sqrt(l2), std::sqrt(pl2)};
}

double convergence_rate(double e_prev, double e_cur, double h_prev, double h_cur) {
  if (!(e_prev > 0.0) || !(e_cur > 0.0) || h_prev == h_cur) return std::numeric_limits<double>::quiet_NaN();
  return std::log(e_prev / e_cur) / std::log(h_prev / h_cur);
}

RunOutcome run_case(ProblemKind problem, StiffnessForm form, const ManufacturedCase& c, const PolygonalMesh& mesh,
                    int k, const RunOptions& options) {
  RunOutcome out;
  out.h = mesh_size(mesh);
  const Discretization disc(mesh, k);
  out.gndof = disc.dofs().num_velocity_dofs();
  const bool convection = problem == ProblemKind::navier_stokes;
  const SaddleSystem system = assemble(disc, form, c.problem_data(form, convection));
  if (convection) {
    out.result = solve_navier_stokes(disc, system, options.picard);
  } else {
    out.result = solve_linear(system);
    report_constraints(disc, system, out.result);
  }
  out.errors = compute_errors(disc, out.result, c);
  return out;
}

void fill_rates(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].rate_h1.reset();
    rows[i].rate_l2.reset();
    rows[i].rate_p.reset();
    if (i == 0 || rows[i - 1].k != rows[i].k) continue;
    const ConvergenceRow& a = rows[i - 1];
    ConvergenceRow& b = rows[i];
    b.rate_h1 = convergence_rate(a.errors.u_h1, b.errors.u_h1, a.h, b.h);
    b.rate_l2 = convergence_rate(a.errors.u_l2, b.errors.u_l2, a.h, b.h);
    b.rate_p = convergence_rate(a.errors.p_l2, b.errors.p_l2, a.h, b.h);
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& text, int line, const std::string& key) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (!in || !(in >> std::ws).eof()) throw ParseError("invalid value '" + text + "' for " + key, line);
  return value;
}

std::vector<int> parse_int_list(const std::string& text, int line, const std::string& key) {
  std::vector<int> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_number<int>(trim(item), line, key));
  if (out.empty()) throw ParseError("empty list for " + key, line);
  return out;
}

}  // namespace

StudyConfig parse_study_config(std::istream& in) {
  StudyConfig cfg;
  bool form_given = false;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected key = value", line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (value.empty()) throw ParseError("missing value for " + key, line);
    try {
      if (key == "problem") {
        cfg.problem = parse_problem(value);
      } else if (key == "form") {
        cfg.form = parse_stiffness_form(value);
        form_given = true;
      } else if (key == "family") {
        cfg.family = parse_mesh_family(value);
      } else if (key == "n_list") {
        cfg.n_list = parse_int_list(value, line, key);
        for (int n : cfg.n_list)
          if (n < 1) throw ParseError("n_list entries must be positive", line);
      } else if (key == "k_list") {
        cfg.k_list = parse_int_list(value, line, key);
        for (int k : cfg.k_list)
          if (k < 2) throw ParseError("k_list entries must be at least 2", line);
      } else if (key == "seed") {
        cfg.seed = parse_number<std::uint64_t>(value, line, key);
      } else if (key == "tol") {
        cfg.tol = parse_number<double>(value, line, key);
        if (!(cfg.tol > 0.0)) throw ParseError("tol must be positive", line);
      } else if (key == "max_iter") {
        cfg.max_iter = parse_number<int>(value, line, key);
        if (cfg.max_iter < 1) throw ParseError("max_iter must be positive", line);
      } else if (key == "output") {
        cfg.output = value;
      } else {
        throw ParseError("unknown key '" + key + "'", line);
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError(err.what(), line);
    }
  }
  if (!form_given) cfg.form = default_form(cfg.problem);
  return cfg;
}

StudyConfig read_study_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open config '" + path + "'");
  return parse_study_config(in);
}

std::vector<ConvergenceRow> run_study(const StudyConfig& config) {
  const ManufacturedCase c = case_for(config.problem);
  RunOptions options;
  options.seed = config.seed;
  options.picard = {config.tol, config.max_iter};
  std::vector<ConvergenceRow> rows;
  for (int k : config.k_list) {
    for (int n : config.n_list) {
      ConvergenceRow row;
      row.family = to_string(config.family);
      row.n = n;
      row.k = k;
      try {
        const PolygonalMesh mesh = generate_mesh(config.family, n, config.seed);
        const RunOutcome r = run_case(config.problem, config.form, c, mesh, k, options);
        row.h = r.h;
        row.gndof = r.gndof;
        row.errors = r.errors;
        spdlog::info("{} {} n={} k={}: h={:.4e} gndof={} err_u_h1={:.4e} err_u_l2={:.4e} err_p_l2={:.4e}",
                     to_string(config.problem), row.family, n, k, r.h, r.gndof, r.errors.u_h1, r.errors.u_l2,
                     r.errors.p_l2);
      } catch (const Error& err) {
        throw Error("study failed at family=" + row.family + " n=" + std::to_string(n) + " k=" +
                    std::to_string(k) + ": " + err.what());
      }
      rows.push_back(row);
    }
  }
  fill_rates(rows);
  return rows;
}

std::string study_output_path(const StudyConfig& config, int k) {
  if (config.k_list.size() <= 1) return config.output;
  const std::string& out = config.output;
  const auto slash = out.find_last_of('/');
  const auto dot = out.find_last_of('.');
  const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
  const std::string stem = has_ext ? out.substr(0, dot) : out;
  const std::string ext = has_ext ? out.substr(dot) : "";
  return stem + "_k" + std::to_string(k) + ext;
}

void write_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "family,n,h,gndof,err_u_h1,err_u_l2,err_p_l2,rate_h1,rate_l2,rate_p\n";
  out << std::setprecision(10) << std::scientific;
  const auto rate = [&out](const std::optional<double>& r) {
    if (r && std::isfinite(*r)) out << *r;
  };
  for (const ConvergenceRow& r : rows) {
    out << r.family << ',' << r.n << ',' << r.h << ',' << r.gndof << ',' << r.errors.u_h1 << ',' << r.errors.u_l2
        << ',' << r.errors.p_l2 << ',';
    rate(r.rate_h1);
    out << ',';
    rate(r.rate_l2);
    out << ',';
    rate(r.rate_p);
    out << '\n';
  }
}

void write_csv(const std::string& path, const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path);
  if (!out) throw InvalidArgumentError("cannot write '" + path + "'");
  write_csv(out, rows);
}

}  // namespace vemix
