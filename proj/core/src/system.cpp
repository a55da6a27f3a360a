#include "vemix/system.hpp"

#include <Eigen/SparseLU>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace vemix {

StiffnessForm parse_stiffness_form(const std::string& name) {
  if (name == "zero") return StiffnessForm::zero;
  if (name == "grad") return StiffnessForm::grad;
  if (name == "eps") return StiffnessForm::eps;
  throw InvalidArgumentError("unknown form '" + name + "' (expected eps, grad or zero)");
}

std::string to_string(StiffnessForm form) {
  switch (form) {
    case StiffnessForm::zero: return "zero";
    case StiffnessForm::grad: return "grad";
    case StiffnessForm::eps: return "eps";
  }
  return "unknown";
}

Eigen::MatrixXd stabilization(const Eigen::MatrixXd& projector, const Eigen::MatrixXd& dofs_of_monomials) {
  const Eigen::Index n = projector.cols();
  const Eigen::MatrixXd r = Eigen::MatrixXd::Identity(n, n) - dofs_of_monomials * projector;
  return r.transpose() * r;
}

Eigen::MatrixXd local_stiffness(StiffnessForm form, const LocalElement& el, const ProjectorSet& p) {
  const int k = el.k();
  const ElementFrame& f = el.frame();
  switch (form) {
    case StiffnessForm::zero:
      return p.zero.transpose() * vector_mass(el.moments, k) * p.zero +
             f.area * stabilization(p.zero, p.dofs_of_monomials);
    case StiffnessForm::grad:
      return p.nabla.transpose() * vector_stiffness(el.moments, f, k) * p.nabla +
             stabilization(p.nabla, p.dofs_of_monomials);
    case StiffnessForm::eps:
      return p.eps.transpose() * vector_strain(el.moments, f, k) * p.eps +
             stabilization(p.eps, p.dofs_of_monomials);
  }
  throw InvalidArgumentError("unknown stiffness form");
}

Eigen::MatrixXd local_b_matrix(const LocalElement& el) {
  const LocalSpace& sp = el.space;
  const ElementFrame& f = el.frame();
  const int m = poly_dim(el.k() - 1);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, el.ndof());
  const QuadratureRule1D& lob = sp.lobatto();
  for (int e = 0; e < sp.num_vertices(); ++e) {
    const std::vector<int> nodes = sp.edge_nodes(e);
    const Point n = el.geometry.normals[e] * (0.5 * el.geometry.lengths[e] * f.diameter / f.area);
    for (int j = 0; j <= el.k(); ++j) {
      b(0, 2 * nodes[j]) += lob.weights[j] * n.x();
      b(0, 2 * nodes[j] + 1) += lob.weights[j] * n.y();
    }
  }
  for (int l = 1; l < m; ++l) b(l, sp.div_dof(l)) = 1.0;
  return b;
}

Eigen::VectorXd local_sigma(const LocalElement& el) {
  const ElementFrame& f = el.frame();
  Eigen::VectorXd s(poly_dim(el.k() - 1));
  for (int l = 0; l < s.size(); ++l) s(l) = f.diameter / f.area * el.moments(monomial_at(l));
  return s;
}

Eigen::VectorXd local_load(const LocalElement& el, const ProjectorSet& p, const VectorFunction& f) {
  const int k = el.k();
  const int m = poly_dim(k);
  Eigen::VectorXd moments = Eigen::VectorXd::Zero(2 * m);
  for (std::size_t q = 0; q < el.rule.points.size(); ++q) {
    const Point& x = el.rule.points[q];
    const Point fx = el.rule.weights[q] * f(x);
    const Eigen::VectorXd mon = eval_monomials(k, el.frame(), x);
    moments.head(m) += fx.x() * mon;
    moments.tail(m) += fx.y() * mon;
  }
  return p.zero.transpose() * moments;
}

Eigen::VectorXd local_divergence_load(const LocalElement& el, const ScalarFunction& g) {
  const ElementFrame& f = el.frame();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(poly_dim(el.k() - 1));
  for (std::size_t q = 0; q < el.rule.points.size(); ++q) {
    const Point& x = el.rule.points[q];
    out += el.rule.weights[q] * g(x) * eval_monomials(el.k() - 1, f, x);
  }
  return out * (f.diameter / f.area);
}

Eigen::MatrixXd local_convection(const LocalElement& el, const ProjectorSet& p, const Eigen::VectorXd& w) {
  const int k = el.k();
  const int mk = poly_dim(k);
  const int mg = poly_dim(k - 1);
  const Eigen::VectorXd pw = p.zero * w;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2 * mk, 4 * mg);
  for (int a = 0; a < 4 * mg; ++a) {
    const MatrixSlot sa = matrix_slot(a, k - 1);
    for (int b = 0; b < mk; ++b) {
      const int row = sa.row * mk + b;
      const MultiIndex ab = sa.alpha + monomial_at(b);
      double sum = 0.0;
      for (int g = 0; g < mk; ++g) {
        const double c = pw(sa.col * mk + g);
        if (c != 0.0) sum += c * el.moments(ab + monomial_at(g));
      }
      t(row, a) = sum;
    }
  }
  return p.zero.transpose() * t * p.zero_grad;
}

Discretization::Discretization(PolygonalMesh mesh, int k) : mesh_(std::move(mesh)), k_(k), dofs_(mesh_, k) {
  const int n = static_cast<int>(mesh_.num_elements());
  elements_.reserve(n);
  projectors_.reserve(n);
  for (int e = 0; e < n; ++e) {
    elements_.push_back(build_local_element(k, element_geometry(mesh_, e), e));
    projectors_.push_back(compute_projectors(elements_.back()));
  }
}

Eigen::VectorXd Discretization::local_values(int e, const Eigen::VectorXd& global) const {
  const std::vector<int>& map = dofs_.local_to_global(e);
  Eigen::VectorXd out(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) out(i) = global(map[i]);
  return out;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

void scatter(Triplets& t, const std::vector<int>& rows, const std::vector<int>& cols, const Eigen::MatrixXd& a) {
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != 0.0) t.emplace_back(rows[i], cols[j], a(i, j));
}

}  // namespace

SaddleSystem assemble(const Discretization& disc, StiffnessForm form, const ProblemData& data) {
  const GlobalDoFMap& dofs = disc.dofs();
  const int nv = dofs.num_velocity_dofs();
  const int np = dofs.num_pressure_dofs();
  const int mp = dofs.pressure_per_element();

  SaddleSystem s;
  s.f = Eigen::VectorXd::Zero(nv);
  s.g = Eigen::VectorXd::Zero(np);
  s.sigma = Eigen::VectorXd::Zero(np);
  Triplets tk;
  Triplets tb;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const LocalElement& el = disc.element(e);
    const ProjectorSet& p = disc.projectors(e);
    const std::vector<int>& map = dofs.local_to_global(e);
    if (static_cast<int>(map.size()) != el.ndof()) {
      throw AssemblyError("element " + std::to_string(e) + ": DoF map and local space disagree");
    }
    std::vector<int> prow(mp);
    for (int l = 0; l < mp; ++l) prow[l] = dofs.pressure_offset(e) + l;

    scatter(tk, map, map, local_stiffness(form, el, p));
    scatter(tb, prow, map, local_b_matrix(el));
    s.sigma.segment(dofs.pressure_offset(e), mp) = local_sigma(el);
    if (data.load) {
      const Eigen::VectorXd fe = local_load(el, p, data.load);
      for (int i = 0; i < el.ndof(); ++i) s.f(map[i]) += fe(i);
    }
    if (data.divergence_load) s.g.segment(dofs.pressure_offset(e), mp) = local_divergence_load(el, data.divergence_load);
  }
  s.K.resize(nv, nv);
  s.K.setFromTriplets(tk.begin(), tk.end());
  s.B.resize(np, nv);
  s.B.setFromTriplets(tb.begin(), tb.end());

  s.dirichlet_mask = dofs.boundary_mask();
  s.dirichlet_values = Eigen::VectorXd::Zero(nv);
  if (data.dirichlet) {
    for (int i = 0; i < nv; ++i) {
      if (s.dirichlet_mask[i]) s.dirichlet_values(i) = data.dirichlet(dofs.dof_point(i))(dofs.dof_component(i));
    }
  }
  return s;
}

SparseMatrix assemble_convection(const Discretization& disc, const Eigen::VectorXd& w) {
  const int nv = disc.dofs().num_velocity_dofs();
  Triplets t;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const std::vector<int>& map = disc.dofs().local_to_global(e);
    scatter(t, map, map, local_convection(disc.element(e), disc.projectors(e), disc.local_values(e, w)));
  }
  SparseMatrix c(nv, nv);
  c.setFromTriplets(t.begin(), t.end());
  return c;
}

ReducedSystem reduce(const SaddleSystem& s) {
  const int nv = s.num_velocity();
  const int np = s.num_pressure();
  ReducedSystem r;
  std::vector<int> index(nv, -1);
  for (int i = 0; i < nv; ++i) {
    if (!s.dirichlet_mask[i]) {
      index[i] = static_cast<int>(r.free_dofs.size());
      r.free_dofs.push_back(i);
    }
  }
  const int nf = static_cast<int>(r.free_dofs.size());
  const int lam = nf;
  const int p0 = nf + 1;
  const int n = nf + 1 + np;

  r.rhs = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < nf; ++i) r.rhs(i) = s.f(r.free_dofs[i]);
  r.rhs.tail(np) = s.g;

  Triplets t;
  t.reserve(s.K.nonZeros() + 2 * s.B.nonZeros() + 2 * np);
  for (int c = 0; c < s.K.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(s.K, c); it; ++it) {
      const int i = index[it.row()];
      if (i < 0) continue;
      if (index[c] >= 0) {
        t.emplace_back(i, index[c], it.value());
      } else {
        r.rhs(i) -= it.value() * s.dirichlet_values(c);
      }
    }
  }
  for (int c = 0; c < s.B.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(s.B, c); it; ++it) {
      const int row = p0 + static_cast<int>(it.row());
      if (index[c] >= 0) {
        t.emplace_back(row, index[c], it.value());
        t.emplace_back(index[c], row, it.value());
      } else {
        r.rhs(row) -= it.value() * s.dirichlet_values(c);
      }
    }
  }
  for (int p = 0; p < np; ++p) {
    if (s.sigma(p) == 0.0) continue;
    t.emplace_back(lam, p0 + p, s.sigma(p));
    t.emplace_back(p0 + p, lam, s.sigma(p));
  }
  r.matrix.resize(n, n);
  r.matrix.setFromTriplets(t.begin(), t.end());
  r.matrix.makeCompressed();
  return r;
}

SolveResult solve_linear(const SaddleSystem& system) {
  const ReducedSystem r = reduce(system);
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(r.matrix);
  lu.factorize(r.matrix);
  if (lu.info() != Eigen::Success) {
    throw SolverError("saddle-point factorization failed (" + lu.lastErrorMessage() +
                      "); suspected kernel: velocity constants or rigid motions without Dirichlet "
                      "data, or an unconstrained pressure mode");
  }
  const Eigen::VectorXd x = lu.solve(r.rhs);
  if (lu.info() != Eigen::Success || !x.allFinite()) throw SolverError("saddle-point solve failed");

  SolveResult out;
  const double bnorm = r.rhs.norm();
  out.residual = (r.matrix * x - r.rhs).norm() / (bnorm > 0.0 ? bnorm : 1.0);
  const int nf = static_cast<int>(r.free_dofs.size());
  out.chi = system.dirichlet_values;
  for (int i = 0; i < nf; ++i) out.chi(r.free_dofs[i]) = x(i);
  out.lambda = x(nf);
  out.rho = x.tail(system.num_pressure());
  out.pressure_mean = system.sigma.dot(out.rho);
  return out;
}

void report_constraints(const Discretization& disc, const SaddleSystem& system, SolveResult& result) {
  double div2 = 0.0;
  for (int e = 0; e < disc.num_elements(); ++e) {
    const LocalElement& el = disc.element(e);
    const Eigen::VectorXd d = disc.projectors(e).divergence * disc.local_values(e, result.chi);
    div2 += d.dot(el.moments.scalar_mass(el.k() - 1) * d);
  }
  result.divergence_norm2 = div2;
  result.pressure_mean = system.sigma.dot(result.rho);
}

SolveResult solve_navier_stokes(const Discretization& disc, const SaddleSystem& system,
                                const PicardOptions& options) {
  SolveResult current = solve_linear(system);
  std::vector<double> history;
  SaddleSystem step = system;
  for (int it = 1; it <= options.max_iter; ++it) {
    step.K = system.K + assemble_convection(disc, current.chi);
    SolveResult next = solve_linear(step);
    const double increment = (next.chi - current.chi).norm();
    const double scale = next.chi.norm();
    history.push_back(scale > 0.0 ? increment / scale : increment);
    spdlog::debug("picard iteration {}: relative increment {:.3e}", it, history.back());
    current = std::move(next);
    if (increment <= options.tol * scale) {
      current.iterations = it;
      current.increments = std::move(history);
      report_constraints(disc, step, current);
      return current;
    }
  }
  std::ostringstream msg;
  msg << "Picard iteration did not converge in " << options.max_iter << " iterations; relative increments:";
  for (double h : history) msg << ' ' << h;
  throw SolverError(msg.str());
}

void write_coordinate(std::ostream& out, const SparseMatrix& matrix) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int c = 0; c < matrix.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(matrix, c); it; ++it) out << it.row() << ' ' << c << ' ' << it.value() << '\n';
  }
}

void write_coordinate(const std::string& path, const SparseMatrix& matrix) {
  std::ofstream out(path);
  if (!out) throw InvalidArgumentError("cannot write matrix file '" + path + "'");
  write_coordinate(out, matrix);
}

}  // namespace vemix
