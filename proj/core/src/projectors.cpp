#include "vemix/projectors.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>

namespace vemix {

namespace {

using Row = Eigen::RowVectorXd;
using MatrixXl = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXl = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// lhs * X = rhs, kept unsolved. Functionals g^T X are formed as
// (lhs^{-T} g)^T rhs, which avoids cancellation among the large entries of X.
struct LocalSystem {
  Eigen::MatrixXd lhs;
  Eigen::MatrixXd rhs;
  MatrixXl rhs_ext;
  Eigen::PartialPivLU<MatrixXl> dual;

  LocalSystem(Eigen::MatrixXd a, Eigen::MatrixXd b)
      : lhs(std::move(a)), rhs(std::move(b)), rhs_ext(rhs.cast<long double>()),
        dual(MatrixXl(lhs.transpose().cast<long double>())) {}

  Row functional(const Eigen::VectorXd& g) const {
    const VectorXl w = dual.solve(g.cast<long double>());
    return (w.transpose() * rhs_ext).cast<double>();
  }
};

struct EdgeData {
  Point normal;
  std::vector<int> nodes;
  EdgeQuadrature lobatto;
  EdgeQuadrature gauss;
};

// Linear functionals of the local DoF vector. Each returns a row r with
// r * chi equal to the requested integral of the virtual function.
class Functionals {
 public:
  explicit Functionals(const LocalElement& el) : el_(el), k_(el.k()), n_(el.ndof()) {
    const auto& g = el.geometry;
    const int m = g.num_vertices();
    edges_.reserve(m);
    for (int e = 0; e < m; ++e) {
      const Point& a = g.vertices[e];
      const Point& b = g.vertices[(e + 1) % m];
      const QuadratureRule1D& lob = el.space.lobatto();
      edges_.push_back({g.normals[e], el.space.edge_nodes(e), edge_quadrature(a, b, lob, lob.exactness),
                        edge_quadrature(a, b, lob, 2 * k_ + 1)});
    }
  }

  void set_divergence(const LocalSystem* div) { div_ = div; }
  void set_pi_nabla(const LocalSystem* pn) { pi_nabla_ = pn; }

  const std::vector<EdgeData>& edges() const { return edges_; }

  const EdgeQuadrature& edge_rule(int e, int integrand_degree) const {
    if (integrand_degree > 2 * k_ + 1) {
      throw InvalidArgumentError("edge integrand degree " + std::to_string(integrand_degree) +
                                 " exceeds 2k+1");
    }
    return integrand_degree <= el_.space.lobatto().exactness ? edges_[e].lobatto : edges_[e].gauss;
  }

  // Sum over edges of int_e v . w(e, x); w has degree `weight_degree` along each edge.
  template <typename W>
  Row boundary(int weight_degree, W&& weight) const {
    Row row = Row::Zero(n_);
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      const EdgeQuadrature& q = edge_rule(e, k_ + weight_degree);
      const auto& nodes = edges_[e].nodes;
      for (std::size_t g = 0; g < q.points.size(); ++g) {
        const Point w = q.weights[g] * weight(e, q.points[g]);
        for (int j = 0; j <= k_; ++j) {
          const double s = q.interpolation(g, j);
          row(2 * nodes[j]) += w.x() * s;
          row(2 * nodes[j] + 1) += w.y() * s;
        }
      }
    }
    return row;
  }

  // int_E div(v) m_b.
  Row div_moment(MultiIndex b) const {
    const ElementFrame& f = el_.frame();
    if (b.degree() == 0) {
      return boundary(0, [&](int e, const Point&) { return edges_[e].normal; });
    }
    Row row = Row::Zero(n_);
    if (b.degree() <= k_ - 1) {
      row(el_.space.div_dof(monomial_position(b))) = f.area / f.diameter;
      return row;
    }
    if (div_ == nullptr) throw AssemblyError("divergence reconstruction required but not available");
    Eigen::VectorXd g(poly_dim(k_ - 1));
    for (int i = 0; i < g.size(); ++i) g(i) = el_.moments(monomial_at(i) + b);
    return div_->functional(g);
  }

  // int_E v . grad m_b.
  Row grad_moment(MultiIndex b) const {
    const ElementFrame& f = el_.frame();
    Row row = -div_moment(b);
    row += boundary(b.degree(), [&](int e, const Point& x) {
      return Point(edges_[e].normal * eval_monomial(b, f, x));
    });
    return row;
  }

  // int_E v . m_perp m_b.
  Row perp_moment(MultiIndex b) const {
    const ElementFrame& f = el_.frame();
    Row row = Row::Zero(n_);
    if (b.degree() <= k_ - 3) {
      row(el_.space.perp_dof(monomial_position(b))) = f.area;
      return row;
    }
    if (b.degree() > k_ - 1) {
      throw AssemblyError("m_perp moment of degree " + std::to_string(b.degree()) + " is not computable");
    }
    if (pi_nabla_ == nullptr) throw AssemblyError("enhancing condition needs the nabla projector");
    // Enhancing condition: these moments coincide with those of the nabla projection.
    Eigen::VectorXd g(2 * poly_dim(k_));
    for (int i = 0; i < g.size(); ++i) g(i) = perp_integral(el_.moments, i, k_, b);
    return pi_nabla_->functional(g);
  }

  // int_E v . q.
  Row l2_moment(const VectorPolynomial& q) const {
    Row row = Row::Zero(n_);
    if (q.degree() < 0) return row;
    const GradPerpDecomposition d = decompose_vector_polynomial(q, el_.frame());
    for (int i = 0; i < d.grad_part.coeffs().size(); ++i) {
      const double c = d.grad_part.coeffs()(i);
      if (c != 0.0) row += c * grad_moment(monomial_at(i));
    }
    for (int i = 0; i < d.perp_part.coeffs().size(); ++i) {
      const double c = d.perp_part.coeffs()(i);
      if (c != 0.0) row += c * perp_moment(monomial_at(i));
    }
    return row;
  }

  // int_{dE} p . w for a vector polynomial evaluated through `value`.
  template <typename P, typename W>
  double boundary_poly(int degree, P&& value, W&& weight) const {
    double sum = 0.0;
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      const EdgeQuadrature& q = edge_rule(e, degree);
      for (std::size_t g = 0; g < q.points.size(); ++g) {
        sum += q.weights[g] * value(q.points[g]).dot(weight(e, q.points[g]));
      }
    }
    return sum;
  }

  // int_E m_i . m_perp m_b for the i-th monomial of [M_n]^2.
  static double perp_integral(const MonomialMoments& mom, int i, int n, MultiIndex b) {
    const VectorSlot s = vector_slot(i, n);
    if (s.component == 0) return mom(s.alpha + b + MultiIndex{0, 1});
    return -mom(s.alpha + b + MultiIndex{1, 0});
  }

 private:
  const LocalElement& el_;
  int k_;
  int n_;
  std::vector<EdgeData> edges_;
  const LocalSystem* div_ = nullptr;
  const LocalSystem* pi_nabla_ = nullptr;
};

Point unit_vector(int c) { return c == 0 ? Point(1.0, 0.0) : Point(0.0, 1.0); }

Point mperp(const ElementFrame& f, const Point& x) {
  const Point s = f.scaled(x);
  return {s.y(), -s.x()};
}

// Boundary term of int grad v : G for G = grad(m_j) or eps(m_j).
Row matrix_boundary(const Functionals& fn, const MatrixPolynomial& g, const ElementFrame& f) {
  return fn.boundary(std::max(g.degree(), 0), [&](int e, const Point& x) {
    return Point(g(f, x) * fn.edges()[e].normal);
  });
}

Eigen::MatrixXd gram(int size, const std::function<double(int, int)>& entry) {
  Eigen::MatrixXd a(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = i; j < size; ++j) a(i, j) = a(j, i) = entry(i, j);
  return a;
}

}  // namespace

int element_rule_degree(int k) noexcept { return std::max(2 * k, 3 * k - 1); }

LocalElement build_local_element(int k, const ElementGeometry& geometry, int id) {
  LocalElement el;
  el.id = id;
  el.geometry = geometry;
  el.space = build_local_space(k, geometry);
  el.rule = polygon_rule(geometry, element_rule_degree(k));
  el.moments = compute_monomial_moments(el.rule, geometry.frame, 3 * k - 1);
  return el;
}

std::string to_string(ProjectorKind kind) {
  switch (kind) {
    case ProjectorKind::divergence: return "divergence";
    case ProjectorKind::nabla_k: return "nabla_k";
    case ProjectorKind::eps_k: return "eps_k";
    case ProjectorKind::zero_k: return "zero_k";
    case ProjectorKind::zero_km1_grad: return "zero_km1_grad";
    case ProjectorKind::zero_km1_eps: return "zero_km1_eps";
  }
  return "unknown";
}

Eigen::MatrixXd solve_local(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, const std::string& what) {
  // The monomial Gram matrices lose about log10(cond) digits, which matters
  // from k = 5 on; the factorization runs in extended precision.
  using MatrixXl = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  const MatrixXl al = A.cast<long double>();
  Eigen::PartialPivLU<MatrixXl> lu(al);
  const double rcond = static_cast<double>(lu.rcond());
  if (!(rcond > std::numeric_limits<double>::epsilon())) {
    throw DegenerateElementError(what + ": singular local system (rcond " + std::to_string(rcond) + ")");
  }
  if (rcond < 1e-12) spdlog::warn("{}: local system condition estimate {:.3e}", what, 1.0 / rcond);
  return lu.solve(B.cast<long double>()).cast<double>();
}

Eigen::MatrixXd vector_mass(const MonomialMoments& moments, int n) {
  const int m = poly_dim(n);
  const Eigen::MatrixXd s = moments.scalar_mass(n);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  out.topLeftCorner(m, m) = s;
  out.bottomRightCorner(m, m) = s;
  return out;
}

Eigen::MatrixXd vector_stiffness(const MonomialMoments& moments, const ElementFrame& frame, int n) {
  const double h2 = frame.diameter * frame.diameter;
  return gram(2 * poly_dim(n), [&](int i, int j) {
    const VectorSlot a = vector_slot(i, n);
    const VectorSlot b = vector_slot(j, n);
    if (a.component != b.component) return 0.0;
    const MultiIndex s = a.alpha + b.alpha;
    return (a.alpha.a1 * b.alpha.a1 * moments({s.a1 - 2, s.a2}) +
            a.alpha.a2 * b.alpha.a2 * moments({s.a1, s.a2 - 2})) / h2;
  });
}

Eigen::MatrixXd vector_strain(const MonomialMoments& moments, const ElementFrame& frame, int n) {
  const int size = 2 * poly_dim(n);
  std::vector<MatrixPolynomial> eps(size);
  for (int i = 0; i < size; ++i) eps[i] = symmetric_part(gradient(VectorPolynomial::unit(i, n), frame));
  return gram(size, [&](int i, int j) { return moments.integrate(eps[i], eps[j]); });
}

Eigen::MatrixXd matrix_mass(const MonomialMoments& moments, int n) {
  const int m = poly_dim(n);
  const Eigen::MatrixXd s = moments.scalar_mass(n);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(4 * m, 4 * m);
  for (int b = 0; b < 4; ++b) out.block(b * m, b * m, m, m) = s;
  return out;
}

namespace {

LocalSystem divergence_system(const LocalElement& el) {
  const Functionals fn(el);
  const int m = poly_dim(el.k() - 1);
  Eigen::MatrixXd rhs(m, el.ndof());
  for (int j = 0; j < m; ++j) rhs.row(j) = fn.div_moment(monomial_at(j));
  return {el.moments.scalar_mass(el.k() - 1), std::move(rhs)};
}

LocalSystem nabla_system(const LocalElement& el) {
  const Functionals fn(el);
  const int k = el.k();
  const int m = poly_dim(k);
  const ElementFrame& f = el.frame();
  const double perimeter = el.geometry.perimeter();

  Eigen::MatrixXd a = vector_stiffness(el.moments, f, k);
  Eigen::MatrixXd rhs(2 * m, el.ndof());
  for (int j = 0; j < 2 * m; ++j) {
    const VectorSlot s = vector_slot(j, k);
    const Point ec = unit_vector(s.component);
    if (s.alpha.degree() == 0) {
      // Boundary average of v - Pi v vanishes.
      for (int i = 0; i < 2 * m; ++i) {
        const VectorPolynomial mi = VectorPolynomial::unit(i, k);
        a(j, i) = fn.boundary_poly(k, [&](const Point& x) { return mi(f, x); },
                                   [&](int, const Point&) { return ec; }) / perimeter;
      }
      rhs.row(j) = fn.boundary(0, [&](int, const Point&) { return ec; }) / perimeter;
      continue;
    }
    const VectorPolynomial mj = VectorPolynomial::unit(j, k);
    rhs.row(j) = -fn.l2_moment(laplacian(mj, f)) + matrix_boundary(fn, gradient(mj, f), f);
  }
  return {std::move(a), std::move(rhs)};
}

LocalSystem eps_system(const LocalElement& el) {
  const Functionals fn(el);
  const int k = el.k();
  const int m = poly_dim(k);
  const ElementFrame& f = el.frame();
  const double perimeter = el.geometry.perimeter();
  const Eigen::MatrixXd strain = vector_strain(el.moments, f, k);

  // (0, m_(1,0)) has the same strain as (m_(0,1), 0); it is dropped together
  // with the two constants and replaced by the three rigid-motion rows.
  std::vector<int> tests;
  for (int j = 0; j < 2 * m; ++j) {
    if (j == 0 || j == m || j == m + 1) continue;
    tests.push_back(j);
  }

  Eigen::MatrixXd a(2 * m, 2 * m);
  Eigen::MatrixXd rhs(2 * m, el.ndof());
  int row = 0;
  for (int j : tests) {
    const VectorPolynomial mj = VectorPolynomial::unit(j, k);
    const MatrixPolynomial ej = symmetric_part(gradient(mj, f));
    a.row(row) = strain.row(j);
    rhs.row(row) = -fn.l2_moment(divergence(ej, f)) + matrix_boundary(fn, ej, f);
    ++row;
  }
  const std::array<std::function<Point(const Point&)>, 3> rigid = {
      [](const Point&) { return Point(1.0, 0.0); }, [](const Point&) { return Point(0.0, 1.0); },
      [&](const Point& x) { return mperp(f, x); }};
  for (int r = 0; r < 3; ++r) {
    const int degree = r < 2 ? 0 : 1;
    const auto weight = [&](int, const Point& x) { return rigid[r](x); };
    for (int i = 0; i < 2 * m; ++i) {
      const VectorPolynomial mi = VectorPolynomial::unit(i, k);
      a(row, i) = fn.boundary_poly(k + degree, [&](const Point& x) { return mi(f, x); }, weight) / perimeter;
    }
    rhs.row(row) = fn.boundary(degree, weight) / perimeter;
    ++row;
  }
  return {std::move(a), std::move(rhs)};
}

LocalSystem zero_system(const LocalElement& el, const LocalSystem& div, const LocalSystem& nabla) {
  Functionals fn(el);
  fn.set_divergence(&div);
  fn.set_pi_nabla(&nabla);
  const int k = el.k();
  const int m = poly_dim(k);
  Eigen::MatrixXd rhs(2 * m, el.ndof());
  for (int j = 0; j < 2 * m; ++j) rhs.row(j) = fn.l2_moment(VectorPolynomial::unit(j, k));
  return {vector_mass(el.moments, k), std::move(rhs)};
}

// Right-hand sides int grad v : M_j over [M_{k-1}]^{2x2}.
Eigen::MatrixXd gradient_moments(const LocalElement& el) {
  const Functionals fn(el);
  const int k = el.k();
  const int m = poly_dim(k - 1);
  const ElementFrame& f = el.frame();
  Eigen::MatrixXd rhs(4 * m, el.ndof());
  for (int j = 0; j < 4 * m; ++j) {
    const MatrixPolynomial mj = MatrixPolynomial::unit(j, k - 1);
    rhs.row(j) = -fn.l2_moment(divergence(mj, f)) + matrix_boundary(fn, mj, f);
  }
  return rhs;
}

}  // namespace

Eigen::MatrixXd divergence_matrix(const LocalElement& el) {
  const LocalSystem s = divergence_system(el);
  return solve_local(s.lhs, s.rhs, "divergence");
}

Eigen::MatrixXd pi_nabla_matrix(const LocalElement& el) {
  const LocalSystem s = nabla_system(el);
  return solve_local(s.lhs, s.rhs, "nabla projector");
}

Eigen::MatrixXd pi_eps_matrix(const LocalElement& el) {
  const LocalSystem s = eps_system(el);
  return solve_local(s.lhs, s.rhs, "strain projector");
}

Eigen::MatrixXd pi_zero_matrix(const LocalElement& el) {
  const LocalSystem s = zero_system(el, divergence_system(el), nabla_system(el));
  return solve_local(s.lhs, s.rhs, "L2 projector");
}

Eigen::MatrixXd pi_zero_grad_matrix(const LocalElement& el) {
  return solve_local(matrix_mass(el.moments, el.k() - 1), gradient_moments(el), "gradient projector");
}

Eigen::MatrixXd pi_zero_eps_matrix(const LocalElement& el) {
  const int m = poly_dim(el.k() - 1);
  const Eigen::MatrixXd g = gradient_moments(el);
  // int eps(v) : M_j = int grad v : sym(M_j); blocks are (1,1), (1,2), (2,1), (2,2).
  Eigen::MatrixXd rhs = g;
  rhs.middleRows(m, m) = 0.5 * (g.middleRows(m, m) + g.middleRows(2 * m, m));
  rhs.middleRows(2 * m, m) = rhs.middleRows(m, m);
  return solve_local(matrix_mass(el.moments, el.k() - 1), rhs, "strain L2 projector");
}

Eigen::MatrixXd polynomial_dof_matrix(const LocalElement& el) {
  const int k = el.k();
  const int m = poly_dim(k);
  const LocalSpace& sp = el.space;
  const ElementFrame& f = el.frame();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(el.ndof(), 2 * m);
  for (int i = 0; i < 2 * m; ++i) {
    const VectorSlot s = vector_slot(i, k);
    for (int n = 0; n < sp.num_nodes(); ++n) d(2 * n + s.component, i) = eval_monomial(s.alpha, f, sp.nodes()[n]);
    for (int b = 0; b < sp.num_perp_dofs(); ++b) {
      d(sp.perp_dof(b), i) = Functionals::perp_integral(el.moments, i, k, monomial_at(b)) / f.area;
    }
    const int exponent = s.component == 0 ? s.alpha.a1 : s.alpha.a2;
    if (exponent == 0) continue;
    const MultiIndex lowered = s.component == 0 ? MultiIndex{s.alpha.a1 - 1, s.alpha.a2}
                                                : MultiIndex{s.alpha.a1, s.alpha.a2 - 1};
    for (int l = 1; l < poly_dim(k - 1); ++l) {
      d(sp.div_dof(l), i) = exponent * el.moments(lowered + monomial_at(l)) / f.area;
    }
  }
  return d;
}

const Eigen::MatrixXd& ProjectorSet::get(ProjectorKind kind) const {
  switch (kind) {
    case ProjectorKind::divergence: return divergence;
    case ProjectorKind::nabla_k: return nabla;
    case ProjectorKind::eps_k: return eps;
    case ProjectorKind::zero_k: return zero;
    case ProjectorKind::zero_km1_grad: return zero_grad;
    case ProjectorKind::zero_km1_eps: return zero_eps;
  }
  throw InvalidArgumentError("unknown projector kind");
}

ProjectorSet compute_projectors(const LocalElement& el) {
  ProjectorSet p;
  const LocalSystem div = divergence_system(el);
  const LocalSystem nabla = nabla_system(el);
  const LocalSystem zero = zero_system(el, div, nabla);
  p.divergence = solve_local(div.lhs, div.rhs, "divergence");
  p.nabla = solve_local(nabla.lhs, nabla.rhs, "nabla projector");
  p.eps = pi_eps_matrix(el);
  p.zero = solve_local(zero.lhs, zero.rhs, "L2 projector");
  p.zero_grad = pi_zero_grad_matrix(el);
  p.zero_eps = pi_zero_eps_matrix(el);
  p.dofs_of_monomials = polynomial_dof_matrix(el);
  return p;
}

void write_projector_csv(std::ostream& out, ProjectorKind kind, int element, int k,
                         const Eigen::MatrixXd& matrix) {
  out << "kind,element,k,rows,cols\n";
  out << to_string(kind) << ',' << element << ',' << k << ',' << matrix.rows() << ',' << matrix.cols() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) out << (c ? "," : "") << matrix(r, c);
    out << '\n';
  }
}

}  // namespace vemix
