#include "vemix/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace vemix {

namespace {

// Legendre P_n and P_{n-1} at x by the three-term recurrence.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {p0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace

QuadratureRule1D gauss_legendre(int npoints) {
  if (npoints < 1) throw InvalidArgumentError("Gauss-Legendre needs at least one point");
  QuadratureRule1D rule;
  rule.nodes.resize(npoints);
  rule.weights.resize(npoints);
  rule.exactness = 2 * npoints - 1;
  for (int i = 0; i < npoints; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npoints + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const auto [p, pm1] = legendre(npoints, x);
      dp = npoints * (x * p - pm1) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const auto [p, pm1] = legendre(npoints, x);
    dp = npoints * (x * p - pm1) / (x * x - 1.0);
    rule.nodes[npoints - 1 - i] = x;
    rule.weights[npoints - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (npoints % 2 == 1) rule.nodes[npoints / 2] = 0.0;
  return rule;
}

QuadratureRule1D gauss_lobatto(int npoints) {
  if (npoints < 2) throw InvalidArgumentError("Gauss-Lobatto needs at least two points");
  const int n = npoints - 1;
  QuadratureRule1D rule;
  rule.nodes.resize(npoints);
  rule.weights.resize(npoints);
  rule.exactness = 2 * npoints - 3;
  for (int i = 0; i <= n; ++i) {
    // Newton iteration for the roots of (1 - x^2) P_n'(x), Chebyshev-Gauss-Lobatto start.
    double x = -std::cos(std::numbers::pi * i / n);
    for (int it = 0; it < 100; ++it) {
      const auto [p, pm1] = legendre(n, x);
      const double dx = (x * p - pm1) / ((n + 1.0) * p);
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double p = legendre(n, x).first;
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / (n * (n + 1.0) * p * p);
  }
  rule.nodes.front() = -1.0;
  rule.nodes.back() = 1.0;
  if (npoints % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

PolygonRule triangle_rule(const Point& a, const Point& b, const Point& c, int degree) {
  const QuadratureRule1D gu = gauss_legendre((degree + 3) / 2);
  const QuadratureRule1D gv = gauss_legendre((degree + 2) / 2);
  const double twice_area = std::abs((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());

  PolygonRule rule;
  rule.degree = degree;
  rule.points.reserve(gu.size() * gv.size());
  rule.weights.reserve(gu.size() * gv.size());
  for (int i = 0; i < gu.size(); ++i) {
    const double u = 0.5 * (gu.nodes[i] + 1.0);
    for (int j = 0; j < gv.size(); ++j) {
      const double v = 0.5 * (gv.nodes[j] + 1.0);
      const double s = u;
      const double t = (1.0 - u) * v;
      rule.points.push_back(a + s * (b - a) + t * (c - a));
      rule.weights.push_back(0.25 * gu.weights[i] * gv.weights[j] * (1.0 - u) * twice_area);
    }
  }
  return rule;
}

namespace {

double orient(const Point& a, const Point& b, const Point& c) {
  return (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
}

bool inside_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
  return orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0;
}

std::vector<std::array<Point, 3>> ear_clip(const std::vector<Point>& poly) {
  std::vector<int> idx(poly.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<std::array<Point, 3>> tris;
  while (idx.size() > 3) {
    const int m = static_cast<int>(idx.size());
    bool clipped = false;
    for (int i = 0; i < m && !clipped; ++i) {
      const Point& a = poly[idx[(i + m - 1) % m]];
      const Point& b = poly[idx[i]];
      const Point& c = poly[idx[(i + 1) % m]];
      if (orient(a, b, c) <= 0.0) continue;
      bool ear = true;
      for (int j = 0; j < m && ear; ++j) {
        if (j == i || j == (i + 1) % m || j == (i + m - 1) % m) continue;
        if (inside_triangle(poly[idx[j]], a, b, c)) ear = false;
      }
      if (ear) {
        tris.push_back({a, b, c});
        idx.erase(idx.begin() + i);
        clipped = true;
      }
    }
    if (!clipped) throw DegenerateElementError("ear clipping failed: polygon is not simple");
  }
  if (orient(poly[idx[0]], poly[idx[1]], poly[idx[2]]) <= 0.0) {
    throw DegenerateElementError("ear clipping produced a degenerate triangle");
  }
  tris.push_back({poly[idx[0]], poly[idx[1]], poly[idx[2]]});
  return tris;
}

}  // namespace

std::vector<std::array<Point, 3>> triangulate(const ElementGeometry& geometry) {
  const auto& v = geometry.vertices;
  const int m = geometry.num_vertices();
  const Point& c = geometry.frame.centroid;
  const double tol = 1e-12 * geometry.frame.area;

  std::vector<std::array<Point, 3>> tris;
  bool fan = true;
  for (int i = 0; i < m && fan; ++i) fan = 0.5 * orient(c, v[i], v[(i + 1) % m]) > tol;
  if (fan) {
    for (int i = 0; i < m; ++i) tris.push_back({c, v[i], v[(i + 1) % m]});
    return tris;
  }
  return ear_clip(v);
}

PolygonRule polygon_rule(const ElementGeometry& geometry, int degree) {
  PolygonRule rule;
  rule.degree = degree;
  for (const auto& t : triangulate(geometry)) {
    const PolygonRule tr = triangle_rule(t[0], t[1], t[2], degree);
    rule.points.insert(rule.points.end(), tr.points.begin(), tr.points.end());
    rule.weights.insert(rule.weights.end(), tr.weights.begin(), tr.weights.end());
  }
  return rule;
}

MonomialMoments compute_monomial_moments(const PolygonRule& rule, const ElementFrame& frame,
                                         int max_degree) {
  Eigen::VectorXd values = Eigen::VectorXd::Zero(poly_dim(max_degree));
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    values += rule.weights[q] * eval_monomials(max_degree, frame, rule.points[q]);
  }
  return MonomialMoments(max_degree, std::move(values));
}

Eigen::VectorXd lagrange_basis(std::span<const double> nodes, double s) {
  const int n = static_cast<int>(nodes.size());
  Eigen::VectorXd out(n);
  for (int j = 0; j < n; ++j) {
    double v = 1.0;
    for (int m = 0; m < n; ++m) {
      if (m != j) v *= (s - nodes[m]) / (nodes[j] - nodes[m]);
    }
    out(j) = v;
  }
  return out;
}

EdgeQuadrature edge_quadrature(const Point& a, const Point& b, const QuadratureRule1D& trace_nodes,
                               int integrand_degree) {
  const double half = 0.5 * (b - a).norm();
  const auto map = [&](double s) -> Point { return a + 0.5 * (s + 1.0) * (b - a); };

  EdgeQuadrature q;
  const int n = trace_nodes.size();
  if (integrand_degree <= trace_nodes.exactness) {
    for (int j = 0; j < n; ++j) {
      q.points.push_back(map(trace_nodes.nodes[j]));
      q.weights.push_back(half * trace_nodes.weights[j]);
    }
    q.interpolation = Eigen::MatrixXd::Identity(n, n);
    return q;
  }
  const QuadratureRule1D gauss = gauss_legendre((integrand_degree + 2) / 2);
  q.interpolation.resize(gauss.size(), n);
  for (int g = 0; g < gauss.size(); ++g) {
    q.points.push_back(map(gauss.nodes[g]));
    q.weights.push_back(half * gauss.weights[g]);
    q.interpolation.row(g) = lagrange_basis(trace_nodes.nodes, gauss.nodes[g]).transpose();
  }
  return q;
}

double integrate_edge_trace(const Point& a, const Point& b, std::span<const double> trace_values,
                            const std::function<double(const Point&)>& weight, int weight_degree) {
  const int n = static_cast<int>(trace_values.size());
  if (n < 2) throw InvalidArgumentError("edge trace needs at least two Lobatto values");
  const QuadratureRule1D lobatto = gauss_lobatto(n);
  const EdgeQuadrature q = edge_quadrature(a, b, lobatto, (n - 1) + weight_degree);
  const Eigen::Map<const Eigen::VectorXd> values(trace_values.data(), n);
  const Eigen::VectorXd at_points = q.interpolation * values;
  double sum = 0.0;
  for (std::size_t g = 0; g < q.points.size(); ++g) sum += q.weights[g] * at_points(g) * weight(q.points[g]);
  return sum;
}

}  // namespace vemix
