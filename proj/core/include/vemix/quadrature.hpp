#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "vemix/mesh.hpp"
#include "vemix/poly.hpp"

namespace vemix {

/// Rule on [-1, 1], nodes ascending.
struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  int exactness = 0;

  int size() const noexcept { return static_cast<int>(nodes.size()); }
};

/// Gauss-Lobatto rule with both endpoints; exact to degree 2*npoints-3.
QuadratureRule1D gauss_lobatto(int npoints);

/// Gauss-Legendre rule; exact to degree 2*npoints-1.
QuadratureRule1D gauss_legendre(int npoints);

struct PolygonRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;

  template <typename F>
  auto integrate(F&& f) const {
    using R = std::decay_t<decltype(f(points.front()))>;
    R sum = weights.front() * f(points.front());
    for (std::size_t q = 1; q < points.size(); ++q) sum += weights[q] * f(points[q]);
    return sum;
  }
};

/// Collapsed (Duffy) tensor Gauss rule on a triangle, exact to `degree`.
PolygonRule triangle_rule(const Point& a, const Point& b, const Point& c, int degree);

/// Splits the polygon into triangles, fanned from the centroid when the
/// centroid sees every edge and by ear clipping otherwise.
std::vector<std::array<Point, 3>> triangulate(const ElementGeometry& geometry);

/// Element rule exact for polynomials of total degree <= `degree`.
PolygonRule polygon_rule(const ElementGeometry& geometry, int degree);

/// Integrals of all scaled monomials up to max_degree using `rule`.
MonomialMoments compute_monomial_moments(const PolygonRule& rule, const ElementFrame& frame,
                                         int max_degree);

/// Lagrange basis of `nodes` evaluated at s.
Eigen::VectorXd lagrange_basis(std::span<const double> nodes, double s);

/// Quadrature on the segment [a, b] for integrands whose trace factor is
/// known through its values at the mapped nodes of `trace_nodes`.
///
/// `interpolation` maps node values to values at `points`. When the
/// integrand degree is at most the Lobatto exactness, the nodes themselves
/// are used (interpolation is the identity); otherwise the trace is
/// reconstructed in Lagrange form and integrated with Gauss-Legendre.
struct EdgeQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;
  Eigen::MatrixXd interpolation;
};

EdgeQuadrature edge_quadrature(const Point& a, const Point& b, const QuadratureRule1D& trace_nodes,
                               int integrand_degree);

/// Integral over [a, b] of trace * weight where the trace is given by its
/// values at the Gauss-Lobatto nodes mapped to the edge and `weight` is a
/// polynomial of degree `weight_degree` along the edge.
double integrate_edge_trace(const Point& a, const Point& b, std::span<const double> trace_values,
                            const std::function<double(const Point&)>& weight, int weight_degree);

}  // namespace vemix
