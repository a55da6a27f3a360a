#pragma once

// Reference values computed without the library's quadrature or projectors.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "vemix/mesh.hpp"
#include "vemix/poly.hpp"

namespace oracle {

using vemix::Point;

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// int_0^1 (x0 + t dx)^a (y0 + t dy)^b dt, expanded in closed form.
inline double segment_power_integral(double x0, double dx, int a, double y0, double dy, int b) {
  double s = 0.0;
  for (int i = 0; i <= a; ++i)
    for (int j = 0; j <= b; ++j)
      s += binomial(a, i) * binomial(b, j) * std::pow(x0, a - i) * std::pow(dx, i) * std::pow(y0, b - j) *
           std::pow(dy, j) / (i + j + 1);
  return s;
}

/// int_T x^a y^b over a triangle, from int_T d/dx(x^(a+1) y^b)/(a+1) and the
/// divergence theorem with exact edge integrals.
inline double triangle_moment(const Point& p0, const Point& p1, const Point& p2, int a, int b) {
  const Point v[3] = {p0, p1, p2};
  const double orient = ((p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x()) > 0 ? 1.0 : -1.0;
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Point& A = v[i];
    const Point& B = v[(i + 1) % 3];
    const Point d = B - A;
    // n ds = (dy, -dx) dt for a CCW loop
    s += orient * d.y() * segment_power_integral(A.x(), d.x(), a + 1, A.y(), d.y(), b) / (a + 1);
  }
  return s;
}

/// Polygon moment as the sum of fan triangles from vertex 0 (any simple
/// polygon works because signed areas cancel).
inline double polygon_moment(const std::vector<Point>& poly, int a, int b) {
  double s = 0.0;
  for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
    const Point& p0 = poly[0];
    const Point& p1 = poly[i];
    const Point& p2 = poly[i + 1];
    const double area2 = (p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x();
    const double t = triangle_moment(p0, p1, p2, a, b);
    s += area2 > 0 ? t : -t;
  }
  return s;
}

/// int over poly of f, where f is a polynomial in global coordinates given
/// as sum c x^a y^b.
struct Term {
  int a, b;
  double c;
};

inline double polygon_integral(const std::vector<Point>& poly, const std::vector<Term>& f) {
  double s = 0.0;
  for (const Term& t : f) s += t.c * polygon_moment(poly, t.a, t.b);
  return s;
}

/// Central finite difference of a vector function; column c is d/dx_c.
inline Eigen::Matrix2d fd_jacobian(const std::function<Point(const Point&)>& f, const Point& x, double h = 1e-5) {
  Eigen::Matrix2d J;
  for (int c = 0; c < 2; ++c) {
    Point e = Point::Zero();
    e[c] = h;
    J.col(c) = (f(x + e) - f(x - e)) / (2 * h);
  }
  return J;
}

inline double fd_partial(const std::function<double(const Point&)>& f, const Point& x, int c, double h = 1e-5) {
  Point e = Point::Zero();
  e[c] = h;
  return (f(x + e) - f(x - e)) / (2 * h);
}

/// Test polygons: convex, skewed and non-convex star-shaped shapes.
inline std::vector<std::vector<Point>> sample_polygons() {
  return {
      {Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)},
      {Point(0, 0), Point(1, 0.1), Point(0.3, 0.9)},
      {Point(0.1, 0.0), Point(0.9, 0.2), Point(1.1, 0.8), Point(0.5, 1.2), Point(-0.1, 0.7)},
      {Point(0, 0), Point(2, 0), Point(2, 1), Point(1, 0.6), Point(0, 1)},
      {Point(0.2, 0.2), Point(0.3, 0.25), Point(0.35, 0.4), Point(0.25, 0.45), Point(0.15, 0.35)},
  };
}

inline Eigen::VectorXd random_coeffs(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::VectorXd c(n);
  for (int i = 0; i < n; ++i) c(i) = dist(rng);
  return c;
}

inline double relative_error(const Eigen::VectorXd& got, const Eigen::VectorXd& want) {
  const double n = want.norm();
  return n > 0.0 ? (got - want).norm() / n : got.norm();
}

}  // namespace oracle
