#pragma once

// Local and global velocity/pressure spaces.
//
// Local DoF ordering of an element with n_E vertices:
//   [0, 2 n_E)                      vertex values, (x, y) per vertex, CCW
//   [2 n_E, 2 n_E k)                edge values at the k-1 interior Gauss-Lobatto
//                                   points of each edge, edges CCW, points in
//                                   edge direction, (x, y) per point
//   next pi_{k-3} entries           (1/|E|) int v . m_perp m_b
//   next pi_{k-1} - 1 entries       (h_E/|E|) int div(v) m_l, l = 1 .. pi_{k-1}-1
//                                   (zero-based monomial positions)
//
// Boundary points ("nodes") are numbered vertices first, then edge interior
// points, so the boundary DoF of node n and component c is 2 n + c.

#include <functional>
#include <vector>

#include "vemix/mesh.hpp"
#include "vemix/quadrature.hpp"

namespace vemix {

class LocalSpace {
 public:
  LocalSpace() = default;
  LocalSpace(int k, const ElementGeometry& geometry);

  int k() const noexcept { return k_; }
  int num_vertices() const noexcept { return nv_; }

  int num_nodes() const noexcept { return nv_ * k_; }
  int num_boundary_dofs() const noexcept { return 2 * num_nodes(); }
  int num_perp_dofs() const noexcept { return poly_dim(k_ - 3); }
  int num_div_dofs() const noexcept { return poly_dim(k_ - 1) - 1; }
  int ndof() const noexcept { return num_boundary_dofs() + num_perp_dofs() + num_div_dofs(); }

  int vertex_dof(int v, int c) const noexcept { return 2 * v + c; }
  int edge_dof(int e, int j, int c) const noexcept { return 2 * nv_ + 2 * (e * (k_ - 1) + j) + c; }
  /// DoF of the moment against m_perp m_b, b = zero-based monomial position.
  int perp_dof(int b) const noexcept { return num_boundary_dofs() + b; }
  /// DoF of the divergence moment against m_l, 1 <= l < pi_{k-1}.
  int div_dof(int l) const noexcept { return num_boundary_dofs() + num_perp_dofs() + l - 1; }
  int perp_offset() const noexcept { return num_boundary_dofs(); }
  int div_offset() const noexcept { return num_boundary_dofs() + num_perp_dofs(); }

  /// Boundary point of each node.
  const std::vector<Point>& nodes() const noexcept { return nodes_; }
  /// The k+1 nodes of edge e from vertex e to vertex e+1.
  std::vector<int> edge_nodes(int e) const;

  /// (k+1)-point Gauss-Lobatto rule on [-1, 1].
  const QuadratureRule1D& lobatto() const noexcept { return lobatto_; }

 private:
  int k_ = 0;
  int nv_ = 0;
  QuadratureRule1D lobatto_;
  std::vector<Point> nodes_;
};

/// Throws InvalidArgumentError for k < 2.
LocalSpace build_local_space(int k, const ElementGeometry& geometry);

/// NDoF = 2 n_E k + (k-1)(k-2)/2 + k(k+1)/2 - 1.
constexpr int local_ndof(int k, int nv) noexcept {
  return 2 * nv * k + poly_dim(k - 3) + poly_dim(k - 1) - 1;
}

/// Smooth vector field known pointwise together with its divergence.
struct VectorField {
  std::function<Point(const Point&)> value;
  std::function<double(const Point&)> divergence;
};

/// DoF values of v. Moments use `rule`, which is exact only for polynomial v.
Eigen::VectorXd interpolate(const VectorField& v, const LocalSpace& space,
                            const ElementGeometry& geometry, const PolygonRule& rule);

class GlobalDoFMap {
 public:
  GlobalDoFMap() = default;
  GlobalDoFMap(const PolygonalMesh& mesh, int k);

  int k() const noexcept { return k_; }
  int num_velocity_dofs() const noexcept { return num_velocity_; }
  int num_pressure_dofs() const noexcept { return num_pressure_; }
  int pressure_per_element() const noexcept { return poly_dim(k_ - 1); }
  int pressure_offset(int e) const noexcept { return e * pressure_per_element(); }

  const std::vector<int>& local_to_global(int e) const { return local_to_global_.at(e); }
  bool is_boundary(int dof) const { return boundary_.at(dof); }
  const std::vector<bool>& boundary_mask() const noexcept { return boundary_; }

  /// Location and component of vertex/edge DoFs; component is -1 for moments.
  const Point& dof_point(int dof) const { return points_.at(dof); }
  int dof_component(int dof) const { return component_.at(dof); }

 private:
  int k_ = 0;
  int num_velocity_ = 0;
  int num_pressure_ = 0;
  std::vector<std::vector<int>> local_to_global_;
  std::vector<bool> boundary_;
  std::vector<Point> points_;
  std::vector<int> component_;
};

GlobalDoFMap build_global_map(const PolygonalMesh& mesh, int k);

}  // namespace vemix
