#include "vemix/space.hpp"

#include <limits>
#include <string>

namespace vemix {

LocalSpace::LocalSpace(int k, const ElementGeometry& geometry)
    : k_(k), nv_(geometry.num_vertices()) {
  if (k < 2) throw InvalidArgumentError("unsupported degree k = " + std::to_string(k) + " (need k >= 2)");
  lobatto_ = gauss_lobatto(k + 1);
  nodes_.reserve(num_nodes());
  for (const Point& v : geometry.vertices) nodes_.push_back(v);
  for (int e = 0; e < nv_; ++e) {
    const Point& a = geometry.vertices[e];
    const Point& b = geometry.vertices[(e + 1) % nv_];
    for (int j = 1; j < k; ++j) nodes_.push_back(a + 0.5 * (lobatto_.nodes[j] + 1.0) * (b - a));
  }
}

std::vector<int> LocalSpace::edge_nodes(int e) const {
  std::vector<int> out;
  out.reserve(k_ + 1);
  out.push_back(e);
  for (int j = 0; j < k_ - 1; ++j) out.push_back(nv_ + e * (k_ - 1) + j);
  out.push_back((e + 1) % nv_);
  return out;
}

LocalSpace build_local_space(int k, const ElementGeometry& geometry) { return LocalSpace(k, geometry); }

Eigen::VectorXd interpolate(const VectorField& v, const LocalSpace& space,
                            const ElementGeometry& geometry, const PolygonRule& rule) {
  const int k = space.k();
  const ElementFrame& frame = geometry.frame;
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(space.ndof());
  for (int n = 0; n < space.num_nodes(); ++n) {
    const Point val = v.value(space.nodes()[n]);
    dofs(2 * n) = val.x();
    dofs(2 * n + 1) = val.y();
  }

  const int np = space.num_perp_dofs();
  const int nd = poly_dim(k - 1);
  Eigen::VectorXd perp = Eigen::VectorXd::Zero(np);
  Eigen::VectorXd div = Eigen::VectorXd::Zero(nd);
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point& x = rule.points[q];
    const Eigen::VectorXd m = eval_monomials(k - 1, frame, x);
    if (np > 0) {
      const Point s = frame.scaled(x);
      const double vp = v.value(x).dot(Point(s.y(), -s.x()));
      perp += rule.weights[q] * vp * m.head(np);
    }
    div += rule.weights[q] * v.divergence(x) * m;
  }
  dofs.segment(space.perp_offset(), np) = perp / frame.area;
  dofs.segment(space.div_offset(), nd - 1) = div.tail(nd - 1) * frame.diameter / frame.area;
  return dofs;
}

GlobalDoFMap::GlobalDoFMap(const PolygonalMesh& mesh, int k) : k_(k) {
  if (k < 2) throw InvalidArgumentError("unsupported degree k = " + std::to_string(k) + " (need k >= 2)");
  const int nv = static_cast<int>(mesh.num_vertices());
  const int ne = static_cast<int>(mesh.num_edges());
  const int nel = static_cast<int>(mesh.num_elements());
  const int interior = poly_dim(k - 3) + poly_dim(k - 1) - 1;
  const int edge_offset = 2 * nv;
  const int private_offset = edge_offset + 2 * ne * (k - 1);
  num_velocity_ = private_offset + nel * interior;
  num_pressure_ = nel * poly_dim(k - 1);

  const QuadratureRule1D lobatto = gauss_lobatto(k + 1);
  points_.assign(num_velocity_, Point::Constant(std::numeric_limits<double>::quiet_NaN()));
  component_.assign(num_velocity_, -1);
  boundary_.assign(num_velocity_, false);

  for (int v = 0; v < nv; ++v) {
    for (int c = 0; c < 2; ++c) {
      points_[2 * v + c] = mesh.vertex(v);
      component_[2 * v + c] = c;
      boundary_[2 * v + c] = mesh.is_boundary_vertex(v);
    }
  }
  for (int id = 0; id < ne; ++id) {
    const MeshEdge& edge = mesh.edges()[id];
    const Point& a = mesh.vertex(edge.v0);
    const Point& b = mesh.vertex(edge.v1);
    for (int j = 0; j < k - 1; ++j) {
      const Point x = a + 0.5 * (lobatto.nodes[j + 1] + 1.0) * (b - a);
      for (int c = 0; c < 2; ++c) {
        const int g = edge_offset + 2 * (id * (k - 1) + j) + c;
        points_[g] = x;
        component_[g] = c;
        boundary_[g] = edge.on_boundary();
      }
    }
  }

  local_to_global_.resize(nel);
  for (int e = 0; e < nel; ++e) {
    const auto loop = mesh.element(e);
    const int m = static_cast<int>(loop.size());
    std::vector<int>& map = local_to_global_[e];
    map.resize(local_ndof(k, m));
    for (int v = 0; v < m; ++v) {
      for (int c = 0; c < 2; ++c) map[2 * v + c] = 2 * loop[v] + c;
    }
    for (int i = 0; i < m; ++i) {
      const int id = mesh.element_edge(e, i);
      const bool forward = loop[i] == mesh.edges()[id].v0;
      for (int j = 0; j < k - 1; ++j) {
        const int gj = forward ? j : k - 2 - j;
        for (int c = 0; c < 2; ++c) {
          map[2 * m + 2 * (i * (k - 1) + j) + c] = edge_offset + 2 * (id * (k - 1) + gj) + c;
        }
      }
    }
    for (int i = 0; i < interior; ++i) map[2 * m * k + i] = private_offset + e * interior + i;
  }
}

GlobalDoFMap build_global_map(const PolygonalMesh& mesh, int k) { return GlobalDoFMap(mesh, k); }

}  // namespace vemix
