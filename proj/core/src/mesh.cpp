#include "vemix/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace vemix {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_cross(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
  const double d1 = cross(p2 - p1, q1 - p1);
  const double d2 = cross(p2 - p1, q2 - p1);
  const double d3 = cross(q2 - q1, p1 - q1);
  const double d4 = cross(q2 - q1, p2 - q1);
  return ((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0));
}

bool is_simple(std::span<const Point> poly) {
  const int m = static_cast<int>(poly.size());
  for (int i = 0; i < m; ++i) {
    for (int j = i + 2; j < m; ++j) {
      if (i == 0 && j == m - 1) continue;
      if (segments_cross(poly[i], poly[(i + 1) % m], poly[j], poly[(j + 1) % m])) return false;
    }
  }
  return true;
}

}  // namespace

double signed_area(std::span<const Point> polygon) {
  double a = 0.0;
  const std::size_t m = polygon.size();
  for (std::size_t i = 0; i < m; ++i) a += cross(polygon[i], polygon[(i + 1) % m]);
  return 0.5 * a;
}

PolygonalMesh::PolygonalMesh(std::vector<Point> vertices, std::vector<std::vector<int>> elements)
    : vertices_(std::move(vertices)), elements_(std::move(elements)) {
  const int nv = static_cast<int>(vertices_.size());
  std::map<std::pair<int, int>, int> edge_ids;
  element_edges_.resize(elements_.size());

  for (int e = 0; e < static_cast<int>(elements_.size()); ++e) {
    const auto& loop = elements_[e];
    const std::string where = "element " + std::to_string(e);
    if (loop.size() < 3) throw InvalidArgumentError(where + " has fewer than 3 vertices");
    for (int v : loop) {
      if (v < 0 || v >= nv) throw InvalidArgumentError(where + " references vertex out of range");
    }
    const std::vector<Point> poly = element_vertices(e);
    if (signed_area(poly) <= 0.0) throw InvalidArgumentError(where + " is not counterclockwise");
    if (!is_simple(poly)) throw InvalidArgumentError(where + " is not a simple polygon");

    const int m = static_cast<int>(loop.size());
    element_edges_[e].resize(m);
    for (int i = 0; i < m; ++i) {
      const int a = loop[i];
      const int b = loop[(i + 1) % m];
      if (a == b) throw InvalidArgumentError(where + " repeats a vertex");
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_ids.try_emplace(key, static_cast<int>(edges_.size()));
      if (inserted) edges_.push_back({key.first, key.second});
      MeshEdge& edge = edges_[it->second];
      int& slot = a < b ? edge.left : edge.right;
      if (slot >= 0) {
        throw InvalidArgumentError(where + " repeats an edge orientation (non-conforming mesh)");
      }
      slot = e;
      element_edges_[e][i] = it->second;
    }
  }

  boundary_vertex_.assign(vertices_.size(), false);
  for (const MeshEdge& edge : edges_) {
    if (edge.on_boundary()) boundary_vertex_[edge.v0] = boundary_vertex_[edge.v1] = true;
  }
}

std::vector<Point> PolygonalMesh::element_vertices(int e) const {
  std::vector<Point> out;
  out.reserve(elements_.at(e).size());
  for (int v : elements_.at(e)) out.push_back(vertices_.at(v));
  return out;
}

double ElementGeometry::perimeter() const {
  return std::accumulate(lengths.begin(), lengths.end(), 0.0);
}

ElementGeometry polygon_geometry(std::span<const Point> polygon) {
  const int m = static_cast<int>(polygon.size());
  if (m < 3) throw DegenerateElementError("polygon with fewer than 3 vertices");

  const double area = signed_area(polygon);
  if (!(area > 0.0)) throw DegenerateElementError("polygon has non-positive signed area");

  Point centroid = Point::Zero();
  for (int i = 0; i < m; ++i) {
    const Point& a = polygon[i];
    const Point& b = polygon[(i + 1) % m];
    centroid += (a + b) * cross(a, b);
  }
  centroid /= 6.0 * area;

  double diameter = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) diameter = std::max(diameter, (polygon[i] - polygon[j]).norm());

  ElementGeometry g;
  g.frame = ElementFrame{centroid, diameter, area};
  g.vertices.assign(polygon.begin(), polygon.end());
  g.normals.resize(m);
  g.lengths.resize(m);
  for (int i = 0; i < m; ++i) {
    const Point t = polygon[(i + 1) % m] - polygon[i];
    g.lengths[i] = t.norm();
    if (g.lengths[i] == 0.0) throw DegenerateElementError("polygon has a zero-length edge");
    g.normals[i] = Point(t.y(), -t.x()) / g.lengths[i];
  }
  return g;
}

ElementGeometry element_geometry(const PolygonalMesh& mesh, int element) {
  if (element < 0 || element >= static_cast<int>(mesh.num_elements())) {
    throw InvalidIndexError("element id " + std::to_string(element) + " out of range");
  }
  return polygon_geometry(mesh.element_vertices(element));
}

MeshFamily parse_mesh_family(const std::string& name) {
  if (name == "quad") return MeshFamily::quad;
  if (name == "hexa") return MeshFamily::hexa;
  if (name == "voro") return MeshFamily::voro;
  throw InvalidArgumentError("unknown mesh family '" + name + "'");
}

std::string to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::quad: return "quad";
    case MeshFamily::hexa: return "hexa";
    case MeshFamily::voro: return "voro";
  }
  return "unknown";
}

double mesh_size(const PolygonalMesh& mesh) {
  if (mesh.num_elements() == 0) throw InvalidArgumentError("mesh_size of an empty mesh");
  double sum = 0.0;
  for (int e = 0; e < static_cast<int>(mesh.num_elements()); ++e) {
    sum += element_geometry(mesh, e).frame.diameter;
  }
  return sum / static_cast<double>(mesh.num_elements());
}

RegularityReport check_regularity(const ElementGeometry& g) {
  const double h = g.frame.diameter;
  const int m = g.num_vertices();

  // The kernel of a simple polygon is the intersection of the inner
  // half-planes of its edges, so the centroid ball lies in the kernel iff its
  // radius does not exceed the distance to every supporting line.
  double dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    dist = std::min(dist, (g.vertices[i] - g.frame.centroid).dot(g.normals[i]));
  }

  double min_pair = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) min_pair = std::min(min_pair, (g.vertices[i] - g.vertices[j]).norm());

  RegularityReport r;
  r.rho_star_shaped = std::clamp(dist / h, 0.0, 1.0);
  r.rho_edge = std::clamp(min_pair / h, 0.0, 1.0);
  return r;
}

std::vector<RegularityReport> check_regularity(const PolygonalMesh& mesh) {
  std::vector<RegularityReport> out;
  out.reserve(mesh.num_elements());
  for (int e = 0; e < static_cast<int>(mesh.num_elements()); ++e) {
    out.push_back(check_regularity(element_geometry(mesh, e)));
  }
  return out;
}

bool mesh_passes_regularity(const PolygonalMesh& mesh, double rho) {
  const auto reports = check_regularity(mesh);
  return std::all_of(reports.begin(), reports.end(), [rho](const auto& r) { return r.passes(rho); });
}

}  // namespace vemix
