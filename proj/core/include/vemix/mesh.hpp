#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "vemix/poly.hpp"

namespace vemix {

struct MeshEdge {
  int v0;  ///< lower global vertex index
  int v1;  ///< higher global vertex index
  int left = -1;   ///< element traversing the edge from v0 to v1 (or -1)
  int right = -1;  ///< element traversing the edge from v1 to v0 (or -1)

  bool on_boundary() const noexcept { return left < 0 || right < 0; }
};

/// Conforming polygonal mesh with counterclockwise element loops.
///
/// Construction validates the invariants (simple CCW polygons, every edge
/// shared by at most two elements with opposite orientation) and builds the
/// edge topology. A constructed mesh is immutable.
class PolygonalMesh {
 public:
  PolygonalMesh() = default;
  PolygonalMesh(std::vector<Point> vertices, std::vector<std::vector<int>> elements);

  std::size_t num_vertices() const noexcept { return vertices_.size(); }
  std::size_t num_elements() const noexcept { return elements_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const Point& vertex(int v) const { return vertices_.at(v); }
  std::span<const int> element(int e) const { return elements_.at(e); }
  const std::vector<std::vector<int>>& elements() const noexcept { return elements_; }

  const std::vector<MeshEdge>& edges() const noexcept { return edges_; }
  /// Global edge id of the local edge i (vertex i -> vertex i+1) of element e.
  int element_edge(int e, int i) const { return element_edges_.at(e).at(i); }

  bool is_boundary_vertex(int v) const { return boundary_vertex_.at(v); }

  std::vector<Point> element_vertices(int e) const;

 private:
  std::vector<Point> vertices_;
  std::vector<std::vector<int>> elements_;
  std::vector<MeshEdge> edges_;
  std::vector<std::vector<int>> element_edges_;
  std::vector<bool> boundary_vertex_;
};

/// Geometric data of one polygon. Edge i runs from vertex i to vertex i+1.
struct ElementGeometry {
  ElementFrame frame;
  std::vector<Point> vertices;
  std::vector<Point> normals;  ///< outward unit normals
  std::vector<double> lengths;

  int num_vertices() const noexcept { return static_cast<int>(vertices.size()); }
  double perimeter() const;
};

/// Geometry of an arbitrary CCW polygon. Throws DegenerateElementError when
/// the signed area is not positive.
ElementGeometry polygon_geometry(std::span<const Point> polygon);
ElementGeometry element_geometry(const PolygonalMesh& mesh, int element);

/// Signed shoelace area (positive for CCW loops).
double signed_area(std::span<const Point> polygon);

enum class MeshFamily { quad, hexa, voro };

MeshFamily parse_mesh_family(const std::string& name);
std::string to_string(MeshFamily family);

struct MeshGeneratorOptions {
  /// Maximum vertex displacement of the hexa family, as a fraction of 1/n.
  double hexa_perturbation = 0.2;
  int lloyd_iterations = 3;
  /// Vertex pairs closer than this fraction of h_E are merged.
  double merge_threshold = 0.05;
};

/// Meshes of the unit square; deterministic in (family, n, seed).
PolygonalMesh generate_mesh(MeshFamily family, int n, std::uint64_t seed,
                            const MeshGeneratorOptions& options = {});

/// Mean of the element diameters.
double mesh_size(const PolygonalMesh& mesh);

struct RegularityReport {
  /// rho such that the ball of radius rho*h_E around the centroid lies in the
  /// polygon's kernel (0 when the centroid is outside the kernel).
  double rho_star_shaped = 0.0;
  /// Minimum distance between two vertices divided by h_E.
  double rho_edge = 0.0;

  bool passes(double rho) const noexcept { return rho_star_shaped >= rho && rho_edge >= rho; }
};

RegularityReport check_regularity(const ElementGeometry& geometry);
std::vector<RegularityReport> check_regularity(const PolygonalMesh& mesh);
bool mesh_passes_regularity(const PolygonalMesh& mesh, double rho);

// ASCII format:
//   npoints ncells
//   x y                    (npoints lines)
//   m i_1 ... i_m          (ncells lines, 0-based CCW vertex indices)
// Lines starting with '#' are comments.
PolygonalMesh read_mesh(std::istream& in);
PolygonalMesh read_mesh(const std::string& path);
void write_mesh(const PolygonalMesh& mesh, std::ostream& out);
void write_mesh(const PolygonalMesh& mesh, const std::string& path);

}  // namespace vemix
