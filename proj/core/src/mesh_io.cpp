#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "vemix/mesh.hpp"

namespace vemix {

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-blank, non-comment line; false at end of input.
  bool next(std::istringstream& out) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      out.clear();
      out.str(line);
      return true;
    }
    return false;
  }

  int line() const noexcept { return number_; }

 private:
  std::istream& in_;
  int number_ = 0;
};

void expect_end(std::istringstream& ss, int line) {
  std::string extra;
  if (ss >> extra) throw ParseError("unexpected trailing token '" + extra + "'", line);
}

}  // namespace

PolygonalMesh read_mesh(std::istream& in) {
  LineReader reader(in);
  std::istringstream ss;

  if (!reader.next(ss)) throw ParseError("missing header 'npoints ncells'", reader.line());
  long long npoints = -1;
  long long ncells = -1;
  if (!(ss >> npoints >> ncells) || npoints < 0 || ncells < 0) {
    throw ParseError("malformed header, expected 'npoints ncells'", reader.line());
  }
  expect_end(ss, reader.line());

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(npoints));
  for (long long i = 0; i < npoints; ++i) {
    if (!reader.next(ss)) throw ParseError("expected " + std::to_string(npoints) + " points", reader.line());
    double x = 0;
    double y = 0;
    if (!(ss >> x >> y)) throw ParseError("malformed point, expected 'x y'", reader.line());
    expect_end(ss, reader.line());
    vertices.emplace_back(x, y);
  }

  std::vector<std::vector<int>> elements;
  elements.reserve(static_cast<std::size_t>(ncells));
  for (long long c = 0; c < ncells; ++c) {
    if (!reader.next(ss)) throw ParseError("expected " + std::to_string(ncells) + " cells", reader.line());
    long long m = 0;
    if (!(ss >> m) || m < 3) throw ParseError("cell must list at least 3 vertices", reader.line());
    std::vector<int> loop;
    std::vector<Point> poly;
    for (long long i = 0; i < m; ++i) {
      long long v = -1;
      if (!(ss >> v)) throw ParseError("cell lists fewer vertices than declared", reader.line());
      if (v < 0 || v >= npoints) {
        throw ParseError("vertex index " + std::to_string(v) + " out of range [0, " +
                             std::to_string(npoints) + ")",
                         reader.line());
      }
      loop.push_back(static_cast<int>(v));
      poly.push_back(vertices[static_cast<std::size_t>(v)]);
    }
    expect_end(ss, reader.line());
    if (signed_area(poly) <= 0.0) throw ParseError("cell is not counterclockwise", reader.line());
    elements.push_back(std::move(loop));
  }

  if (reader.next(ss)) throw ParseError("unexpected content after the last cell", reader.line());

  try {
    return PolygonalMesh(std::move(vertices), std::move(elements));
  } catch (const InvalidArgumentError& e) {
    throw ParseError(e.what(), reader.line());
  }
}

PolygonalMesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("cannot open mesh file '" + path + "'");
  return read_mesh(in);
}

void write_mesh(const PolygonalMesh& mesh, std::ostream& out) {
  out << mesh.num_vertices() << ' ' << mesh.num_elements() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const Point& p : mesh.vertices()) out << p.x() << ' ' << p.y() << '\n';
  for (const auto& loop : mesh.elements()) {
    out << loop.size();
    for (int v : loop) out << ' ' << v;
    out << '\n';
  }
}

void write_mesh(const PolygonalMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgumentError("cannot write mesh file '" + path + "'");
  write_mesh(mesh, out);
}

}  // namespace vemix
