#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <unordered_map>

#include "vemix/mesh.hpp"

namespace vemix {

namespace {

constexpr double kMergeTolerance = 1e-10;

// Portable uniform draw in [0, 1); std::uniform_real_distribution is not
// reproducible across standard libraries.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool on_square_boundary(const Point& p) {
  constexpr double tol = 1e-12;
  return p.x() < tol || p.x() > 1.0 - tol || p.y() < tol || p.y() > 1.0 - tol;
}

bool is_square_corner(const Point& p) {
  constexpr double tol = 1e-12;
  const bool bx = p.x() < tol || p.x() > 1.0 - tol;
  const bool by = p.y() < tol || p.y() > 1.0 - tol;
  return bx && by;
}

PolygonalMesh quad_mesh(int n) {
  std::vector<Point> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vertices.emplace_back(double(i) / n, double(j) / n);

  std::vector<std::vector<int>> elements;
  elements.reserve(n * n);
  const auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      elements.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return PolygonalMesh(std::move(vertices), std::move(elements));
}

// Keeps the part of `poly` closer to p than to q.
std::vector<Point> clip_bisector(const std::vector<Point>& poly, const Point& p, const Point& q) {
  const Point normal = q - p;
  const double offset = normal.dot(0.5 * (p + q));
  const auto side = [&](const Point& x) { return normal.dot(x) - offset; };

  std::vector<Point> out;
  out.reserve(poly.size() + 1);
  const std::size_t m = poly.size();
  for (std::size_t i = 0; i < m; ++i) {
    const Point& a = poly[i];
    const Point& b = poly[(i + 1) % m];
    const double sa = side(a);
    const double sb = side(b);
    if (sa <= 0.0) out.push_back(a);
    if ((sa < 0.0 && sb > 0.0) || (sa > 0.0 && sb < 0.0)) {
      const double t = sa / (sa - sb);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

std::vector<Point> dedupe_loop(std::vector<Point> poly) {
  std::vector<Point> out;
  for (const Point& p : poly) {
    if (out.empty() || (p - out.back()).norm() > kMergeTolerance) out.push_back(p);
  }
  while (out.size() > 1 && (out.front() - out.back()).norm() <= kMergeTolerance) out.pop_back();
  return out;
}

// Voronoi cells of the seeds clipped to the unit square.
std::vector<std::vector<Point>> voronoi_cells(const std::vector<Point>& seeds) {
  const std::vector<Point> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  std::vector<std::vector<Point>> cells(seeds.size());
  std::vector<std::pair<double, int>> order(seeds.size());

  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t j = 0; j < seeds.size(); ++j) {
      order[j] = {(seeds[j] - seeds[i]).squaredNorm(), static_cast<int>(j)};
    }
    std::sort(order.begin(), order.end());

    std::vector<Point> cell = square;
    for (const auto& [d2, j] : order) {
      if (j == static_cast<int>(i)) continue;
      double reach = 0.0;
      for (const Point& v : cell) reach = std::max(reach, (v - seeds[i]).norm());
      // Seeds farther than twice the cell radius cannot cut the cell.
      if (std::sqrt(d2) > 2.0 * reach) break;
      cell = clip_bisector(cell, seeds[i], seeds[j]);
    }
    cells[i] = dedupe_loop(std::move(cell));
  }
  return cells;
}

Point loop_centroid(const std::vector<Point>& poly) {
  return polygon_geometry(poly).frame.centroid;
}

struct RawMesh {
  std::vector<Point> vertices;
  std::vector<std::vector<int>> elements;
};

// Identifies coincident cell corners to build a conforming vertex list.
RawMesh weld(const std::vector<std::vector<Point>>& cells) {
  RawMesh raw;
  std::unordered_map<std::int64_t, std::vector<int>> buckets;
  const double cell_size = 1e-7;
  const auto key = [&](std::int64_t ix, std::int64_t iy) { return ix * 73856093LL ^ iy * 19349663LL; };

  for (const auto& cell : cells) {
    std::vector<int> loop;
    for (const Point& p : cell) {
      const auto ix = static_cast<std::int64_t>(std::floor(p.x() / cell_size));
      const auto iy = static_cast<std::int64_t>(std::floor(p.y() / cell_size));
      int found = -1;
      for (int dx = -1; dx <= 1 && found < 0; ++dx) {
        for (int dy = -1; dy <= 1 && found < 0; ++dy) {
          auto it = buckets.find(key(ix + dx, iy + dy));
          if (it == buckets.end()) continue;
          for (int v : it->second) {
            if ((raw.vertices[v] - p).norm() < kMergeTolerance * 100) {
              found = v;
              break;
            }
          }
        }
      }
      if (found < 0) {
        found = static_cast<int>(raw.vertices.size());
        Point q = p;
        // Snap boundary coordinates exactly onto the square.
        for (int c = 0; c < 2; ++c) {
          if (std::abs(q(c)) < 1e-12) q(c) = 0.0;
          if (std::abs(q(c) - 1.0) < 1e-12) q(c) = 1.0;
        }
        raw.vertices.push_back(q);
        buckets[key(ix, iy)].push_back(found);
      }
      if (loop.empty() || loop.back() != found) loop.push_back(found);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    raw.elements.push_back(std::move(loop));
  }
  return raw;
}

std::vector<Point> loop_points(const RawMesh& raw, const std::vector<int>& loop) {
  std::vector<Point> out;
  out.reserve(loop.size());
  for (int v : loop) out.push_back(raw.vertices[v]);
  return out;
}

bool loop_is_valid(const RawMesh& raw, const std::vector<int>& loop, double min_rho_star) {
  if (loop.size() < 3) return false;
  const auto pts = loop_points(raw, loop);
  if (signed_area(pts) <= 0.0) return false;
  try {
    const ElementGeometry g = polygon_geometry(pts);
    return check_regularity(g).rho_star_shaped >= min_rho_star;
  } catch (const DegenerateElementError&) {
    return false;
  }
}

std::vector<std::vector<int>> incident_elements(const RawMesh& raw) {
  std::vector<std::vector<int>> inc(raw.vertices.size());
  for (int e = 0; e < static_cast<int>(raw.elements.size()); ++e)
    for (int v : raw.elements[e]) inc[v].push_back(e);
  return inc;
}

std::vector<int> collapse(const std::vector<int>& loop, int from, int to) {
  std::vector<int> out;
  for (int v : loop) {
    const int w = v == from ? to : v;
    if (out.empty() || out.back() != w) out.push_back(w);
  }
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

// Collapses edges shorter than threshold * h_E, shortest first.
void merge_short_edges(RawMesh& raw, double threshold) {
  std::vector<std::pair<int, int>> rejected;
  for (int pass = 0; pass < 10000; ++pass) {
    double best = threshold;
    std::pair<int, int> pick{-1, -1};
    for (const auto& loop : raw.elements) {
      const auto pts = loop_points(raw, loop);
      const double h = polygon_geometry(pts).frame.diameter;
      const int m = static_cast<int>(loop.size());
      for (int i = 0; i < m; ++i) {
        const std::pair<int, int> pair = std::minmax(loop[i], loop[(i + 1) % m]);
        const double ratio = (pts[i] - pts[(i + 1) % m]).norm() / h;
        if (ratio < best && std::find(rejected.begin(), rejected.end(), pair) == rejected.end()) {
          best = ratio;
          pick = pair;
        }
      }
    }
    if (pick.first < 0) return;

    auto [a, b] = pick;
    const Point pa = raw.vertices[a];
    const Point pb = raw.vertices[b];
    Point target = 0.5 * (pa + pb);
    const bool ba = on_square_boundary(pa);
    const bool bb = on_square_boundary(pb);
    if (is_square_corner(pa) || (ba && !bb)) {
      target = pa;
    } else if (is_square_corner(pb) || (bb && !ba)) {
      target = pb;
      std::swap(a, b);
    }

    RawMesh trial = raw;
    trial.vertices[a] = target;
    bool ok = true;
    for (auto& loop : trial.elements) {
      if (std::find(loop.begin(), loop.end(), b) == loop.end() &&
          std::find(loop.begin(), loop.end(), a) == loop.end()) {
        continue;
      }
      loop = collapse(loop, b, a);
      if (!loop_is_valid(trial, loop, 0.0)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      raw = std::move(trial);
    } else {
      rejected.push_back(pick);
    }
  }
}

RawMesh compact(const RawMesh& raw) {
  std::vector<int> remap(raw.vertices.size(), -1);
  RawMesh out;
  for (const auto& loop : raw.elements) {
    std::vector<int> mapped;
    for (int v : loop) {
      if (remap[v] < 0) {
        remap[v] = static_cast<int>(out.vertices.size());
        out.vertices.push_back(raw.vertices[v]);
      }
      mapped.push_back(remap[v]);
    }
    out.elements.push_back(std::move(mapped));
  }
  return out;
}

void perturb_interior_vertices(RawMesh& raw, double amplitude, std::mt19937_64& rng) {
  const auto incident = incident_elements(raw);
  for (int v = 0; v < static_cast<int>(raw.vertices.size()); ++v) {
    // Draw unconditionally so the stream does not depend on acceptance.
    const double theta = 2.0 * std::numbers::pi * uniform01(rng);
    const double radius = amplitude * uniform01(rng);
    const Point original = raw.vertices[v];
    if (on_square_boundary(original)) continue;

    const double wall = std::min({original.x(), 1.0 - original.x(), original.y(), 1.0 - original.y()});
    double r = std::min(radius, 0.4 * wall);
    for (int attempt = 0; attempt < 4; ++attempt, r *= 0.5) {
      raw.vertices[v] = original + r * Point(std::cos(theta), std::sin(theta));
      bool ok = true;
      for (int e : incident[v]) ok = ok && loop_is_valid(raw, raw.elements[e], 0.1);
      if (ok) break;
      raw.vertices[v] = original;
    }
  }
}

PolygonalMesh finish(RawMesh raw, double merge_threshold) {
  merge_short_edges(raw, merge_threshold);
  raw = compact(raw);
  return PolygonalMesh(std::move(raw.vertices), std::move(raw.elements));
}

PolygonalMesh hexa_mesh(int n, std::uint64_t seed, const MeshGeneratorOptions& options) {
  std::vector<Point> seeds;
  seeds.reserve(n * n);
  for (int j = 0; j < n; ++j) {
    const double shift = (j % 2 == 0) ? 0.25 : 0.75;
    for (int i = 0; i < n; ++i) seeds.emplace_back((i + shift) / n, (j + 0.5) / n);
  }
  RawMesh raw = weld(voronoi_cells(seeds));
  std::mt19937_64 rng(seed);
  perturb_interior_vertices(raw, options.hexa_perturbation / n, rng);
  return finish(std::move(raw), options.merge_threshold);
}

PolygonalMesh voro_mesh(int n, std::uint64_t seed, const MeshGeneratorOptions& options) {
  std::mt19937_64 rng(seed);
  std::vector<Point> seeds(n * n);
  for (Point& s : seeds) {
    const double x = uniform01(rng);
    const double y = uniform01(rng);
    s = Point(x, y);
  }
  auto cells = voronoi_cells(seeds);
  for (int it = 0; it < options.lloyd_iterations; ++it) {
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = loop_centroid(cells[i]);
    cells = voronoi_cells(seeds);
  }
  return finish(weld(cells), options.merge_threshold);
}

}  // namespace

PolygonalMesh generate_mesh(MeshFamily family, int n, std::uint64_t seed,
                            const MeshGeneratorOptions& options) {
  if (n < 2) throw InvalidArgumentError("mesh resolution must be >= 2, got " + std::to_string(n));
  switch (family) {
    case MeshFamily::quad: return quad_mesh(n);
    case MeshFamily::hexa: return hexa_mesh(n, seed, options);
    case MeshFamily::voro: return voro_mesh(n, seed, options);
  }
  throw InvalidArgumentError("unknown mesh family");
}

}  // namespace vemix
