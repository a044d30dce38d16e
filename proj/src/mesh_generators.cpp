#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <unordered_map>

#include "pwvem/mesh.hpp"

namespace pwvem {

PolygonalMesh make_structured_triangular(int n) {
  if (n < 1) throw InvalidArgument("make_structured_triangular: n must be >= 1");
  std::vector<Vec2> vertices;
  vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vertices.emplace_back(double(i) / n, double(j) / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return PolygonalMesh(std::move(vertices), std::move(cells));
}

PolygonalMesh make_chevron(int n) {
  if (n < 1) throw InvalidArgument("make_chevron: n must be >= 1");
  const double kink = 0.3 / n;
  std::vector<Vec2> vertices;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) vertices.emplace_back(double(i) / n, double(j) / n);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  // midpoint vertex of the horizontal edge (i, j)-(i+1, j), interior rows only
  std::vector<int> mid((n + 1) * n, -1);
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mid[j * n + i] = static_cast<int>(vertices.size());
      vertices.emplace_back((i + 0.5) / n, double(j) / n + kink);
    }
  }
  std::vector<std::vector<int>> cells;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      std::vector<int> cell{id(i, j)};
      if (j > 0) cell.push_back(mid[j * n + i]);
      cell.push_back(id(i + 1, j));
      cell.push_back(id(i + 1, j + 1));
      if (j + 1 < n) cell.push_back(mid[(j + 1) * n + i]);
      cell.push_back(id(i, j + 1));
      cells.push_back(std::move(cell));
    }
  }
  return PolygonalMesh(std::move(vertices), std::move(cells));
}

namespace {

using Polygon = std::vector<Vec2>;

// Keep the part of a convex polygon with normal . x <= offset.
Polygon clip_half_plane(const Polygon& poly, const Vec2& normal, double offset) {
  Polygon out;
  const std::size_t n = poly.size();
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % n];
    const double da = normal.dot(a) - offset;
    const double db = normal.dot(b) - offset;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      const double t = da / (da - db);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

Polygon voronoi_cell(const std::vector<Vec2>& sites, std::size_t i) {
  Polygon cell{Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  const Vec2& p = sites[i];
  // Process neighbors nearest-first; stop once no remaining bisector can
  // cut the current cell.
  std::vector<std::pair<double, std::size_t>> order;
  order.reserve(sites.size());
  for (std::size_t j = 0; j < sites.size(); ++j)
    if (j != i) order.emplace_back((sites[j] - p).squaredNorm(), j);
  std::sort(order.begin(), order.end());
  for (const auto& [d2, j] : order) {
    double r2 = 0.0;
    for (const auto& v : cell) r2 = std::max(r2, (v - p).squaredNorm());
    if (d2 > 4.0 * r2) break;
    const Vec2& q = sites[j];
    const Vec2 normal = q - p;
    cell = clip_half_plane(cell, normal, normal.dot(0.5 * (p + q)));
    if (cell.size() < 3) break;
  }
  return cell;
}

Vec2 polygon_centroid(const Polygon& poly) {
  double a2 = 0.0;
  Vec2 c = Vec2::Zero();
  const Vec2 o = poly[0];
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2 p = poly[i] - o, q = poly[(i + 1) % poly.size()] - o;
    const double w = cross(p, q);
    a2 += w;
    c += w * (p + q);
  }
  return o + c / (3.0 * a2);
}

// Merge clipped cells into a conforming indexed mesh, identifying vertices
// closer than `tol`.
PolygonalMesh assemble_cells(const std::vector<Polygon>& polys, double tol) {
  std::vector<Vec2> vertices;
  std::unordered_map<long long, std::vector<int>> buckets;
  const double bin = 16.0 * tol;
  auto key = [](long long ix, long long iy) { return ix * 1000003LL + iy; };
  auto find_or_add = [&](const Vec2& x) {
    const long long ix = static_cast<long long>(std::floor(x.x() / bin));
    const long long iy = static_cast<long long>(std::floor(x.y() / bin));
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy) {
        auto it = buckets.find(key(ix + dx, iy + dy));
        if (it == buckets.end()) continue;
        for (int v : it->second)
          if ((vertices[v] - x).norm() < tol) return v;
      }
    const int v = static_cast<int>(vertices.size());
    vertices.push_back(x);
    buckets[key(ix, iy)].push_back(v);
    return v;
  };
  std::vector<std::vector<int>> cells;
  cells.reserve(polys.size());
  for (const auto& poly : polys) {
    std::vector<int> cell;
    for (const auto& x : poly) {
      const int v = find_or_add(x);
      if (cell.empty() || cell.back() != v) cell.push_back(v);
    }
    while (cell.size() > 1 && cell.front() == cell.back()) cell.pop_back();
    if (cell.size() < 3) throw MeshError("degenerate Voronoi cell");
    cells.push_back(std::move(cell));
  }
  return PolygonalMesh(std::move(vertices), std::move(cells));
}

}  // namespace

PolygonalMesh make_voronoi(int n_cells, unsigned long long seed, int lloyd_iters) {
  if (n_cells < 4) throw InvalidArgument("make_voronoi: n_cells must be >= 4");
  if (lloyd_iters < 0) throw InvalidArgument("make_voronoi: lloyd_iters must be >= 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vec2> sites(n_cells);
  for (auto& s : sites) {
    const double x = unit(rng);
    const double y = unit(rng);
    s = Vec2(x, y);
  }

  constexpr int kMaxAttempts = 5;
  std::string last_error;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    if (attempt > 0) {
      // perturb generators to escape a degenerate configuration
      std::normal_distribution<double> jitter(0.0, 1e-6);
      for (auto& s : sites) {
        s += Vec2(jitter(rng), jitter(rng));
        s = s.cwiseMax(1e-9).cwiseMin(1.0 - 1e-9);
      }
    }
    std::vector<Vec2> current = sites;
    bool duplicate = false;
    for (std::size_t i = 0; i < current.size() && !duplicate; ++i)
      for (std::size_t j = i + 1; j < current.size(); ++j)
        if ((current[i] - current[j]).norm() < 1e-12) {
          duplicate = true;
          break;
        }
    if (duplicate) {
      last_error = "duplicate generators";
      continue;
    }
    std::vector<Polygon> polys(current.size());
    bool degenerate = false;
    for (int it = 0; it <= lloyd_iters && !degenerate; ++it) {
      for (std::size_t i = 0; i < current.size(); ++i) {
        polys[i] = voronoi_cell(current, i);
        if (polys[i].size() < 3) degenerate = true;
      }
      if (it < lloyd_iters && !degenerate)
        for (std::size_t i = 0; i < current.size(); ++i) current[i] = polygon_centroid(polys[i]);
    }
    if (degenerate) {
      last_error = "empty Voronoi cell";
      continue;
    }
    try {
      PolygonalMesh mesh = assemble_cells(polys, 1e-10);
      if (std::abs(mesh.total_area() - 1.0) > 1e-12) {
        last_error = "cells do not tile the unit square";
        continue;
      }
      return mesh;
    } catch (const MeshError& e) {
      last_error = e.what();
    }
  }
  throw MeshError("make_voronoi: persistent degenerate configuration: " + last_error);
}

namespace {

std::vector<Vec2> scaled_about_origin(std::vector<Vec2> poly, double diameter) {
  double diam = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i)
    for (std::size_t j = i + 1; j < poly.size(); ++j) diam = std::max(diam, (poly[i] - poly[j]).norm());
  for (auto& v : poly) v *= diameter / diam;
  return poly;
}

// n sorted angles in [0, 2 pi) with every gap at least half the mean gap
std::vector<double> spread_angles(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double mean = 2.0 * kPi / n;
  std::vector<double> angles(n);
  const double start = 2.0 * kPi * unit(rng);
  double t = start;
  for (int i = 0; i < n; ++i) {
    angles[i] = t;
    t += mean * (0.5 + unit(rng));
  }
  // rescale so the last gap closes the circle with the same rule
  const double total = t - start;
  for (auto& a : angles) a = start + (a - start) * 2.0 * kPi / total;
  return angles;
}

}  // namespace

std::vector<Vec2> random_convex_polygon(std::mt19937_64& rng, int n_vertices, double diameter) {
  if (n_vertices < 3) throw InvalidArgument("random_convex_polygon: need at least 3 vertices");
  if (!(diameter > 0.0)) throw InvalidArgument("random_convex_polygon: diameter must be positive");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // points on a random ellipse are in convex position
  const double aspect = 0.5 + 0.5 * unit(rng);
  const double rot = 2.0 * kPi * unit(rng);
  const Vec2 shift(unit(rng), unit(rng));
  std::vector<Vec2> poly;
  for (double a : spread_angles(rng, n_vertices)) {
    const Vec2 e(std::cos(a), aspect * std::sin(a));
    poly.emplace_back(std::cos(rot) * e.x() - std::sin(rot) * e.y(),
                      std::sin(rot) * e.x() + std::cos(rot) * e.y());
  }
  poly = scaled_about_origin(std::move(poly), diameter);
  for (auto& v : poly) v += shift;
  return poly;
}

std::vector<Vec2> random_nonconvex_polygon(std::mt19937_64& rng, int n_vertices, double diameter) {
  if (n_vertices < 6) throw InvalidArgument("random_nonconvex_polygon: need at least 6 vertices");
  if (!(diameter > 0.0)) throw InvalidArgument("random_nonconvex_polygon: diameter must be positive");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Vec2 shift(unit(rng), unit(rng));
  std::vector<Vec2> poly;
  const auto angles = spread_angles(rng, n_vertices);
  for (int i = 0; i < n_vertices; ++i) {
    // odd vertices pulled inside the chord of their neighbours -> reflex
    double r = 1.0;
    if (i % 2 == 1) {
      const double next = (i + 1 < n_vertices) ? angles[i + 1] : angles[0] + 2.0 * kPi;
      const double half = 0.5 * (next - angles[i - 1]);
      r = std::max(0.15, (0.5 + 0.3 * unit(rng)) * std::cos(half));
    }
    poly.emplace_back(r * std::cos(angles[i]), r * std::sin(angles[i]));
  }
  poly = scaled_about_origin(std::move(poly), diameter);
  for (auto& v : poly) v += shift;
  if (is_convex(poly)) throw MeshError("random_nonconvex_polygon: produced a convex polygon");
  return poly;
}

}  // namespace pwvem
