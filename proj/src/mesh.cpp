#include "pwvem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

namespace pwvem {

double signed_area(std::span<const Vec2> polygon) {
  double a = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(polygon[i], polygon[(i + 1) % n]);
  return 0.5 * a;
}

bool is_convex(std::span<const Vec2> polygon) {
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    const Vec2& c = polygon[(i + 2) % n];
    const double scale = std::max((b - a).squaredNorm(), (c - b).squaredNorm());
    if (cross(b - a, c - b) < -1e-12 * scale) return false;
  }
  return true;
}

PolygonalMesh::PolygonalMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells)
    : vertices_(std::move(vertices)), cells_(std::move(cells)) {
  const int nv = num_vertices();
  std::map<std::pair<int, int>, int> edge_of;
  cell_edges_.resize(cells_.size());
  for (int c = 0; c < num_cells(); ++c) {
    const auto& cell = cells_[c];
    const int m = static_cast<int>(cell.size());
    if (m < 3) throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices");
    std::set<int> seen;
    for (int v : cell) {
      if (v < 0 || v >= nv) {
        throw MeshError("cell " + std::to_string(c) + " references vertex " + std::to_string(v) +
                        " out of range");
      }
      if (!seen.insert(v).second) {
        throw MeshError("cell " + std::to_string(c) + " repeats vertex " + std::to_string(v));
      }
    }
    if (!(signed_area(cell_polygon(c)) > 0.0)) {
      throw MeshError("cell " + std::to_string(c) + " is not counter-clockwise");
    }
    for (int i = 0; i < m; ++i) {
      const int a = cell[i], b = cell[(i + 1) % m];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_of.try_emplace({key.first, key.second},
                                                static_cast<int>(edges_.size()));
      if (inserted) {
        edges_.push_back(Edge{{a, b}, {c, -1}});
      } else {
        Edge& e = edges_[it->second];
        if (e.cells[1] >= 0) {
          throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") shared by more than two cells");
        }
        if (e.vertices[0] != b || e.vertices[1] != a) {
          throw MeshError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                          ") has inconsistent orientation in cells " +
                          std::to_string(e.cells[0]) + " and " + std::to_string(c));
        }
        e.cells[1] = c;
      }
      cell_edges_[c].push_back(it->second);
    }
  }
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    if (edges_[e].is_boundary()) boundary_edges_.push_back(e);
  }
}

std::vector<Vec2> PolygonalMesh::cell_polygon(int cell) const {
  std::vector<Vec2> poly;
  poly.reserve(cells_[cell].size());
  for (int v : cells_[cell]) poly.push_back(vertices_[v]);
  return poly;
}

double PolygonalMesh::mesh_size() const {
  double h = 0.0;
  for (int c = 0; c < num_cells(); ++c) {
    const auto& cell = cells_[c];
    for (std::size_t i = 0; i < cell.size(); ++i)
      for (std::size_t j = i + 1; j < cell.size(); ++j)
        h = std::max(h, (vertices_[cell[i]] - vertices_[cell[j]]).norm());
  }
  return h;
}

double PolygonalMesh::total_area() const {
  double a = 0.0;
  for (int c = 0; c < num_cells(); ++c) a += signed_area(cell_polygon(c));
  return a;
}

ElementGeometry element_geometry(std::span<const Vec2> polygon) {
  ElementGeometry g;
  const int n = static_cast<int>(polygon.size());
  g.vertices.assign(polygon.begin(), polygon.end());
  // Shift to the first vertex for a well-conditioned centroid formula.
  const Vec2 origin = polygon[0];
  double a2 = 0.0;
  Vec2 c = Vec2::Zero();
  for (int i = 0; i < n; ++i) {
    const Vec2 p = polygon[i] - origin;
    const Vec2 q = polygon[(i + 1) % n] - origin;
    const double w = cross(p, q);
    a2 += w;
    c += w * (p + q);
  }
  if (!(a2 > 0.0)) throw MeshError("element has zero or negative area");
  g.area = 0.5 * a2;
  g.centroid = origin + c / (3.0 * a2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.diameter = std::max(g.diameter, (polygon[i] - polygon[j]).norm());
  g.normals.resize(n);
  g.lengths.resize(n);
  for (int i = 0; i < n; ++i) {
    const Vec2 t = polygon[(i + 1) % n] - polygon[i];
    const double len = t.norm();
    if (len == 0.0) throw MeshError("element has a zero-length edge");
    g.lengths[i] = len;
    g.normals[i] = Vec2(t.y(), -t.x()) / len;
  }
  return g;
}

ElementGeometry element_geometry(const PolygonalMesh& mesh, int cell) {
  if (cell < 0 || cell >= mesh.num_cells()) {
    throw InvalidArgument("cell index " + std::to_string(cell) + " out of range");
  }
  const auto poly = mesh.cell_polygon(cell);
  return element_geometry(poly);
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
  const Vec2 ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool point_in_polygon(const Vec2& p, std::span<const Vec2> poly) {
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 &a = poly[i], &b = poly[j];
    if ((a.y() > p.y()) != (b.y() > p.y()) &&
        p.x() < (b.x() - a.x()) * (p.y() - a.y()) / (b.y() - a.y()) + a.x()) {
      inside = !inside;
    }
  }
  return inside;
}

}  // namespace

std::vector<ShapeReport> shape_diagnostics(const PolygonalMesh& mesh) {
  std::vector<ShapeReport> out;
  out.reserve(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto poly = mesh.cell_polygon(c);
    const auto g = element_geometry(poly);
    ShapeReport r;
    r.lower_bound_only = !is_convex(poly);
    double dist = std::numeric_limits<double>::infinity();
    const int n = g.num_vertices();
    for (int i = 0; i < n; ++i) {
      dist = std::min(dist, point_segment_distance(g.centroid, poly[i], poly[(i + 1) % n]));
    }
    if (r.lower_bound_only && !point_in_polygon(g.centroid, poly)) dist = 0.0;
    r.inscribed_ratio = dist / g.diameter;
    r.min_edge_ratio = *std::min_element(g.lengths.begin(), g.lengths.end()) / g.diameter;
    out.push_back(r);
  }
  return out;
}

}  // namespace pwvem
