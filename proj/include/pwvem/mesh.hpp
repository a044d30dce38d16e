#pragma once

#include <array>
#include <filesystem>
#include <random>
#include <span>
#include <vector>

#include "pwvem/types.hpp"

namespace pwvem {

struct Edge {
  std::array<int, 2> vertices;  // as traversed by cells[0]
  std::array<int, 2> cells{-1, -1};
  bool is_boundary() const { return cells[1] < 0; }
};

/// Conforming polygonal decomposition of a 2D domain. Immutable once built;
/// edges and boundary topology are derived in the constructor.
class PolygonalMesh {
 public:
  PolygonalMesh() = default;
  /// Validates orientation, index ranges and edge manifoldness; throws
  /// MeshError on violation.
  PolygonalMesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> cells);

  const std::vector<Vec2>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& cells() const { return cells_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& boundary_edges() const { return boundary_edges_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_cells() const { return static_cast<int>(cells_.size()); }

  /// Edge index of the local edge (v_i, v_{i+1}) of a cell.
  const std::vector<int>& cell_edges(int cell) const { return cell_edges_[cell]; }

  /// Vertex coordinates of one cell, in order.
  std::vector<Vec2> cell_polygon(int cell) const;

  /// Largest cell diameter.
  double mesh_size() const;
  double total_area() const;

 private:
  std::vector<Vec2> vertices_;
  std::vector<std::vector<int>> cells_;
  std::vector<Edge> edges_;
  std::vector<int> boundary_edges_;
  std::vector<std::vector<int>> cell_edges_;
};

struct ElementGeometry {
  Vec2 centroid = Vec2::Zero();
  double diameter = 0.0;
  double area = 0.0;
  std::vector<Vec2> vertices;
  // per local edge i: (v_i, v_{i+1})
  std::vector<Vec2> normals;
  std::vector<double> lengths;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
};

double signed_area(std::span<const Vec2> polygon);
bool is_convex(std::span<const Vec2> polygon);

ElementGeometry element_geometry(std::span<const Vec2> polygon);
ElementGeometry element_geometry(const PolygonalMesh& mesh, int cell);

struct ShapeReport {
  double inscribed_ratio = 0.0;   // rho_K / h_K
  double min_edge_ratio = 0.0;    // min |e| / h_K
  bool lower_bound_only = false;  // cell is non-convex
};

std::vector<ShapeReport> shape_diagnostics(const PolygonalMesh& mesh);

// Generators. All produce meshes of the unit square (0,1)^2.

/// n x n squares, each cut by the diagonal from lower-left to upper-right.
PolygonalMesh make_structured_triangular(int n);

/// Clipped Voronoi diagram of n_cells random generators after
/// `lloyd_iters` centroidal relaxation sweeps. Deterministic in (seed).
PolygonalMesh make_voronoi(int n_cells, unsigned long long seed, int lloyd_iters);

/// n x n squares whose interior horizontal edges are kinked upward at
/// their midpoint, producing non-convex "arrow" cells above the first row.
PolygonalMesh make_chevron(int n);

/// Standalone CCW cells for element-level checks. Vertices lie on a random
/// ellipse (convex) or alternate between two radii (non-convex, star-shaped).
std::vector<Vec2> random_convex_polygon(std::mt19937_64& rng, int n_vertices, double diameter);
std::vector<Vec2> random_nonconvex_polygon(std::mt19937_64& rng, int n_vertices, double diameter);

void write_mesh(const PolygonalMesh& mesh, const std::filesystem::path& path);
PolygonalMesh read_mesh(const std::filesystem::path& path);

}  // namespace pwvem
