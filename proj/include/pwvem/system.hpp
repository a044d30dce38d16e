#pragma once

#include <filesystem>
#include <functional>
#include <vector>

#include <Eigen/SparseCore>

#include "pwvem/element.hpp"
#include "pwvem/mesh.hpp"
#include "pwvem/pwcore.hpp"

namespace pwvem {

/// Global numbering: dof(vertex, l) = vertex * p + l (0-based).
struct DofMap {
  int n_vertices = 0;
  int p = 0;

  int global(int vertex, int direction) const { return vertex * p + direction; }
  int size() const { return n_vertices * p; }
  BasisIndex split(int dof) const { return BasisIndex::from_flat(dof, p); }
};

using SparseCMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor>;

struct AssemblyOptions {
  bool include_volume = true;    // A_Pi + S (or the PUM/GRAD volume part)
  bool include_boundary = true;  // impedance term R
  bool keep_element_matrices = false;
  double max_condition = kMaxGCondition;
  /// Overrides the PUM/GRAD volume quadrature degree (default from k h_K).
  std::optional<int> volume_degree;
};

struct GlobalSystem {
  DofMap dofs;
  Variant variant = Variant::PWVEM;
  SparseCMatrix matrix;  // row = test dof, column = trial dof
  CVector rhs;
  std::vector<CMatrix> element_matrices;  // filled when requested
  double max_g_condition = 0.0;
};

/// Local edge indices of `cell` that lie on the mesh boundary.
BoundaryEdgeList boundary_edges_of(const PolygonalMesh& mesh, int cell);

/// Scatter every elemental matrix of the chosen variant. Throws
/// UnsupportedError for PUM/GRAD on non-triangular meshes and
/// NumericalError (naming the element) for a singular G.
GlobalSystem assemble(const PolygonalMesh& mesh, const WaveContext& ctx, Variant variant,
                      const AssemblyOptions& options = {});

/// Impedance datum g(x, outward normal).
using BoundaryDatum = std::function<cplx(const Vec2& x, const Vec2& normal)>;

/// rhs(dof) = int_{boundary} g conj(psi_dof) dS, Gauss quadrature per
/// boundary edge. `point_scale` multiplies the default point count.
CVector assemble_rhs(const PolygonalMesh& mesh, const WaveContext& ctx, const BoundaryDatum& g,
                     int point_scale = 1);

struct DiscreteSolution {
  Variant variant = Variant::PWVEM;
  CVector coefficients;              // a_{jl} in global numbering
  std::vector<CVector> projection;   // per element: plane-wave coefficients anchored at x_K
  std::vector<Vec2> centroids;
  double residual = 0.0;             // ||A a - b|| / ||b||
};

/// Largest relative residual accepted by solve().
inline constexpr double kMaxResidual = 1e-6;

/// Sparse LU solve plus per-element projection coefficients
/// c^K = G^{-1} B a_K.
DiscreteSolution solve(const PolygonalMesh& mesh, const WaveContext& ctx,
                       const GlobalSystem& system);

/// Pi u_hp at x, using the projection of element `cell`.
cplx evaluate_projection(const WaveContext& ctx, const DiscreteSolution& sol, int cell,
                         const Vec2& x);

/// sum_r a_r psi_r(x) on a triangular cell (barycentric hats).
cplx evaluate_triangle_basis(const PolygonalMesh& mesh, const WaveContext& ctx,
                             const DiscreteSolution& sol, int cell, const Vec2& x);

/// Coordinate text dump: one "row col re im" line per stored entry.
void write_matrix_coordinate(const GlobalSystem& system, const std::filesystem::path& path);

}  // namespace pwvem
