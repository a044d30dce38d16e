#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/LU>

#include "pwvem/mesh.hpp"
#include "pwvem/pwcore.hpp"

namespace pwvem {

enum class Variant { PWVEM, PUM, GRAD };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

/// Local edges of an element that lie on the domain boundary, as indices
/// i of the local edge (v_i, v_{i+1}).
using BoundaryEdgeList = std::vector<int>;

/// Per-element PW-VEM matrices. Row index = test function, column index =
/// trial function, local numbering r = j p + l.
struct LocalOperators {
  int n_vertices = 0;
  int p = 0;
  CMatrix D;     // N x p
  CMatrix B;     // p x N
  CMatrix G;     // p x p
  CMatrix Pi;    // p x N, G^{-1} B: plane-wave coefficients of the projection
  CMatrix P;     // N x N
  CMatrix A_Pi;  // N x N
  CMatrix M;     // N x N
  CMatrix S;     // N x N
  CMatrix R;     // N x N
  double g_condition = 0.0;

  int dim() const { return n_vertices * p; }
  CMatrix elemental() const { return A_Pi + S + R; }
};

/// Volume matrices with the exact (linear) hat functions on a triangle.
struct VolumeMatrices {
  CMatrix A_full;  // int grad psi_s . conj(grad psi_r)
  CMatrix M_full;  // int psi_s conj(psi_r)
};

/// G condition numbers above this are rejected.
inline constexpr double kMaxGCondition = 1e14;

CMatrix build_D(const ElementGeometry& geom, const WaveContext& ctx);
CMatrix build_B(const ElementGeometry& geom, const WaveContext& ctx);
CMatrix build_G(const ElementGeometry& geom, const WaveContext& ctx);
CMatrix build_M(const ElementGeometry& geom, const WaveContext& ctx);
CMatrix build_R(const ElementGeometry& geom, const WaveContext& ctx,
                const BoundaryEdgeList& boundary_edges);

/// Condition number of the Hermitian matrix G (ratio of extreme
/// eigenvalue moduli).
double hermitian_condition(const CMatrix& G);

/// G^{-1} B, evaluated as (Q^H D)^{-1} Q^H from a thin QR factorization
/// B^H = Q R. Equal to the plain solve because G = B D, but the result
/// inherits the conditioning of Q^H D instead of that of G.
CMatrix projection_coefficients(const CMatrix& D, const CMatrix& B);
/// P = D G^{-1} B.
CMatrix build_P(const CMatrix& D, const CMatrix& Pi);
/// A_Pi = B^H G^{-1} B, returned exactly Hermitian.
CMatrix build_A_Pi(const CMatrix& B, const CMatrix& Pi);
/// S = (I - P)^H M (I - P).
CMatrix build_S(const CMatrix& P, const CMatrix& M);

/// Build every PW-VEM local matrix. Throws NumericalError naming h_K k when
/// G is numerically singular.
LocalOperators build_local_operators(const ElementGeometry& geom, const WaveContext& ctx,
                                     const BoundaryEdgeList& boundary_edges,
                                     double max_condition = kMaxGCondition);

/// Quadrature volume matrices for a triangle; throws UnsupportedError for
/// any other cell.
VolumeMatrices build_pum_grad_volume(const ElementGeometry& geom, const WaveContext& ctx,
                                     std::optional<int> target_degree = std::nullopt);

/// Elemental matrix for the requested variant.
CMatrix elemental_matrix(Variant variant, const LocalOperators& ops,
                         const std::optional<VolumeMatrices>& volume, const WaveContext& ctx);

struct InfSupResult {
  double beta = 0.0;
  double beta_reference = 0.0;  // 1 - 2 (h_K k)^2 / pi^2
  double hk = 0.0;
  int retained_rank = 0;        // numerically independent plane waves
};

/// Relative eigenvalue cutoff used to drop numerically dependent plane
/// waves from the weighted Gram matrix.
inline constexpr double kInfSupRankTolerance = 1e-11;

/// Discrete inf-sup constant of a^K on the plane-wave space, measured in
/// the weighted 1,k norm.
InfSupResult local_infsup_beta(const ElementGeometry& geom, const WaveContext& ctx);

}  // namespace pwvem
