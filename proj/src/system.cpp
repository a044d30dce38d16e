#include "pwvem/system.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <Eigen/SparseLU>

#include "pwvem/quadrature.hpp"

namespace pwvem {

BoundaryEdgeList boundary_edges_of(const PolygonalMesh& mesh, int cell) {
  BoundaryEdgeList out;
  const auto& edges = mesh.cell_edges(cell);
  for (int i = 0; i < static_cast<int>(edges.size()); ++i)
    if (mesh.edges()[edges[i]].is_boundary()) out.push_back(i);
  return out;
}

GlobalSystem assemble(const PolygonalMesh& mesh, const WaveContext& ctx, Variant variant,
                      const AssemblyOptions& options) {
  const int p = ctx.p();
  GlobalSystem sys;
  sys.dofs = DofMap{mesh.num_vertices(), p};
  sys.variant = variant;
  if (variant != Variant::PWVEM) {
    for (int c = 0; c < mesh.num_cells(); ++c)
      if (mesh.cells()[c].size() != 3)
        throw UnsupportedError(std::string(to_string(variant)) +
                               " requires an all-triangle mesh (cell " + std::to_string(c) +
                               " has " + std::to_string(mesh.cells()[c].size()) + " vertices)");
  }

  std::vector<Eigen::Triplet<cplx>> triplets;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = element_geometry(mesh, c);
    const auto bnd = boundary_edges_of(mesh, c);
    LocalOperators ops;
    try {
      ops = build_local_operators(geom, ctx, bnd, options.max_condition);
    } catch (const NumericalError& e) {
      throw NumericalError("element " + std::to_string(c) + ": " + e.what());
    }
    sys.max_g_condition = std::max(sys.max_g_condition, ops.g_condition);

    std::optional<VolumeMatrices> volume;
    if (variant != Variant::PWVEM) volume = build_pum_grad_volume(geom, ctx, options.volume_degree);

    CMatrix E;
    if (options.include_volume && options.include_boundary) {
      E = elemental_matrix(variant, ops, volume, ctx);
    } else {
      // the volume part is the elemental matrix minus R
      E = CMatrix::Zero(ops.dim(), ops.dim());
      if (options.include_volume) E = elemental_matrix(variant, ops, volume, ctx) - ops.R;
      if (options.include_boundary) E += ops.R;
    }

    const auto& cell = mesh.cells()[c];
    const int dim = ops.dim();
    for (int s = 0; s < dim; ++s) {
      const int gs = sys.dofs.global(cell[s / p], s % p);
      for (int r = 0; r < dim; ++r) {
        if (E(r, s) == cplx(0.0)) continue;
        triplets.emplace_back(sys.dofs.global(cell[r / p], r % p), gs, E(r, s));
      }
    }
    if (options.keep_element_matrices) sys.element_matrices.push_back(std::move(E));
  }
  sys.matrix.resize(sys.dofs.size(), sys.dofs.size());
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  sys.rhs = CVector::Zero(sys.dofs.size());
  return sys;
}

CVector assemble_rhs(const PolygonalMesh& mesh, const WaveContext& ctx, const BoundaryDatum& g,
                     int point_scale) {
  const int p = ctx.p();
  const DofMap dofs{mesh.num_vertices(), p};
  CVector rhs = CVector::Zero(dofs.size());
  const auto& X = mesh.vertices();
  for (int e : mesh.boundary_edges()) {
    const auto& edge = mesh.edges()[e];
    const int va = edge.vertices[0], vb = edge.vertices[1];
    const Vec2 &a = X[va], &b = X[vb];
    const Vec2 t = b - a;
    const double len = t.norm();
    const Vec2 normal = Vec2(t.y(), -t.x()) / len;
    // g conj(psi) oscillates with up to twice the wave number
    const int npts = point_scale * quadrature::oscillatory_points(2.0 * ctx.k, len);
    const int pieces = (npts + quadrature::kMaxSegmentPoints - 1) / quadrature::kMaxSegmentPoints;
    const auto rule = quadrature::gauss_segment((npts + pieces - 1) / pieces);
    for (int piece = 0; piece < pieces; ++piece) {
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double s = (piece + rule.nodes[q]) / pieces;
        const Vec2 x = a + s * t;
        const cplx gw = g(x, normal) * (rule.weights[q] * len / pieces);
        for (int l = 0; l < p; ++l) {
          rhs(dofs.global(va, l)) += gw * (1.0 - s) * std::conj(ctx.plane_wave(l, x, a));
          rhs(dofs.global(vb, l)) += gw * s * std::conj(ctx.plane_wave(l, x, b));
        }
      }
    }
  }
  return rhs;
}

DiscreteSolution solve(const PolygonalMesh& mesh, const WaveContext& ctx,
                       const GlobalSystem& system) {
  const double h = mesh.mesh_size();
  auto context = [&] {
    std::ostringstream os;
    os << " (h = " << h << ", k = " << ctx.k << ", p = " << ctx.p() << ")";
    return os.str();
  };
  Eigen::SparseLU<SparseCMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(system.matrix);
  lu.factorize(system.matrix);
  if (lu.info() != Eigen::Success) {
    throw NumericalError("sparse factorization failed: " + lu.lastErrorMessage() + context());
  }
  DiscreteSolution sol;
  sol.variant = system.variant;
  sol.coefficients = lu.solve(system.rhs);
  const double bnorm = system.rhs.norm();
  const double rnorm = (system.matrix * sol.coefficients - system.rhs).norm();
  sol.residual = bnorm > 0.0 ? rnorm / bnorm : rnorm;
  if (!(sol.residual <= kMaxResidual)) {
    std::ostringstream os;
    os << "linear solve residual " << sol.residual << " exceeds " << kMaxResidual << context();
    throw NumericalError(os.str());
  }

  const int p = ctx.p();
  sol.projection.resize(mesh.num_cells());
  sol.centroids.resize(mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = element_geometry(mesh, c);
    const CMatrix Pi = projection_coefficients(build_D(geom, ctx), build_B(geom, ctx));
    const auto& cell = mesh.cells()[c];
    CVector local(cell.size() * p);
    for (std::size_t j = 0; j < cell.size(); ++j)
      for (int l = 0; l < p; ++l) local(j * p + l) = sol.coefficients(cell[j] * p + l);
    sol.projection[c] = Pi * local;
    sol.centroids[c] = geom.centroid;
  }
  return sol;
}

cplx evaluate_projection(const WaveContext& ctx, const DiscreteSolution& sol, int cell,
                         const Vec2& x) {
  cplx u = 0.0;
  const CVector& c = sol.projection[cell];
  for (int l = 0; l < ctx.p(); ++l) u += c(l) * ctx.plane_wave(l, x, sol.centroids[cell]);
  return u;
}

cplx evaluate_triangle_basis(const PolygonalMesh& mesh, const WaveContext& ctx,
                             const DiscreteSolution& sol, int cell, const Vec2& x) {
  const auto& vids = mesh.cells()[cell];
  if (vids.size() != 3) throw UnsupportedError("exact basis evaluation needs a triangle");
  const auto& X = mesh.vertices();
  const double area2 = cross(X[vids[1]] - X[vids[0]], X[vids[2]] - X[vids[0]]);
  const int p = ctx.p();
  cplx u = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double hat = cross(X[vids[(j + 1) % 3]] - x, X[vids[(j + 2) % 3]] - x) / area2;
    cplx sum = 0.0;
    for (int l = 0; l < p; ++l)
      sum += sol.coefficients(vids[j] * p + l) * ctx.plane_wave(l, x, X[vids[j]]);
    u += hat * sum;
  }
  return u;
}

void write_matrix_coordinate(const GlobalSystem& system, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << std::setprecision(17);
  out << "% rows cols nnz\n"
      << system.matrix.rows() << ' ' << system.matrix.cols() << ' ' << system.matrix.nonZeros()
      << '\n';
  for (int col = 0; col < system.matrix.outerSize(); ++col)
    for (SparseCMatrix::InnerIterator it(system.matrix, col); it; ++it)
      out << it.row() << ' ' << it.col() << ' ' << it.value().real() << ' ' << it.value().imag()
          << '\n';
}

}  // namespace pwvem
