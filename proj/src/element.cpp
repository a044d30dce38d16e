#include "pwvem/element.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "pwvem/quadrature.hpp"

namespace pwvem {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::PWVEM: return "PWVEM";
    case Variant::PUM: return "PUM";
    case Variant::GRAD: return "GRAD";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "PWVEM" || name == "pwvem" || name == "PW-VEM") return Variant::PWVEM;
  if (name == "PUM" || name == "pum") return Variant::PUM;
  if (name == "GRAD" || name == "grad") return Variant::GRAD;
  throw InvalidArgument("unknown variant '" + std::string(name) + "'");
}

namespace {

// c_{jl} = exp(i k d_l . (x_K - x_j)), stored as (vertex, direction).
CMatrix anchor_phases(const ElementGeometry& geom, const WaveContext& ctx) {
  const int n = geom.num_vertices(), p = ctx.p();
  CMatrix c(n, p);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < p; ++l) c(j, l) = ctx.phase(l, geom.vertices[j], geom.centroid);
  return c;
}

// W(l, m) = int_K pw_m conj(pw_l) dV, plane waves anchored at x_K.
CMatrix plane_wave_mass(const ElementGeometry& geom, const WaveContext& ctx) {
  const int p = ctx.p();
  CMatrix W(p, p);
  for (int l = 0; l < p; ++l) {
    W(l, l) = geom.area;
    for (int m = 0; m < l; ++m) {
      W(l, m) = polygon_pw_mass_integral(geom.vertices, ctx.k, ctx.directions[m],
                                         ctx.directions[l], geom.centroid);
      W(m, l) = std::conj(W(l, m));
    }
  }
  return W;
}

CMatrix identity_minus(const CMatrix& P) {
  return CMatrix::Identity(P.rows(), P.cols()) - P;
}

}  // namespace

CMatrix build_D(const ElementGeometry& geom, const WaveContext& ctx) {
  const int n = geom.num_vertices(), p = ctx.p();
  CMatrix D = CMatrix::Zero(n * p, p);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < p; ++l) D(j * p + l, l) = ctx.phase(l, geom.centroid, geom.vertices[j]);
  return D;
}

CMatrix build_B(const ElementGeometry& geom, const WaveContext& ctx) {
  const int n = geom.num_vertices(), p = ctx.p();
  const double k = ctx.k;
  const CMatrix c = anchor_phases(geom, ctx);
  CMatrix B = CMatrix::Zero(p, n * p);
  for (int j = 0; j < n; ++j) {
    const int next = (j + 1) % n;
    const int prev_edge = (j + n - 1) % n;
    const Vec2& xj = geom.vertices[j];
    // phi_j is nonzero on edge j (xj -> x_next) and edge j-1 (x_prev -> xj)
    const struct {
      int edge;
      Vec2 other;
    } incident[2] = {{j, geom.vertices[next]}, {prev_edge, geom.vertices[prev_edge]}};
    for (int l = 0; l < p; ++l) {
      const Vec2& dl = ctx.directions[l];
      for (int m = 0; m < p; ++m) {
        const Vec2& dm = ctx.directions[m];
        cplx sum = 0.0;
        for (const auto& inc : incident) {
          const double flux = dl.dot(geom.normals[inc.edge]);
          if (flux == 0.0) continue;
          sum += flux * edge_hat_pw_integral(EdgeWeight::Hat, xj, inc.other, k, dm, dl,
                                             geom.centroid);
        }
        B(l, j * p + m) = -I * k * c(j, m) * sum;
      }
    }
  }
  return B;
}

CMatrix build_G(const ElementGeometry& geom, const WaveContext& ctx) {
  const int p = ctx.p();
  const CMatrix W = plane_wave_mass(geom, ctx);
  CMatrix G(p, p);
  const double k2 = ctx.k * ctx.k;
  for (int l = 0; l < p; ++l)
    for (int m = 0; m < p; ++m)
      G(l, m) = (l == m) ? cplx(0.0)
                         : k2 * (ctx.directions[m].dot(ctx.directions[l]) - 1.0) * W(l, m);
  return G;
}

CMatrix build_M(const ElementGeometry& geom, const WaveContext& ctx) {
  const int n = geom.num_vertices(), p = ctx.p();
  const CMatrix W = plane_wave_mass(geom, ctx);
  const CMatrix c = anchor_phases(geom, ctx);
  const double scale = 1.0 / (geom.diameter * geom.diameter);
  CMatrix M = CMatrix::Zero(n * p, n * p);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < p; ++l)
      for (int m = 0; m < p; ++m)
        M(j * p + l, j * p + m) = scale * c(j, m) * std::conj(c(j, l)) * W(l, m);
  return M;
}

CMatrix build_R(const ElementGeometry& geom, const WaveContext& ctx,
                const BoundaryEdgeList& boundary_edges) {
  const int n = geom.num_vertices(), p = ctx.p();
  const double k = ctx.k;
  CMatrix R = CMatrix::Zero(n * p, n * p);
  if (boundary_edges.empty()) return R;
  const CMatrix c = anchor_phases(geom, ctx);
  for (int e : boundary_edges) {
    const int ends[2] = {e, (e + 1) % n};
    for (int test : ends) {
      for (int trial : ends) {
        // anchor at the trial vertex; the far end is the other endpoint
        const int far = (trial == ends[0]) ? ends[1] : ends[0];
        const Vec2& xa = geom.vertices[trial];
        const Vec2& xb = geom.vertices[far];
        const EdgeWeight w = (test == trial) ? EdgeWeight::HatSquared : EdgeWeight::HatProduct;
        for (int l = 0; l < p; ++l) {
          for (int m = 0; m < p; ++m) {
            const cplx integral = edge_hat_pw_integral(w, xa, xb, k, ctx.directions[m],
                                                       ctx.directions[l], geom.centroid);
            R(test * p + l, trial * p + m) +=
                I * k * c(trial, m) * std::conj(c(test, l)) * integral;
          }
        }
      }
    }
  }
  return R;
}

double hermitian_condition(const CMatrix& G) {
  const CMatrix H = 0.5 * (G + G.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H, Eigen::EigenvaluesOnly);
  const auto ev = es.eigenvalues().cwiseAbs();
  const double lo = ev.minCoeff();
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return ev.maxCoeff() / lo;
}

CMatrix projection_coefficients(const CMatrix& D, const CMatrix& B) {
  const Eigen::HouseholderQR<CMatrix> qr(B.adjoint());
  const CMatrix Q = qr.householderQ() * CMatrix::Identity(B.cols(), B.rows());
  return Eigen::PartialPivLU<CMatrix>(Q.adjoint() * D).solve(Q.adjoint());
}

CMatrix build_P(const CMatrix& D, const CMatrix& Pi) { return D * Pi; }

CMatrix build_A_Pi(const CMatrix& B, const CMatrix& Pi) {
  const CMatrix A = B.adjoint() * Pi;
  return 0.5 * (A + A.adjoint());
}

CMatrix build_S(const CMatrix& P, const CMatrix& M) {
  const CMatrix Q = identity_minus(P);
  return Q.adjoint() * M * Q;
}

LocalOperators build_local_operators(const ElementGeometry& geom, const WaveContext& ctx,
                                     const BoundaryEdgeList& boundary_edges,
                                     double max_condition) {
  LocalOperators ops;
  ops.n_vertices = geom.num_vertices();
  ops.p = ctx.p();
  ops.D = build_D(geom, ctx);
  ops.B = build_B(geom, ctx);
  ops.G = build_G(geom, ctx);
  ops.g_condition = hermitian_condition(ops.G);
  if (!(ops.g_condition <= max_condition)) {
    std::ostringstream msg;
    msg << "G numerically singular (condition " << ops.g_condition << ") at h_K k = "
        << geom.diameter * ctx.k << ", p = " << ctx.p();
    throw NumericalError(msg.str());
  }
  ops.Pi = projection_coefficients(ops.D, ops.B);
  ops.P = build_P(ops.D, ops.Pi);
  ops.A_Pi = build_A_Pi(ops.B, ops.Pi);
  ops.M = build_M(geom, ctx);
  ops.S = build_S(ops.P, ops.M);
  ops.R = build_R(geom, ctx, boundary_edges);
  return ops;
}

VolumeMatrices build_pum_grad_volume(const ElementGeometry& geom, const WaveContext& ctx,
                                     std::optional<int> target_degree) {
  if (geom.num_vertices() != 3) {
    throw UnsupportedError("PUM/GRAD volume matrices require triangles, got a " +
                           std::to_string(geom.num_vertices()) + "-gon");
  }
  const int p = ctx.p();
  const double k = ctx.k;
  const auto& x = geom.vertices;
  const double area2 = 2.0 * geom.area;
  Vec2 grad_hat[3];
  for (int j = 0; j < 3; ++j) {
    const Vec2& a = x[(j + 1) % 3];
    const Vec2& b = x[(j + 2) % 3];
    grad_hat[j] = Vec2(a.y() - b.y(), b.x() - a.x()) / area2;
  }

  std::vector<Vec2> points;
  std::vector<double> weights;
  auto collect = [&](const Vec2& q, double w) {
    points.push_back(q);
    weights.push_back(w);
  };
  if (target_degree) {
    const auto rule = quadrature::gauss_triangle(*target_degree);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      collect(x[0] + rule.nodes[q].x() * (x[1] - x[0]) + rule.nodes[q].y() * (x[2] - x[0]),
              rule.weights[q] * area2);
  } else {
    quadrature::for_each_polygon_point(x, 2.0 * k, collect);
  }

  const int nq = static_cast<int>(points.size());
  const int dim = 3 * p;
  CMatrix psi(nq, dim), dx(nq, dim), dy(nq, dim);
  for (int q = 0; q < nq; ++q) {
    const Vec2& pt = points[q];
    const double sw = std::sqrt(weights[q]);
    for (int j = 0; j < 3; ++j) {
      const double hat = cross(x[(j + 1) % 3] - pt, x[(j + 2) % 3] - pt) / area2;
      for (int l = 0; l < p; ++l) {
        const Vec2& d = ctx.directions[l];
        const cplx pw = ctx.plane_wave(l, pt, x[j]);
        const int r = j * p + l;
        psi(q, r) = sw * hat * pw;
        dx(q, r) = sw * (grad_hat[j].x() + I * k * hat * d.x()) * pw;
        dy(q, r) = sw * (grad_hat[j].y() + I * k * hat * d.y()) * pw;
      }
    }
  }
  VolumeMatrices vm;
  vm.A_full = dx.adjoint() * dx + dy.adjoint() * dy;
  vm.M_full = psi.adjoint() * psi;
  return vm;
}

CMatrix elemental_matrix(Variant variant, const LocalOperators& ops,
                         const std::optional<VolumeMatrices>& volume, const WaveContext& ctx) {
  switch (variant) {
    case Variant::PWVEM: return ops.A_Pi + ops.S + ops.R;
    case Variant::PUM:
      if (!volume) throw UnsupportedError("PUM requires volume matrices");
      return volume->A_full - ctx.k * ctx.k * volume->M_full + ops.R;
    case Variant::GRAD: {
      if (!volume) throw UnsupportedError("GRAD requires volume matrices");
      const CMatrix Q = identity_minus(ops.P);
      return ops.A_Pi + Q.adjoint() * volume->A_full * Q + ops.R;
    }
  }
  return {};
}

InfSupResult local_infsup_beta(const ElementGeometry& geom, const WaveContext& ctx) {
  const int p = ctx.p();
  const double k2 = ctx.k * ctx.k;
  const CMatrix W = plane_wave_mass(geom, ctx);
  CMatrix G(p, p), H(p, p);
  for (int l = 0; l < p; ++l)
    for (int m = 0; m < p; ++m) {
      const double dot = ctx.directions[m].dot(ctx.directions[l]);
      G(l, m) = (l == m) ? cplx(0.0) : k2 * (dot - 1.0) * W(l, m);
      H(l, m) = k2 * (dot + 1.0) * W(l, m);
    }
  InfSupResult res;
  res.hk = geom.diameter * ctx.k;
  res.beta_reference = 1.0 - 2.0 * res.hk * res.hk / (kPi * kPi);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()));
  const auto& lambda = es.eigenvalues();
  const double lmax = lambda.maxCoeff();
  if (!(lmax > 0.0) || lambda.minCoeff() < -1e-10 * lmax) {
    throw NumericalError("weighted Gram matrix is not positive semidefinite at h_K k = " +
                         std::to_string(res.hk));
  }
  std::vector<int> keep;
  for (int i = 0; i < p; ++i)
    if (lambda(i) > kInfSupRankTolerance * lmax) keep.push_back(i);
  if (keep.empty()) throw NumericalError("weighted Gram matrix is numerically zero");
  res.retained_rank = static_cast<int>(keep.size());
  CMatrix T(p, keep.size());
  for (std::size_t c = 0; c < keep.size(); ++c)
    T.col(c) = es.eigenvectors().col(keep[c]) / std::sqrt(lambda(keep[c]));
  const CMatrix Gr = T.adjoint() * G * T;
  Eigen::JacobiSVD<CMatrix> svd(Gr);
  res.beta = svd.singularValues().minCoeff();
  return res;
}

}  // namespace pwvem
