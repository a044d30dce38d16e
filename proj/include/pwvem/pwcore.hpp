#pragma once

#include <span>
#include <vector>

#include "pwvem/types.hpp"

namespace pwvem {

/// The p = 2m+1 propagation directions shared by every element.
struct DirectionSet {
  int p = 0;
  double offset_angle = 0.0;
  std::vector<double> angles;
  std::vector<Vec2> directions;
  /// Minimum pairwise angle divided by 2 pi / p.
  double delta = 0.0;

  int size() const { return p; }
  const Vec2& operator[](int l) const { return directions[l]; }
};

/// theta_l = offset + 2 pi l / p, l = 0..p-1. Throws InvalidArgument unless
/// p is odd and >= 3.
DirectionSet equispaced_directions(int p, double offset_angle = 0.0);

/// Wave number plus direction set; the plane waves of the method are
/// x -> exp(i k d_l . (x - anchor)).
struct WaveContext {
  double k = 0.0;
  DirectionSet directions;

  WaveContext(double wave_number, DirectionSet dirs);
  int p() const { return directions.p; }
  double wavelength() const { return 2.0 * kPi / k; }

  /// exp(i k d_l . (to - from)); with to = x_K, from = x_j this is c_{jl}.
  cplx phase(int l, const Vec2& from, const Vec2& to) const;
  /// Plane wave anchored at `anchor`, evaluated at x.
  cplx plane_wave(int l, const Vec2& x, const Vec2& anchor) const;
};

/// Local basis numbering psi_r = phi_j pw_{jl}, r = j p + l (0-based).
struct BasisIndex {
  int vertex;
  int direction;

  static BasisIndex from_flat(int r, int p) { return {r / p, r % p}; }
  int flat(int p) const { return vertex * p + direction; }
};

/// Which weight multiplies the plane-wave product on the edge.
enum class EdgeWeight {
  Hat,         // phi_a,           Phi2
  HatSquared,  // phi_a^2,         Phi3
  HatProduct,  // phi_a phi_b,     Phi4
};

/// int_F exp(i k (d_m - d_l) . (x - origin)) dS over the segment [a, b].
cplx edge_pw_integral(const Vec2& a, const Vec2& b, double k, const Vec2& d_m, const Vec2& d_l,
                      const Vec2& origin = Vec2::Zero());

/// Same integral with a hat weight. `a` is the vertex where the hat is one
/// (Hat, HatSquared); for HatProduct both hats are involved and `a` is the
/// vertex of the second (trial) factor.
cplx edge_hat_pw_integral(EdgeWeight weight, const Vec2& a, const Vec2& b, double k,
                          const Vec2& d_m, const Vec2& d_l, const Vec2& origin = Vec2::Zero());

/// Below this value of k |d_m - d_l| h_K the polygon mass integral is taken
/// by quadrature instead of the divergence-theorem reduction.
inline constexpr double kMassFallbackThreshold = 1e-3;

/// int_K exp(i k (d_m - d_l) . (x - origin)) dV for a CCW polygon.
cplx polygon_pw_mass_integral(std::span<const Vec2> polygon, double k, const Vec2& d_m,
                              const Vec2& d_l, const Vec2& origin = Vec2::Zero());

}  // namespace pwvem
