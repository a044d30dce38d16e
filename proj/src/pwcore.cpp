#include "pwvem/pwcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pwvem/quadrature.hpp"
#include "pwvem/specialfn.hpp"

namespace pwvem {

using specialfn::PhiKind;

DirectionSet equispaced_directions(int p, double offset_angle) {
  if (p < 3 || p % 2 == 0) {
    throw InvalidArgument("number of directions must satisfy p = 2m+1 with m >= 1, got p = " +
                          std::to_string(p));
  }
  DirectionSet set;
  set.p = p;
  set.offset_angle = offset_angle;
  set.angles.resize(p);
  set.directions.resize(p);
  for (int l = 0; l < p; ++l) {
    set.angles[l] = offset_angle + 2.0 * kPi * l / p;
    set.directions[l] = Vec2(std::cos(set.angles[l]), std::sin(set.angles[l]));
  }
  double min_angle = std::numeric_limits<double>::infinity();
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b) {
      const double c = std::clamp(set.directions[a].dot(set.directions[b]), -1.0, 1.0);
      min_angle = std::min(min_angle, std::acos(c));
    }
  set.delta = min_angle / (2.0 * kPi / p);
  return set;
}

WaveContext::WaveContext(double wave_number, DirectionSet dirs)
    : k(wave_number), directions(std::move(dirs)) {
  if (!(k > 0.0)) throw InvalidArgument("wave number must be positive");
}

cplx WaveContext::phase(int l, const Vec2& from, const Vec2& to) const {
  return expi(k * directions[l].dot(to - from));
}

cplx WaveContext::plane_wave(int l, const Vec2& x, const Vec2& anchor) const {
  return expi(k * directions[l].dot(x - anchor));
}

cplx edge_pw_integral(const Vec2& a, const Vec2& b, double k, const Vec2& d_m, const Vec2& d_l,
                      const Vec2& origin) {
  const Vec2 kappa = k * (d_m - d_l);
  const double len = (b - a).norm();
  return len * expi(kappa.dot(a - origin)) * specialfn::phi(PhiKind::One, I * kappa.dot(b - a));
}

cplx edge_hat_pw_integral(EdgeWeight weight, const Vec2& a, const Vec2& b, double k,
                          const Vec2& d_m, const Vec2& d_l, const Vec2& origin) {
  const Vec2 kappa = k * (d_m - d_l);
  const double len = (b - a).norm();
  PhiKind kind = PhiKind::Two;
  switch (weight) {
    case EdgeWeight::Hat: kind = PhiKind::Two; break;
    case EdgeWeight::HatSquared: kind = PhiKind::Three; break;
    case EdgeWeight::HatProduct: kind = PhiKind::Four; break;
  }
  return len * expi(kappa.dot(a - origin)) * specialfn::phi(kind, I * kappa.dot(b - a));
}

cplx polygon_pw_mass_integral(std::span<const Vec2> polygon, double k, const Vec2& d_m,
                              const Vec2& d_l, const Vec2& origin) {
  const int n = static_cast<int>(polygon.size());
  double area2 = 0.0;
  double diam = 0.0;
  for (int i = 0; i < n; ++i) {
    area2 += cross(polygon[i] - origin, polygon[(i + 1) % n] - origin);
    for (int j = i + 1; j < n; ++j) diam = std::max(diam, (polygon[i] - polygon[j]).norm());
  }
  const Vec2 dd = d_m - d_l;
  const double dd2 = dd.squaredNorm();
  if (dd2 == 0.0) return 0.5 * area2;
  const Vec2 kappa = k * dd;
  if (k * std::sqrt(dd2) * diam < kMassFallbackThreshold) {
    return quadrature::integrate_polygon(
        polygon, [&](const Vec2& x) { return expi(kappa.dot(x - origin)); }, 8);
  }
  // div( e^{i kappa.x} kappa / (i |kappa|^2) ) = e^{i kappa.x}
  cplx sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const Vec2& a = polygon[i];
    const Vec2& b = polygon[(i + 1) % n];
    const Vec2 t = b - a;
    const Vec2 normal_len(t.y(), -t.x());  // outward normal scaled by |F|
    const double flux = dd.dot(normal_len);
    if (flux == 0.0) continue;
    sum += flux * expi(kappa.dot(a - origin)) * specialfn::phi(PhiKind::One, I * kappa.dot(t));
  }
  return sum / (I * k * dd2);
}

}  // namespace pwvem
