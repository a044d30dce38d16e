#include "pwvem/specialfn.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pwvem::specialfn {

namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr ld kPiL = 3.141592653589793238462643383279502884L;
constexpr ld kEulerGamma = 0.577215664901532860606512090082402431L;

// Maclaurin coefficients of Phi_kind: Phi(z) = sum_n c_n z^n.
// Phi1: 1/(n+1)!, Phi2: 1/(n+2)!, Phi3: 2/(n+3)!, Phi4: (n+1)/(n+3)!
cplx phi_series(PhiKind kind, cplx z) {
  cplx sum = 0.0;
  cplx zn = 1.0;  // z^n
  double inv_fact = 1.0;  // 1/(n + shift)!
  int shift = 1;
  switch (kind) {
    case PhiKind::One: shift = 1; break;
    case PhiKind::Two: shift = 2; break;
    case PhiKind::Three:
    case PhiKind::Four: shift = 3; break;
  }
  for (int m = 2; m <= shift; ++m) inv_fact /= m;
  for (int n = 0; n < 40; ++n) {
    double c = inv_fact;
    if (kind == PhiKind::Three) c *= 2.0;
    if (kind == PhiKind::Four) c *= (n + 1);
    const cplx term = c * zn;
    sum += term;
    if (n > 2 && std::abs(term) < 1e-18 * std::abs(sum)) break;
    zn *= z;
    inv_fact /= (n + shift + 1);
  }
  return sum;
}

void check_order(double nu) {
  if (!(nu >= 0.0) || nu > kMaxOrder + 1e-12) {
    throw UnsupportedError("Bessel order " + std::to_string(nu) + " outside [0, " +
                           std::to_string(kMaxOrder) + "]");
  }
}

bool is_integer(double nu) { return std::abs(nu - std::round(nu)) < 1e-12; }

// Ascending series, valid for any real nu that is not a negative integer.
ld j_series(ld nu, ld x) {
  if (x == 0.0L) return nu == 0.0L ? 1.0L : 0.0L;
  const ld half = x / 2.0L;
  const ld q = half * half;
  ld term = std::pow(half, nu) / std::tgamma(nu + 1.0L);
  ld sum = term;
  for (int m = 1; m < 300; ++m) {
    term *= -q / (static_cast<ld>(m) * (static_cast<ld>(m) + nu));
    sum += term;
    if (m > half && std::abs(term) < 1e-22L * std::abs(sum)) break;
  }
  return sum;
}

// Y_n for integer n, x below the asymptotic switch (limit formula).
ld y_integer_series(int n, ld x) {
  const ld half = x / 2.0L;
  ld finite = 0.0L;
  for (int k = 0; k < n; ++k) {
    finite += std::tgamma(static_cast<ld>(n - k)) / std::tgamma(static_cast<ld>(k + 1)) *
              std::pow(half, static_cast<ld>(2 * k - n));
  }
  // psi(m + 1) = -gamma + H_m
  auto psi1 = [](int m) {
    ld h = -kEulerGamma;
    for (int i = 1; i <= m; ++i) h += 1.0L / i;
    return h;
  };
  const ld q = -half * half;
  ld coeff = 1.0L / std::tgamma(static_cast<ld>(n + 1));  // q^k / (k! (n+k)!)
  ld h_k = psi1(0);
  ld h_nk = psi1(n);
  ld series = (h_k + h_nk) * coeff;
  for (int k = 1; k < 300; ++k) {
    coeff *= q / (static_cast<ld>(k) * static_cast<ld>(n + k));
    h_k += 1.0L / k;
    h_nk += 1.0L / (n + k);
    const ld term = (h_k + h_nk) * coeff;
    series += term;
    if (k > half && std::abs(term) < 1e-22L * std::abs(series)) break;
  }
  return (2.0L / kPiL) * std::log(half) * j_series(n, x) - finite / kPiL -
         std::pow(half, static_cast<ld>(n)) * series / kPiL;
}

ld y_small(double nu, ld x) {
  if (is_integer(nu)) return y_integer_series(static_cast<int>(std::lround(nu)), x);
  const ld nul = nu;
  const ld s = std::sin(nul * kPiL);
  const ld c = std::cos(nul * kPiL);
  return (j_series(nul, x) * c - j_series(-nul, x)) / s;
}

// Hankel asymptotic expansion for 0 <= nu < 2 and x >= kAsymptoticSwitch.
cld hankel_asymptotic(ld nu, ld x) {
  const ld mu = 4.0L * nu * nu;
  cld sum = 1.0L;
  cld ik = 1.0L;  // i^k
  ld a = 1.0L;
  ld prev = 1.0L;
  for (int k = 1; k < 60; ++k) {
    const ld odd = 2.0L * k - 1.0L;
    a *= (mu - odd * odd) / (8.0L * k * x);
    ik *= cld(0.0L, 1.0L);
    const ld mag = std::abs(a);
    if (mag > prev) break;  // asymptotic series started diverging
    sum += ik * a;
    prev = mag;
    if (mag < 1e-20L) break;
  }
  const ld omega = x - nu * kPiL / 2.0L - kPiL / 4.0L;
  return std::sqrt(2.0L / (kPiL * x)) * cld(std::cos(omega), std::sin(omega)) * sum;
}

// H^(1)_nu for x >= kAsymptoticSwitch: asymptotic expansion at the two lowest
// orders with the same fractional part, then forward recurrence (stable for
// nu < x).
cld hankel_large(double nu, ld x) {
  const int steps = static_cast<int>(std::floor(nu + 1e-12));
  const ld frac = std::max<ld>(0.0L, static_cast<ld>(nu) - steps);
  cld h0 = hankel_asymptotic(frac, x);
  if (steps == 0) return h0;
  cld h1 = hankel_asymptotic(frac + 1.0L, x);
  for (int s = 1; s < steps; ++s) {
    const ld order = frac + s;
    const cld h2 = (2.0L * order / x) * h1 - h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double j_impl(double nu, double x) {
  if (x < kAsymptoticSwitch) return static_cast<double>(j_series(nu, x));
  return static_cast<double>(hankel_large(nu, x).real());
}

double y_impl(double nu, double x) {
  if (x < kAsymptoticSwitch) return static_cast<double>(y_small(nu, x));
  return static_cast<double>(hankel_large(nu, x).imag());
}

cplx hankel_impl(double nu, double x) {
  if (x >= kAsymptoticSwitch) {
    const auto h = hankel_large(nu, x);
    return {static_cast<double>(h.real()), static_cast<double>(h.imag())};
  }
  return {j_impl(nu, x), y_impl(nu, x)};
}

}  // namespace

cplx phi(PhiKind kind, cplx z) {
  if (std::abs(z) < kPhiSeriesRadius) return phi_series(kind, z);
  const cplx ez = std::exp(z);
  switch (kind) {
    case PhiKind::One: return (ez - 1.0) / z;
    case PhiKind::Two: return (ez - z - 1.0) / (z * z);
    case PhiKind::Three: return (2.0 * (ez - z - 1.0) - z * z) / (z * z * z);
    case PhiKind::Four: return (ez * (z - 2.0) + z + 2.0) / (z * z * z);
  }
  return 0.0;
}

double bessel_j(double nu, double x) {
  check_order(nu);
  if (!(x >= 0.0)) throw DomainError("bessel_j: x must be >= 0");
  return j_impl(nu, x);
}

double bessel_y(double nu, double x) {
  check_order(nu);
  if (!(x > 0.0)) throw DomainError("bessel_y: x must be > 0");
  return y_impl(nu, x);
}

cplx hankel1(double nu, double x) {
  check_order(nu);
  if (!(x > 0.0)) throw DomainError("hankel1: x must be > 0");
  return hankel_impl(nu, x);
}

double bessel_j_prime(double nu, double x) {
  check_order(nu);
  if (!(x >= 0.0)) throw DomainError("bessel_j_prime: x must be >= 0");
  if (x == 0.0) {
    if (nu == 0.0) return 0.0;
    if (nu == 1.0) return 0.5;
    if (nu < 1.0) return std::numeric_limits<double>::infinity();
    return 0.0;
  }
  return nu / x * j_impl(nu, x) - j_impl(nu + 1.0, x);
}

double bessel_y_prime(double nu, double x) {
  check_order(nu);
  if (!(x > 0.0)) throw DomainError("bessel_y_prime: x must be > 0");
  return nu / x * y_impl(nu, x) - y_impl(nu + 1.0, x);
}

cplx hankel1_prime(double nu, double x) {
  check_order(nu);
  if (!(x > 0.0)) throw DomainError("hankel1_prime: x must be > 0");
  return nu / x * hankel_impl(nu, x) - hankel_impl(nu + 1.0, x);
}

}  // namespace pwvem::specialfn
