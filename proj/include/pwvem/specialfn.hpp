#pragma once

#include "pwvem/types.hpp"

namespace pwvem::specialfn {

/// Weighted exponential moments on the unit interval:
///   Phi1(z) = int_0^1 e^{zt} dt
///   Phi2(z) = int_0^1 (1-t) e^{zt} dt
///   Phi3(z) = int_0^1 (1-t)^2 e^{zt} dt
///   Phi4(z) = int_0^1 (1-t) t e^{zt} dt
/// They give closed forms for edge integrals of plane-wave products times
/// the linear edge traces of the hat functions.
enum class PhiKind { One = 1, Two = 2, Three = 3, Four = 4 };

/// Below this modulus phi() switches from the closed forms to a Maclaurin
/// series; the closed forms for Phi3/Phi4 divide by z^3.
inline constexpr double kPhiSeriesRadius = 1.0;

cplx phi(PhiKind kind, cplx z);

/// Supported order range for the real-argument Bessel routines.
inline constexpr double kMaxOrder = 5.0;
/// Ascending series below, Hankel asymptotic expansion at or above.
inline constexpr double kAsymptoticSwitch = 12.0;

double bessel_j(double nu, double x);
double bessel_y(double nu, double x);
cplx hankel1(double nu, double x);

// d/dx of the above.
double bessel_j_prime(double nu, double x);
double bessel_y_prime(double nu, double x);
cplx hankel1_prime(double nu, double x);

}  // namespace pwvem::specialfn
