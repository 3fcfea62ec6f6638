#pragma once

// Bessel functions of the first kind for integer order and complex argument,
// plus the closed-form radial overlap integrals built on them.
//
// Supported range: 0 <= m <= 200, |z| < 1e4 and |Im z| <= 700 (beyond that
// J_m overflows a double). Outside the range every function throws
// Error{RangeExceeded}.

#include <functional>
#include <vector>

#include "ductmodes/common.hpp"

namespace ductmodes {

inline constexpr int kMaxBesselOrder = 200;
inline constexpr double kMaxBesselArgument = 1e4;
inline constexpr double kMaxBesselImag = 700.0;

/// Arguments with |z| at or below this use the ascending series; larger
/// arguments use Miller's backward recurrence.
inline constexpr double kSeriesRadius = 4.0;

cplx bessel_j(int m, cplx z);
cplx bessel_j_prime(int m, cplx z);

/// J_{m-1}(z), J_m(z), J_{m+1}(z) from a single evaluation. For m = 0 the
/// first entry is J_{-1} = -J_1.
struct BesselTriple {
  cplx prev;
  cplx value;
  cplx next;
};
BesselTriple bessel_j_triple(int m, cplx z);

/// J_0(z) ... J_{max_order}(z).
std::vector<cplx> bessel_j_sequence(int max_order, cplx z);

/// gamma * J'_m(gamma) / J_m(gamma). Throws Error{Pole} when gamma sits on a
/// zero of J_m (|J_m| < 1e-14 max(1, |J'_m|)).
cplx dispersion_lhs(int m, cplx gamma);

/// g = gamma J'_m/J_m and its first two gamma-derivatives, obtained from the
/// Riccati form g' = (m^2 - g^2)/gamma - gamma of Bessel's equation.
struct DispersionTerms {
  cplx g;
  cplx dg;
  cplx d2g;
};
DispersionTerms dispersion_terms(int m, cplx gamma);

/// Reciprocal form q = J_m / (gamma J'_m) = 1/g and dq/dgamma. Finite at the
/// zeros of J_m, so it is the residual of choice for near pressure-release
/// walls.
struct ReciprocalTerms {
  cplx q;
  cplx dq;
};
ReciprocalTerms reciprocal_dispersion_terms(int m, cplx gamma);

/// Integral over [0,1] of J_m(a r) J_m(b r) r dr by the Lommel closed form
///   [b J_m(a) J'_m(b) - a J'_m(a) J_m(b)] / (a^2 - b^2).
/// Throws Error{DegenerateArguments} if |a^2 - b^2| < 1e-8; use
/// lommel_overlap for arguments that may coincide.
cplx lommel_cross(int m, cplx a, cplx b);

/// Integral over [0,1] of J_m(a r)^2 r dr = ½[J'_m(a)^2 + (1 - m^2/a^2) J_m(a)^2].
cplx lommel_self(int m, cplx a);

/// Same integral as lommel_cross for any pair of arguments. Near-coincident
/// arguments (a ≈ ±b) go through a Taylor expansion of the Lommel numerator
/// about the midpoint; small arguments use the product power series.
cplx lommel_overlap(int m, cplx a, cplx b);

using RadialFunction = std::function<cplx(double)>;

/// Gauss–Legendre nodes and weights mapped to [0, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(int order);

/// Gauss–Legendre approximation of the integral over [0,1] of f(r) g(r) r dr.
/// order must lie in [8, 512].
cplx quad_overlap(const RadialFunction& f, const RadialFunction& g, int order);

}  // namespace ductmodes
