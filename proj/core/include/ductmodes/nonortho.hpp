#pragma once

// Normalisation, left/right eigenfunctions and the nonorthogonality metrics
// of lined-duct modes. All surface integrals are reduced to radial integrals;
// the azimuthal factor is a common constant and is omitted.
//
// Right eigenfunction:  phi(r) = scale * J_m(gamma r) / sqrt(Lambda)
// Left eigenfunction:   conj(phi(r))

#include "ductmodes/common.hpp"
#include "ductmodes/eigensolver.hpp"
#include "ductmodes/special_fn.hpp"

namespace ductmodes {

inline constexpr double kKpCap = 1e12;

struct NonorthReport {
  int mode_index = 0;
  cplx kp_prime{};
  double kp = 1.0;
  cplx self_overlap{};
  /// Set when K_p exceeded kKpCap and was clamped.
  bool capped = false;
};

/// Lambda = integral over [0,1] of |scale J_m(gamma r)|^2 r dr.
double normalization(const Mode& mode);

RadialFunction right_eigenfunction(const Mode& mode);
RadialFunction left_eigenfunction(const Mode& mode);

/// S_ij = integral of phi_i conj(phi_j) r dr.
cplx mutual_overlap(const Mode& a, const Mode& b);

/// (integral of phi~^2 r dr) / (integral of |phi~|^2 r dr).
cplx self_overlap(const Mode& mode);

/// K'_p = 1 / self_overlap and K_p = |K'_p|^2, clamped to kKpCap.
NonorthReport kp(const Mode& mode);

/// Unnormalised bilinear overlap of phi~_a and phi~_b (no conjugate).
cplx biorthogonal_overlap(const Mode& a, const Mode& b);

/// Full S_ij matrix, exactly Hermitian with unit diagonal.
CMatrix sij_matrix(const ModeSet& modes);

}  // namespace ductmodes
