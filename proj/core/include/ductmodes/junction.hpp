#pragma once

// Mode matching at the junction z = 0 between a rigid duct (z < 0) and a
// lined duct (z > 0). Fields use the time convention exp(j omega t) and
// travel as exp(-j K_n z).
//
//   rigid:  p = sum_n (A_n e^{-j Kr_n z} + B_n e^{j Kr_n z}) psi_n(r)
//   lined:  p = sum_i C_i e^{-j Kl_i z} phi_i(r)
//
// psi_n are the orthonormal rigid-wall eigenfunctions and phi_i the
// normalised lined eigenfunctions (see nonortho.hpp).

#include <vector>

#include "ductmodes/common.hpp"
#include "ductmodes/eigensolver.hpp"

namespace ductmodes {

inline constexpr double kMaxConditionNumber = 1e12;

struct JunctionSolution {
  BoundarySpec spec;
  int N = 0;
  ModeSet lined;
  std::vector<double> alpha;
  /// F(i, j) = integral of phi_i psi_j r dr.
  CMatrix F;
  CMatrix G;
  std::vector<cplx> A, B, C;
  std::vector<cplx> Kr, Kl;
  std::vector<cplx> kp_prime_diag;
  /// Reciprocal condition estimate of (Kr + F^T Kl K'_p F).
  double rcond = 0.0;
};

/// Normalised rigid eigenfunction psi_n for root alpha.
cplx rigid_eigenfunction(int m, double alpha, double r);

CMatrix coupling_matrix(const ModeSet& lined, const std::vector<double>& alpha);
CMatrix coupling_matrix(const BoundarySpec& spec, int N);

/// A_i = integral of psi_i conj(phi_0) r dr: the rigid-mode content of the
/// lined mode-0 profile.
std::vector<cplx> incident_amplitudes(const ModeSet& lined, const std::vector<double>& alpha);
std::vector<cplx> incident_amplitudes(const BoundarySpec& spec, int N);

/// Solves for B and C given incident amplitudes A (length N). Throws
/// IllConditioned when the condition estimate exceeds kMaxConditionNumber.
JunctionSolution solve_junction(const BoundarySpec& spec, const std::vector<cplx>& A, int N);
/// Same with A from incident_amplitudes.
JunctionSolution solve_junction(const BoundarySpec& spec, int N);

/// Lined-side pressure at (r, z >= 0).
cplx pressure_field(const JunctionSolution& sol, double r, double z);
/// Rigid-side pressure at z = 0^-.
cplx rigid_pressure(const JunctionSolution& sol, double r);

struct ContinuityResiduals {
  /// Quadrature L2 norms over r in [0,1], relative to ||A||.
  double pressure = 0.0;
  double velocity = 0.0;
};
ContinuityResiduals continuity_residuals(const JunctionSolution& sol, int points = 64);

}  // namespace ductmodes
