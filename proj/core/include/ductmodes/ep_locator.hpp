#pragma once

// Exceptional points of the admittance-wall dispersion relation: admittances
// beta0 at which two neighbouring transverse eigenvalues coalesce. These are
// the Cremer optimum impedances of the mode pair.

#include <array>
#include <utility>
#include <vector>

#include "ductmodes/common.hpp"
#include "ductmodes/eigensolver.hpp"

namespace ductmodes {

struct EpRecord {
  int m = 0;
  double K = 0.0;
  cplx beta_ep{};
  cplx gamma_ep{};
  /// Radial indices (n, n+1) of the coalescing pair.
  std::pair<int, int> pair{0, 1};
  /// gamma - gamma_ep ≈ ±sqrt_coeff * sqrt(beta0 - beta_ep).
  cplx sqrt_coeff{};
  /// d^2 f / d gamma^2 at the EP.
  cplx d2f{};
  double residual_f = 0.0;
  double residual_df = 0.0;
  int iterations = 0;
};

enum class JacobianMode { Analytic, FiniteDifference };

/// Newton on {f = 0, df/dgamma = 0} in (gamma, beta0), f = g(gamma) + j K beta0.
/// Throws NoConvergence after 100 iterations and TripleRoot if |f''| < 1e-8.
EpRecord find_ep(int m, double K, cplx gamma_init, cplx beta_init,
                 JacobianMode jacobian = JacobianMode::Analytic);

/// The first `count` (<= 20) exceptional points ordered by the lower mode
/// index, seeded from a coarse |g'| scan between consecutive rigid roots.
std::vector<EpRecord> enumerate_eps(int m, double K, int count);

/// First-order branch values gamma_ep ± sqrt_coeff sqrt(beta0 - beta_ep).
/// Throws OutOfDisk when |beta0 - beta_ep| >= 1e-2.
std::pair<cplx, cplx> local_expansion(const EpRecord& ep, cplx beta0);

struct EncircleResult {
  /// perm[k] = index of the mode on whose starting eigenvalue mode `pair[k]` ends.
  std::array<int, 2> pair{};
  std::array<int, 2> permutation{};
  std::array<cplx, 2> gamma_start{};
  std::array<cplx, 2> gamma_end{};
  int nodes = 0;
  bool swapped() const { return permutation[0] == pair[1] && permutation[1] == pair[0]; }
  bool identity() const { return permutation == pair; }
};

/// Continues the coalescing pair around a closed admittance loop.
/// Throws InvalidArgument for an open loop and TrackingFailure when the loop
/// passes within 1e-6 of beta_ep.
EncircleResult encircle_ep(const EpRecord& ep, const std::vector<cplx>& loop, const BoundarySpec& spec,
                           int min_nodes = 64);

/// H = [[alpha1, lambda c], [lambda c, alpha2]].
struct TwoLevelModel {
  cplx alpha1{};
  cplx alpha2{};
  cplx c{1.0};
  cplx lambda{};
};

struct TwoLevelEigen {
  cplx gamma1{};
  cplx gamma2{};
  cplx R{};
  std::array<cplx, 2> v1{};
  std::array<cplx, 2> v2{};
};

/// gamma_{1,2} = (alpha1 + alpha2 ± R)/2 with R = sqrt((alpha1-alpha2)^2 + 4 lambda^2 c^2);
/// eigenvectors scaled to unit Euclidean norm.
TwoLevelEigen two_level_eigen(const TwoLevelModel& model);

}  // namespace ductmodes
