#include "ductmodes/power.hpp"

#include <cmath>

#include "ductmodes/nonortho.hpp"
#include "parallel.hpp"

namespace ductmodes {

namespace {

double azimuthal(const JunctionSolution& sol, const PowerOptions& opts) {
  if (!opts.azimuthal_factor) return 1.0;
  return sol.spec.m == 0 ? 2.0 * M_PI : M_PI;
}

}  // namespace

PowerProfile power_profile(const JunctionSolution& sol, const std::vector<double>& z_grid,
                           const PowerOptions& opts) {
  for (std::size_t k = 0; k < z_grid.size(); ++k) {
    if (z_grid[k] < 0.0 || (k > 0 && z_grid[k] < z_grid[k - 1])) {
      throw Error(ErrorCode::InvalidArgument, "z grid must be sorted and non-negative");
    }
  }
  const int n = sol.N;
  const CMatrix S = sij_matrix(sol.lined);
  const double K = sol.spec.K;
  const double factor = 0.5 * azimuthal(sol, opts);
  // Coefficient of the (i, j) term at z = 0: C_i conj(C_j) conj(Kl_j) S_ij / K.
  CMatrix coef(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      coef(i, j) = sol.C[i] * std::conj(sol.C[j]) * std::conj(sol.Kl[j]) * S(i, j) / K;
    }
  }
  PowerProfile prof;
  prof.z = z_grid;
  const int nz = static_cast<int>(z_grid.size());
  prof.W_total.assign(nz, 0.0);
  prof.W_modal.assign(nz, 0.0);
  prof.W_cross.assign(nz, 0.0);
  detail::parallel_for(nz, [&](int k) {
    const double z = z_grid[k];
    std::vector<cplx> e(n), ec(n);
    for (int i = 0; i < n; ++i) {
      e[i] = std::exp(-kJ * sol.Kl[i] * z);
      ec[i] = std::conj(e[i]);
    }
    double total = 0.0, modal = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double term = (coef(i, j) * e[i] * ec[j]).real();
        total += term;
        if (i == j) {
          modal += term;
        } else {
          cross += term;
        }
      }
    }
    prof.W_total[k] = factor * total;
    prof.W_modal[k] = factor * modal;
    prof.W_cross[k] = factor * cross;
  });
  return prof;
}

std::vector<double> modal_decay_rates(const JunctionSolution& sol) {
  std::vector<double> rates(sol.Kl.size());
  for (std::size_t i = 0; i < rates.size(); ++i) rates[i] = -2.0 * sol.Kl[i].imag();
  return rates;
}

InterfaceFlux interface_flux(const JunctionSolution& sol, const PowerOptions& opts) {
  InterfaceFlux flux;
  const double K = sol.spec.K;
  const double factor = 0.5 * azimuthal(sol, opts);
  for (int n = 0; n < sol.N; ++n) {
    const cplx kr = sol.Kr[n];
    if (kr.imag() == 0.0 && kr.real() > 0.0) {
      flux.incident += factor * std::norm(sol.A[n]) * kr.real() / K;
      flux.reflected += factor * std::norm(sol.B[n]) * kr.real() / K;
    }
    flux.net += factor * ((sol.A[n] + sol.B[n]) * std::conj(kr * (sol.A[n] - sol.B[n]))).real() / K;
  }
  return flux;
}

std::vector<double> linear_grid(double z0, double z1, int points) {
  if (points < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
  std::vector<double> z(points);
  for (int k = 0; k < points; ++k) {
    z[k] = points == 1 ? z0 : z0 + (z1 - z0) * k / (points - 1);
  }
  return z;
}

}  // namespace ductmodes
