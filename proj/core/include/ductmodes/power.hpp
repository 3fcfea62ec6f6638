#pragma once

// Axial sound power in the lined section from W = ½ Re ∫ p conj(v_z) r dr,
// split into the single-mode sum (i = j) and the cross-power sum (i != j).

#include <vector>

#include "ductmodes/junction.hpp"

namespace ductmodes {

struct PowerOptions {
  /// Multiply by the azimuthal integral (2 pi for m = 0, pi otherwise).
  bool azimuthal_factor = false;
};

struct PowerProfile {
  std::vector<double> z;
  std::vector<double> W_total;
  std::vector<double> W_modal;
  std::vector<double> W_cross;
};

PowerProfile power_profile(const JunctionSolution& sol, const std::vector<double>& z_grid,
                           const PowerOptions& opts = {});

/// -2 Im(Kl_i): decay rate of |C_i e^{-j Kl_i z}|^2 per unit z.
std::vector<double> modal_decay_rates(const JunctionSolution& sol);

/// Rigid-side power at z = 0^-.
struct InterfaceFlux {
  /// Incident and reflected power carried by propagating rigid modes.
  double incident = 0.0;
  double reflected = 0.0;
  /// ½ Re sum (A+B) conj(Kr (A-B)) / K over all rigid modes.
  double net = 0.0;
};
InterfaceFlux interface_flux(const JunctionSolution& sol, const PowerOptions& opts = {});

/// Evenly spaced grid of `points` values on [z0, z1].
std::vector<double> linear_grid(double z0, double z1, int points);

}  // namespace ductmodes
