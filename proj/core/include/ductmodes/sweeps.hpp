#pragma once

// Admittance-plane lattices of eigenvalues and nonorthogonality metrics with
// mode identity carried by continuation from the rigid wall.
//
// Sheet assembly: the modes are continued from beta0 = 0 to the lower-left
// corner, along the bottom row, and then up each column. Branch cuts of the
// resulting sheets therefore run from each exceptional point towards +Im(beta0).

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ductmodes/ep_locator.hpp"

namespace ductmodes {

enum class Quantity { GammaRe, GammaIm, Kp, SijRe, SijIm };
const char* to_string(Quantity q);
Quantity quantity_from_string(const std::string& s);

struct SweepRequest {
  double K = 30.0;
  int m = 0;
  double re_min = 0.0, re_max = 0.0;
  double im_min = 0.0, im_max = 0.0;
  int n_re = 1, n_im = 1;
  Quantity quantity = Quantity::GammaRe;
  /// Modes continued from the rigid roots 0 .. n_modes-1.
  int n_modes = 2;
  std::pair<int, int> sij_pair{0, 1};
  bool ep_markers = true;
  TrackOptions track;
};

struct GridResult {
  std::vector<double> re_axis;
  std::vector<double> im_axis;
  Quantity quantity = Quantity::GammaRe;
  /// Number of lattices in `values`: n_modes, or 1 for the S_ij quantities.
  int layers = 0;
  int n_modes = 0;
  /// values[(layer * n_im + i_im) * n_re + i_re]; log10 K_p for Quantity::Kp.
  std::vector<double> values;
  /// gamma[(mode * n_im + i_im) * n_re + i_re] on the continued sheets.
  std::vector<cplx> gamma;
  /// 1 where the cell could not be computed.
  std::vector<std::uint8_t> mask;
  std::vector<EpRecord> ep_markers;
  std::vector<std::string> warnings;

  int n_re() const { return static_cast<int>(re_axis.size()); }
  int n_im() const { return static_cast<int>(im_axis.size()); }
  double value(int layer, int i_im, int i_re) const {
    return values[(static_cast<std::size_t>(layer) * n_im() + i_im) * n_re() + i_re];
  }
  cplx gamma_at(int mode, int i_im, int i_re) const {
    return gamma[(static_cast<std::size_t>(mode) * n_im() + i_im) * n_re() + i_re];
  }
  bool masked(int i_im, int i_re) const {
    return mask[static_cast<std::size_t>(i_im) * n_re() + i_re] != 0;
  }
};

/// Columns are independent jobs run on worker_threads(); the result does not
/// depend on the thread count. Cells that fail are masked, never fatal.
GridResult sweep(const SweepRequest& req);

/// Nodes of the bottom-row continuation path used by sweep: the corner
/// approach (re_min, 0), (re_min, im_min) followed by the row itself.
std::vector<cplx> sweep_row_path(const SweepRequest& req);

}  // namespace ductmodes
