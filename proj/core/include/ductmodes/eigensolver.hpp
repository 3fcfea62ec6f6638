#pragma once

// Transverse eigenvalues of a circular duct with a locally reacting wall.
//
// The wall is described either by its admittance beta0 (dispersion relation
// gamma J'_m/J_m = Y with Y = -j K beta0) or by its impedance Z0 = 1/beta0,
// in which case the reciprocal relation J_m/(gamma J'_m) = j Z0 / K is solved.
// The impedance form stays finite for a pressure-release wall (Z0 = 0).

#include <optional>
#include <string>
#include <vector>

#include "ductmodes/common.hpp"

namespace ductmodes {

struct BoundarySpec {
  double K = 30.0;
  int m = 0;
  cplx beta0{};
  /// Set for impedance-form walls; beta0 is then ignored.
  std::optional<cplx> impedance;

  static BoundarySpec admittance(double K, int m, cplx beta0);
  static BoundarySpec with_impedance(double K, int m, cplx z0);

  bool impedance_form() const { return impedance.has_value(); }
  /// Y = -j K beta0. Throws InvalidArgument for a pressure-release wall.
  cplx Y() const;
  void validate() const;
};

enum class ModeClass { Guided, Surface };
const char* to_string(ModeClass c);

struct Mode {
  int m = 0;
  int n = 0;
  cplx gamma{};
  cplx k_axial{};
  /// Lambda = integral of |phi~|^2 r dr over [0,1], phi~(r) = scale * J_m(gamma r).
  double norm = 0.0;
  /// 1/J_m(gamma) for admittance walls, 1/(gamma J'_m(gamma)) for impedance walls.
  cplx scale{};
  ModeClass cls = ModeClass::Guided;
  /// |f(gamma)| of the dispersion residual in the form that was solved.
  double residual = 0.0;
};

struct ModeSet {
  BoundarySpec spec;
  std::vector<Mode> modes;
  bool near_ep = false;
  double min_separation = 0.0;
  /// Argument-principle census of the completeness rectangle (find_modes only).
  int zeros_in_rectangle = -1;
  int roots_in_rectangle = -1;
  std::vector<std::string> warnings;

  int truncation() const { return static_cast<int>(modes.size()); }
};

struct FindOptions {
  double surface_threshold = 3.0;
  int homotopy_steps = 64;
  /// Extra rigid seeds continued beyond `count`.
  int extra_seeds = 4;
  bool check_completeness = true;
};

struct TrackOptions {
  int max_substeps = 20000;
  double step_fraction = 0.3;
  double predictor_fraction = 0.1;
  double surface_threshold = 3.0;
};

/// First `count` non-negative zeros of J'_m, ascending (0 is the first for m = 0).
std::vector<double> rigid_modes(int m, int count);

/// First `count` positive zeros of J_m.
std::vector<double> bessel_zeros(int m, int count);

/// Dispersion residual and its gamma-derivative in the form selected by the boundary.
struct Residual {
  cplx f;
  cplx df;
};
Residual dispersion_residual(const BoundarySpec& spec, cplx gamma);

/// Newton polish of a single root. Returns nullopt when Newton fails to settle.
std::optional<cplx> polish_root(const BoundarySpec& spec, cplx guess, int max_iter = 60);

cplx axial_wavenumber(double K, cplx gamma);
ModeClass classify(cplx gamma, double threshold = 3.0);
ModeClass classify(const Mode& mode, double threshold = 3.0);

/// Builds a Mode (scale, norm, axial wavenumber, class) for a known root.
Mode make_mode(const BoundarySpec& spec, int n, cplx gamma, double surface_threshold = 3.0);

/// Sorted, residual-checked roots with an argument-principle completeness
/// check. Throws CompletenessFailure when the winding count cannot be matched.
ModeSet find_modes(const BoundarySpec& spec, int count, const FindOptions& opts = {});

/// Number of zeros of the dispersion residual inside the rectangle, from the
/// winding number of f around its boundary plus the known poles inside.
struct Rect {
  double re_lo, re_hi, im_lo, im_hi;
};
int count_zeros(const BoundarySpec& spec, const Rect& rect);

/// Continuation of every mode in `seed` along admittance nodes. The first
/// node is the seed admittance itself or a continuation from it. Roots are
/// reported on the sheet reached by continuity (Re gamma may become negative).
/// Throws StepCollapse if a segment exhausts its substep budget.
std::vector<ModeSet> track_path(const BoundarySpec& spec0, const std::vector<cplx>& path,
                                const ModeSet& seed, const TrackOptions& opts = {});

/// gamma with the sign chosen so Re >= 0 (ties: Im >= 0); roots come in +/- pairs.
cplx canonical_root(cplx gamma);

}  // namespace ductmodes
