#include "ductmodes/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "ductmodes/special_fn.hpp"

namespace ductmodes {

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Both dispersion functions are even in gamma, so roots are continued in
// w = gamma^2 where the mirror pair +/-gamma is a single simple root.
struct WResidual {
  cplx f;
  cplx fw;
};

// F(gamma) is g = gamma J'_m/J_m (admittance walls) or q = 1/g (impedance walls).
struct WValue {
  cplx F;
  cplx Fw;
};

WValue eval_w(bool impedance, int m, cplx w) {
  const cplx gamma = std::sqrt(w);
  if (impedance && std::abs(gamma) >= 1e-3) {
    const ReciprocalTerms r = reciprocal_dispersion_terms(m, gamma);
    return {r.q, r.dq / (2.0 * gamma)};
  }
  const DispersionTerms d = dispersion_terms(m, gamma);
  cplx gw;
  if (std::abs(gamma) < 1e-3) {
    const double md = m;
    const double a = -1.0 / (2.0 * (md + 1.0));
    const double b = -1.0 / (8.0 * (md + 1.0) * (md + 1.0) * (md + 2.0));
    gw = a + 2.0 * b * w;
  } else {
    gw = d.dg / (2.0 * gamma);
  }
  if (!impedance) return {d.g, gw};
  if (m == 0) throw Error(ErrorCode::Pole, "reciprocal dispersion function has a double pole at gamma = 0");
  return {1.0 / d.g, -gw / (d.g * d.g)};
}

// Target value T of the dispersion function and dT/dp for the wall parameter p
// (beta0 for admittance walls, Z0 for impedance walls).
cplx target(const BoundarySpec& spec, cplx p) {
  return spec.impedance_form() ? kJ * p / spec.K : -kJ * spec.K * p;
}
cplx target_slope(const BoundarySpec& spec) {
  return spec.impedance_form() ? kJ / spec.K : -kJ * spec.K;
}
cplx wall_parameter(const BoundarySpec& spec) {
  return spec.impedance_form() ? *spec.impedance : spec.beta0;
}
BoundarySpec with_parameter(const BoundarySpec& spec, cplx p) {
  BoundarySpec s = spec;
  if (s.impedance_form()) {
    s = BoundarySpec::with_impedance(spec.K, spec.m, p);
  } else {
    s.beta0 = p;
  }
  return s;
}
double residual_scale(const BoundarySpec& spec) {
  return std::max(1.0, std::abs(target(spec, wall_parameter(spec))));
}

WResidual residual_w(const BoundarySpec& spec, cplx T, cplx w) {
  const WValue v = eval_w(spec.impedance_form(), spec.m, w);
  return {v.F - T, v.Fw};
}

struct NewtonResult {
  cplx w;
  int iterations;
  bool ok;
};

NewtonResult newton_w(const BoundarySpec& spec, cplx T, cplx w, int max_iter, double tol_scale) {
  const double tol = 1e-10 * tol_scale;
  for (int it = 0; it < max_iter; ++it) {
    WResidual r;
    try {
      r = residual_w(spec, T, w);
    } catch (const Error&) {
      return {w, it, false};
    }
    if (r.f == cplx{}) return {w, it, true};
    if (r.fw == cplx{} || !is_finite(r.fw)) return {w, it, false};
    cplx dw = r.f / r.fw;
    const double cap = 4.0 * std::max(1.0, std::sqrt(std::abs(w)));
    if (std::abs(dw) > cap) dw *= cap / std::abs(dw);
    w -= dw;
    if (!is_finite(w)) return {w, it, false};
    if (std::abs(dw) <= 1e-15 * std::max(1.0, std::abs(w))) {
      try {
        const WResidual fin = residual_w(spec, T, w);
        return {w, it + 1, std::abs(fin.f) <= tol};
      } catch (const Error&) {
        return {w, it + 1, false};
      }
    }
  }
  try {
    const WResidual fin = residual_w(spec, T, w);
    return {w, max_iter, std::abs(fin.f) <= tol};
  } catch (const Error&) {
    return {w, max_iter, false};
  }
}

// Secant iteration used when Newton stagnates.
NewtonResult secant_w(const BoundarySpec& spec, cplx T, cplx w0, int max_iter, double tol_scale) {
  cplx w1 = w0 * (1.0 + 1e-6) + 1e-6;
  try {
    cplx f0 = residual_w(spec, T, w0).f;
    cplx f1 = residual_w(spec, T, w1).f;
    for (int it = 0; it < max_iter; ++it) {
      if (f1 == f0) break;
      const cplx w2 = w1 - f1 * (w1 - w0) / (f1 - f0);
      w0 = w1;
      f0 = f1;
      w1 = w2;
      f1 = residual_w(spec, T, w1).f;
      if (!is_finite(w1)) return {w1, it, false};
      if (std::abs(w1 - w0) <= 1e-15 * std::max(1.0, std::abs(w1))) break;
    }
    return {w1, max_iter, std::abs(f1) <= 1e-10 * tol_scale};
  } catch (const Error&) {
    return {w1, max_iter, false};
  }
}

std::optional<cplx> solve_w(const BoundarySpec& spec, cplx T, cplx w, double tol_scale) {
  NewtonResult r = newton_w(spec, T, w, 80, tol_scale);
  if (!r.ok) r = secant_w(spec, T, r.w, 60, tol_scale);
  if (!r.ok) return std::nullopt;
  return r.w;
}

// Continues a root from parameter t0 to 1 along T(t) = t * T_target.
std::optional<cplx> homotopy(const BoundarySpec& spec, cplx T_target, cplx w, int steps) {
  double t = 0.0;
  double h = 1.0 / steps;
  const double scale = std::max(1.0, std::abs(T_target));
  for (int attempts = 0; attempts < 40 * steps && t < 1.0; ++attempts) {
    h = std::min(h, 1.0 - t);
    WResidual r;
    try {
      r = residual_w(spec, t * T_target, w);
    } catch (const Error&) {
      return std::nullopt;
    }
    const cplx wp = w + h * T_target / r.fw;
    const NewtonResult nr = newton_w(spec, (t + h) * T_target, wp, 12, scale);
    const double spacing = kTwoPi * std::max(1.0, std::sqrt(std::abs(w)));
    if (nr.ok && std::abs(nr.w - w) <= 0.3 * spacing && std::abs(nr.w - wp) <= 0.05 * spacing) {
      w = nr.w;
      t += h;
      h *= 1.5;
    } else {
      h *= 0.5;
      if (h < 1e-10) return std::nullopt;
    }
  }
  if (t < 1.0) return std::nullopt;
  return w;
}

std::vector<double> real_zeros(const std::function<double(double)>& f, double x0, int count) {
  std::vector<double> out;
  out.reserve(count);
  double a = x0;
  double fa = f(a);
  const double step = 0.05;
  while (static_cast<int>(out.size()) < count) {
    const double b = a + step;
    const double fb = f(b);
    if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
      double lo = a, hi = b, flo = fa;
      for (int it = 0; it < 200 && hi - lo > 4e-16 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    }
    a = b;
    fa = fb;
  }
  return out;
}

bool inside(const Rect& r, cplx z) {
  return z.real() > r.re_lo && z.real() < r.re_hi && z.imag() > r.im_lo && z.imag() < r.im_hi;
}

// Accumulated change of arg f along the segment a -> b, refined until each
// piece turns by less than half a radian.
double arg_change(const BoundarySpec& spec, cplx a, cplx b, cplx fa, cplx fb, int depth) {
  const cplx mid = 0.5 * (a + b);
  const cplx fm = dispersion_residual(spec, mid).f;
  const double d1 = std::arg(fm / fa);
  const double d2 = std::arg(fb / fm);
  const double d = std::arg(fb / fa);
  if ((std::abs(d1) < 0.5 && std::abs(d2) < 0.5 && std::abs(d1 + d2 - d) < 1e-9) || depth > 40) {
    return d1 + d2;
  }
  return arg_change(spec, a, mid, fa, fm, depth + 1) + arg_change(spec, mid, b, fm, fb, depth + 1);
}

int poles_inside(const BoundarySpec& spec, const Rect& rect) {
  if (!(rect.im_lo < 0.0 && rect.im_hi > 0.0)) return 0;
  int poles = 0;
  if (spec.impedance_form()) {
    if (spec.m == 0 && rect.re_lo < 0.0 && rect.re_hi > 0.0) poles += 2;
    const int need = static_cast<int>(rect.re_hi / 3.0) + 4;
    for (double a : rigid_modes(spec.m, need)) {
      if (a > 0.0 && a > rect.re_lo && a < rect.re_hi) ++poles;
      if (a > 0.0 && -a > rect.re_lo && -a < rect.re_hi) ++poles;
    }
  } else {
    const int need = static_cast<int>(rect.re_hi / 3.0) + 4;
    for (double a : bessel_zeros(spec.m, need)) {
      if (a > rect.re_lo && a < rect.re_hi) ++poles;
      if (-a > rect.re_lo && -a < rect.re_hi) ++poles;
    }
  }
  return poles;
}

std::vector<double> pole_positions(const BoundarySpec& spec, double re_hi) {
  const int need = static_cast<int>(re_hi / 3.0) + 4;
  std::vector<double> p = spec.impedance_form() ? rigid_modes(spec.m, need) : bessel_zeros(spec.m, need);
  return p;
}

// Number of roots (with mirrors) of a root list inside a rectangle.
int known_inside(const std::vector<cplx>& roots, const Rect& r) {
  int k = 0;
  for (cplx g : roots) {
    if (inside(r, g)) ++k;
    if (inside(r, -g)) ++k;
  }
  return k;
}

void dedupe_push(std::vector<cplx>& roots, cplx g) {
  g = canonical_root(g);
  for (cplx r : roots) {
    if (std::abs(r - g) <= 1e-8 * std::max(1.0, std::abs(g))) return;
  }
  roots.push_back(g);
}

bool root_less(cplx a, cplx b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Moves rectangle edges off roots, mirrors and poles so the contour integral
// is well conditioned.
Rect nudge(Rect r, const std::vector<cplx>& roots, const std::vector<double>& poles) {
  auto clear_vertical = [&](double x) {
    for (cplx g : roots) {
      for (cplx z : {g, -g}) {
        if (std::abs(z.real() - x) < 0.02 && z.imag() > r.im_lo - 0.02 && z.imag() < r.im_hi + 0.02) {
          return false;
        }
      }
    }
    for (double p : poles) {
      if (std::abs(p - x) < 0.05 || std::abs(-p - x) < 0.05) return false;
    }
    return true;
  };
  auto clear_horizontal = [&](double y) {
    for (cplx g : roots) {
      for (cplx z : {g, -g}) {
        if (std::abs(z.imag() - y) < 0.02 && z.real() > r.re_lo - 0.02 && z.real() < r.re_hi + 0.02) {
          return false;
        }
      }
    }
    return std::abs(y) > 0.05;
  };
  for (int k = 0; k < 50 && !clear_vertical(r.re_hi); ++k) r.re_hi += 0.037;
  for (int k = 0; k < 50 && !clear_vertical(r.re_lo); ++k) r.re_lo -= 0.031;
  for (int k = 0; k < 50 && !clear_horizontal(r.im_hi); ++k) r.im_hi += 0.041;
  for (int k = 0; k < 50 && !clear_horizontal(r.im_lo); ++k) r.im_lo -= 0.029;
  return r;
}

// Deflated Newton in gamma: steps on f / prod (gamma - known), so that known
// roots repel the iterate.
std::optional<cplx> deflated_newton(const BoundarySpec& spec, cplx g, const std::vector<cplx>& known) {
  for (int it = 0; it < 100; ++it) {
    Residual r;
    try {
      r = dispersion_residual(spec, g);
    } catch (const Error&) {
      return std::nullopt;
    }
    if (r.f == cplx{}) return g;
    cplx ratio = r.df / r.f;
    for (cplx k : known) {
      ratio -= 1.0 / (g - k);
      ratio -= 1.0 / (g + k);
    }
    if (ratio == cplx{}) return std::nullopt;
    cplx dg = 1.0 / ratio;
    if (std::abs(dg) > 2.0) dg *= 2.0 / std::abs(dg);
    g -= dg;
    if (!is_finite(g)) return std::nullopt;
    if (std::abs(dg) < 1e-12 * std::max(1.0, std::abs(g))) break;
  }
  return polish_root(spec, g);
}

void recover(const BoundarySpec& spec, const Rect& rect, std::vector<cplx>& roots,
             const std::vector<double>& poles, int depth, int& budget) {
  if (budget <= 0) return;
  --budget;
  const int zeros = count_zeros(spec, rect);
  if (zeros <= known_inside(roots, rect)) return;
  const cplx centre{0.5 * (rect.re_lo + rect.re_hi), 0.5 * (rect.im_lo + rect.im_hi)};
  for (cplx start : {centre, centre + cplx{0.1, 0.07}, centre - cplx{0.13, 0.05}}) {
    if (auto g = deflated_newton(spec, start, roots)) {
      const std::size_t before = roots.size();
      dedupe_push(roots, *g);
      if (roots.size() > before) {
        recover(spec, rect, roots, poles, depth, budget);
        return;
      }
    }
  }
  if (depth > 12) return;
  const double xm = centre.real();
  const double ym = centre.imag();
  const Rect quads[4] = {{rect.re_lo, xm, rect.im_lo, ym},
                         {xm, rect.re_hi, rect.im_lo, ym},
                         {rect.re_lo, xm, ym, rect.im_hi},
                         {xm, rect.re_hi, ym, rect.im_hi}};
  for (Rect q : quads) recover(spec, nudge(q, roots, poles), roots, poles, depth + 1, budget);
}

// Multiplicity two is assigned to a root where f' vanishes (a coalesced pair).
bool is_double_root(const BoundarySpec& spec, cplx g) {
  if (g == cplx{}) return false;
  try {
    const Residual r = dispersion_residual(spec, g);
    return std::abs(r.df) < 1e-6 * std::max(1.0, std::abs(g));
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

BoundarySpec BoundarySpec::admittance(double K, int m, cplx beta0) {
  BoundarySpec s;
  s.K = K;
  s.m = m;
  s.beta0 = beta0;
  return s;
}

BoundarySpec BoundarySpec::with_impedance(double K, int m, cplx z0) {
  BoundarySpec s;
  s.K = K;
  s.m = m;
  s.impedance = z0;
  s.beta0 = z0 == cplx{} ? cplx{} : 1.0 / z0;
  return s;
}

cplx BoundarySpec::Y() const {
  if (impedance_form()) {
    if (*impedance == cplx{}) {
      throw Error(ErrorCode::InvalidArgument, "pressure-release wall has no finite admittance");
    }
    return -kJ * K / *impedance;
  }
  return -kJ * K * beta0;
}

void BoundarySpec::validate() const {
  if (!(K > 0.0) || !std::isfinite(K)) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  if (m < 0 || m > kMaxBesselOrder) throw Error(ErrorCode::InvalidArgument, "m must lie in [0, 200]");
  if (impedance_form() ? !is_finite(*impedance) : !is_finite(beta0)) {
    throw Error(ErrorCode::InvalidArgument, "wall parameter must be finite");
  }
}

const char* to_string(ModeClass c) { return c == ModeClass::Guided ? "guided" : "surface"; }

std::vector<double> rigid_modes(int m, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  std::vector<double> out;
  if (m == 0) out.push_back(0.0);
  const int need = count - static_cast<int>(out.size());
  if (need > 0) {
    auto f = [m](double x) { return bessel_j_prime(m, x).real(); };
    const auto z = real_zeros(f, m == 0 ? 0.5 : std::max(0.01, m * 0.9), need);
    out.insert(out.end(), z.begin(), z.end());
  }
  return out;
}

std::vector<double> bessel_zeros(int m, int count) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  auto f = [m](double x) { return bessel_j(m, x).real(); };
  return real_zeros(f, std::max(0.01, m * 0.9), count);
}

Residual dispersion_residual(const BoundarySpec& spec, cplx gamma) {
  const cplx T = target(spec, wall_parameter(spec));
  if (spec.impedance_form()) {
    const ReciprocalTerms r = reciprocal_dispersion_terms(spec.m, gamma);
    return {r.q - T, r.dq};
  }
  const DispersionTerms d = dispersion_terms(spec.m, gamma);
  return {d.g - T, d.dg};
}

std::optional<cplx> polish_root(const BoundarySpec& spec, cplx guess, int max_iter) {
  const cplx T = target(spec, wall_parameter(spec));
  const double scale = residual_scale(spec);
  NewtonResult r = newton_w(spec, T, guess * guess, max_iter, scale);
  if (!r.ok) r = secant_w(spec, T, r.w, 60, scale);
  if (!r.ok) return std::nullopt;
  cplx g = std::sqrt(r.w);
  if (std::abs(g + guess) < std::abs(g - guess)) g = -g;
  return g;
}

cplx canonical_root(cplx gamma) {
  if (gamma.real() < 0.0 || (gamma.real() == 0.0 && gamma.imag() < 0.0)) return -gamma;
  return gamma;
}

cplx axial_wavenumber(double K, cplx gamma) {
  cplx k = std::sqrt(K * K - gamma * gamma);
  if (k.imag() > 0.0 || (k.imag() == 0.0 && k.real() < 0.0)) k = -k;
  return k;
}

ModeClass classify(cplx gamma, double threshold) {
  return canonical_root(gamma).imag() > threshold ? ModeClass::Surface : ModeClass::Guided;
}

ModeClass classify(const Mode& mode, double threshold) { return classify(mode.gamma, threshold); }

Mode make_mode(const BoundarySpec& spec, int n, cplx gamma, double surface_threshold) {
  Mode md;
  md.m = spec.m;
  md.n = n;
  md.gamma = gamma;
  md.k_axial = axial_wavenumber(spec.K, gamma);
  md.cls = classify(gamma, surface_threshold);
  if (spec.impedance_form()) {
    const BesselTriple t = bessel_j_triple(spec.m, gamma);
    const cplx d = static_cast<double>(spec.m) * t.value - gamma * t.next;
    if (d == cplx{}) throw Error(ErrorCode::Pole, "gamma J'_m(gamma) vanishes at an impedance-wall root");
    md.scale = 1.0 / d;
  } else {
    const cplx j = bessel_j(spec.m, gamma);
    if (j == cplx{}) throw Error(ErrorCode::Pole, "J_m(gamma) vanishes at an admittance-wall root");
    md.scale = 1.0 / j;
  }
  md.norm = std::norm(md.scale) * lommel_overlap(spec.m, gamma, std::conj(gamma)).real();
  try {
    md.residual = std::abs(dispersion_residual(spec, gamma).f);
  } catch (const Error&) {
    md.residual = 0.0;
  }
  return md;
}

int count_zeros(const BoundarySpec& spec, const Rect& rect) {
  const cplx corners[5] = {{rect.re_lo, rect.im_lo}, {rect.re_hi, rect.im_lo},
                           {rect.re_hi, rect.im_hi}, {rect.re_lo, rect.im_hi},
                           {rect.re_lo, rect.im_lo}};
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const cplx a = corners[e];
    const cplx b = corners[e + 1];
    const int pieces = std::max(4, static_cast<int>(std::ceil(std::abs(b - a) / 0.1)));
    cplx za = a;
    cplx fa = dispersion_residual(spec, za).f;
    for (int k = 1; k <= pieces; ++k) {
      const cplx zb = a + (b - a) * (static_cast<double>(k) / pieces);
      const cplx fb = dispersion_residual(spec, zb).f;
      total += arg_change(spec, za, zb, fa, fb, 0);
      za = zb;
      fa = fb;
    }
  }
  const double winding = total / kTwoPi;
  return static_cast<int>(std::lround(winding)) + poles_inside(spec, rect);
}

ModeSet find_modes(const BoundarySpec& spec, int count, const FindOptions& opts) {
  spec.validate();
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  const int seeds = count + std::max(0, opts.extra_seeds);
  const std::vector<double> base = spec.impedance_form() ? bessel_zeros(spec.m, seeds)
                                                         : rigid_modes(spec.m, seeds);
  const cplx T = target(spec, wall_parameter(spec));
  const double scale = residual_scale(spec);
  ModeSet out;
  out.spec = spec;

  std::vector<cplx> roots;
  for (double a : base) {
    if (auto w = homotopy(spec, T, cplx{a * a}, std::max(4, opts.homotopy_steps))) {
      if (auto w2 = solve_w(spec, T, *w, scale)) dedupe_push(roots, std::sqrt(*w2));
    }
  }

  // Surface-mode seeds: the large-|gamma| asymptote gamma ≈ j(T + 1/2) of the
  // admittance form and a coarse scan of the strip Im(gamma) >= 3.
  const double re_top = base.back() + 2.0;
  double im_top = spec.K;
  if (!spec.impedance_form() || *spec.impedance != cplx{}) {
    const cplx Y = spec.Y();
    const cplx asym = kJ * (Y + 0.5);
    im_top = std::max(im_top, std::abs(Y) + 5.0);
    if (auto g = polish_root(spec, canonical_root(asym))) dedupe_push(roots, *g);
  }
  im_top = std::min(im_top, kMaxBesselImag - 10.0);
  {
    const int nx = static_cast<int>(std::ceil(re_top)) + 1;
    const int ny = static_cast<int>(std::ceil(im_top - 3.0)) + 1;
    std::vector<double> mag(static_cast<std::size_t>(nx) * ny, INFINITY);
    auto at = [&](int i, int j) -> double& { return mag[static_cast<std::size_t>(j) * nx + i]; };
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        try {
          at(i, j) = std::abs(dispersion_residual(spec, cplx{double(i), 3.0 + j}).f);
        } catch (const Error&) {
        }
      }
    }
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double v = at(i, j);
        if (!std::isfinite(v)) continue;
        bool local_min = true;
        for (int dj = -1; dj <= 1 && local_min; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            if (di == 0 && dj == 0) continue;
            const int ii = i + di, jj = j + dj;
            if (ii < 0 || jj < 0 || ii >= nx || jj >= ny) continue;
            if (at(ii, jj) < v) {
              local_min = false;
              break;
            }
          }
        }
        if (local_min) {
          if (auto g = polish_root(spec, cplx{double(i), 3.0 + j})) dedupe_push(roots, *g);
        }
      }
    }
  }

  std::sort(roots.begin(), roots.end(), root_less);

  if (opts.check_completeness) {
    Rect rect{-0.5, base[count - 1] + 2.0, -1.0, std::max(spec.K, 1.0)};
    if (static_cast<int>(roots.size()) >= count) {
      rect.re_hi = std::max(rect.re_hi, roots[count - 1].real() + 1.0);
    }
    for (cplx g : roots) {
      for (cplx z : {g, -g}) {
        if (z.real() >= rect.re_lo && z.real() <= rect.re_hi) {
          rect.im_lo = std::min(rect.im_lo, z.imag() - 1.0);
          rect.im_hi = std::max(rect.im_hi, z.imag() + 1.0);
        }
      }
    }
    rect.im_lo = std::max(rect.im_lo, -(kMaxBesselImag - 5.0));
    rect.im_hi = std::min(rect.im_hi, kMaxBesselImag - 5.0);
    const std::vector<double> poles = pole_positions(spec, rect.re_hi + 5.0);

    auto with_multiplicity = [&](std::vector<cplx> rs) {
      std::vector<cplx> out;
      for (cplx g : rs) {
        out.push_back(g);
        if (is_double_root(spec, g)) out.push_back(g);
      }
      return out;
    };

    rect = nudge(rect, roots, poles);
    int zeros = count_zeros(spec, rect);
    std::vector<cplx> listed = with_multiplicity(roots);
    if (zeros > known_inside(listed, rect)) {
      int budget = 400;
      recover(spec, rect, roots, poles, 0, budget);
      std::sort(roots.begin(), roots.end(), root_less);
      listed = with_multiplicity(roots);
      rect = nudge(rect, roots, poles);
      zeros = count_zeros(spec, rect);
    }
    const int known = known_inside(listed, rect);
    out.zeros_in_rectangle = zeros;
    out.roots_in_rectangle = known;
    if (zeros != known) {
      std::ostringstream os;
      os << "argument principle counts " << zeros << " zeros in Re[" << rect.re_lo << ", "
         << rect.re_hi << "] x Im[" << rect.im_lo << ", " << rect.im_hi << "] but " << known
         << " roots were found";
      throw Error(ErrorCode::CompletenessFailure, os.str());
    }
    roots = listed;
  } else {
    std::vector<cplx> listed;
    for (cplx g : roots) {
      listed.push_back(g);
      if (is_double_root(spec, g)) listed.push_back(g);
    }
    roots = listed;
  }

  if (static_cast<int>(roots.size()) < count) {
    std::ostringstream os;
    os << "found " << roots.size() << " roots, " << count << " requested";
    throw Error(ErrorCode::CompletenessFailure, os.str());
  }
  roots.resize(count);
  for (int n = 0; n < count; ++n) {
    out.modes.push_back(make_mode(spec, n, roots[n], opts.surface_threshold));
    if (out.modes.back().residual > 1e-9 * scale) {
      std::ostringstream os;
      os << "root " << n << " residual " << out.modes.back().residual << " above tolerance";
      throw Error(ErrorCode::NoConvergence, os.str());
    }
  }
  out.min_separation = INFINITY;
  for (int i = 0; i < count; ++i) {
    for (int j = i + 1; j < count; ++j) {
      out.min_separation = std::min(out.min_separation, std::abs(roots[i] - roots[j]));
    }
  }
  if (out.min_separation < 1e-4) {
    out.near_ep = true;
    out.warnings.push_back("two eigenvalues closer than 1e-4: admittance is near an exceptional point");
  }
  return out;
}

std::vector<ModeSet> track_path(const BoundarySpec& spec0, const std::vector<cplx>& path,
                                const ModeSet& seed, const TrackOptions& opts) {
  spec0.validate();
  const std::size_t nm = seed.modes.size();
  std::vector<cplx> gam(nm), w(nm);
  for (std::size_t i = 0; i < nm; ++i) {
    gam[i] = seed.modes[i].gamma;
    w[i] = gam[i] * gam[i];
  }
  cplx p = wall_parameter(spec0);
  const cplx slope = target_slope(spec0);
  std::vector<ModeSet> out;
  out.reserve(path.size());

  for (cplx node : path) {
    const cplx p_start = p;
    double s = 0.0;
    double h = 1.0;
    int substeps = 0;
    while (s < 1.0) {
      if (++substeps > opts.max_substeps || h < 1e-13) {
        std::ostringstream os;
        os << "continuation step collapsed between wall parameters " << p_start << " and " << node
           << " after " << substeps << " substeps";
        throw Error(ErrorCode::StepCollapse, os.str());
      }
      h = std::min(h, 1.0 - s);
      const cplx p_new = p_start + (s + h) * (node - p_start);
      const cplx dp = p_new - p;
      const BoundarySpec sp_new = with_parameter(spec0, p_new);
      const cplx T_new = target(spec0, p_new);
      const double scale = std::max(1.0, std::abs(T_new));
      std::vector<cplx> w_new(nm);
      bool ok = true;
      for (std::size_t i = 0; i < nm && ok; ++i) {
        double d = kTwoPi * std::max(1.0, std::abs(gam[i]));
        for (std::size_t k = 0; k < nm; ++k) {
          if (k != i) d = std::min(d, std::abs(w[i] - w[k]));
        }
        if (dp == cplx{}) {
          w_new[i] = w[i];
          continue;
        }
        WResidual r;
        try {
          r = residual_w(spec0, target(spec0, p), w[i]);
        } catch (const Error&) {
          ok = false;
          break;
        }
        const cplx wp = w[i] + slope * dp / r.fw;
        const NewtonResult nr = newton_w(sp_new, T_new, wp, 20, scale);
        ok = nr.ok && std::abs(nr.w - w[i]) <= opts.step_fraction * d &&
             std::abs(nr.w - wp) <= opts.predictor_fraction * d;
        w_new[i] = nr.w;
      }
      if (!ok) {
        h *= 0.5;
        continue;
      }
      for (std::size_t i = 0; i < nm; ++i) {
        cplx g = std::sqrt(w_new[i]);
        if (std::abs(g + gam[i]) < std::abs(g - gam[i])) g = -g;
        gam[i] = g;
        w[i] = w_new[i];
      }
      p = p_new;
      s += h;
      h *= 2.0;
    }
    p = node;
    ModeSet ms;
    ms.spec = with_parameter(spec0, node);
    for (std::size_t i = 0; i < nm; ++i) {
      ms.modes.push_back(make_mode(ms.spec, seed.modes[i].n, gam[i], opts.surface_threshold));
    }
    ms.min_separation = INFINITY;
    for (std::size_t i = 0; i < nm; ++i) {
      for (std::size_t k = i + 1; k < nm; ++k) {
        ms.min_separation = std::min(ms.min_separation, std::abs(w[i] - w[k]) /
                                                            std::max(1e-300, std::abs(gam[i] + gam[k])));
      }
    }
    if (ms.min_separation < 1e-4) {
      ms.near_ep = true;
      ms.warnings.push_back("two eigenvalues closer than 1e-4: admittance is near an exceptional point");
    }
    out.push_back(std::move(ms));
  }
  return out;
}

}  // namespace ductmodes
