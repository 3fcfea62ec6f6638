#include "ductmodes/ep_locator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ductmodes/special_fn.hpp"

namespace ductmodes {

namespace {

struct EpSystem {
  cplx F1;  // g + j K beta
  cplx F2;  // g'
  cplx g1;
  cplx g2;
};

EpSystem ep_system(int m, double K, cplx gamma, cplx beta) {
  const DispersionTerms d = dispersion_terms(m, gamma);
  return {d.g + kJ * K * beta, d.dg, d.dg, d.d2g};
}

cplx segment_distance(cplx a, cplx b, cplx p) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0.0 ? ((p - a) * std::conj(ab)).real() / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return p - (a + t * ab);
}

double mirror_distance(cplx a, cplx b) { return std::min(std::abs(a - b), std::abs(a + b)); }

}  // namespace

EpRecord find_ep(int m, double K, cplx gamma, cplx beta, JacobianMode jacobian) {
  if (!(K > 0.0)) throw Error(ErrorCode::InvalidArgument, "K must be positive");
  const cplx fb = kJ * K;
  int it = 0;
  bool converged = false;
  for (; it < 100; ++it) {
    const EpSystem s = ep_system(m, K, gamma, beta);
    // Jacobian [[a11, a12], [a21, a22]] of (F1, F2) with respect to (gamma, beta).
    cplx a11, a12, a21, a22;
    if (jacobian == JacobianMode::Analytic) {
      a11 = s.g1;
      a12 = fb;
      a21 = s.g2;
      a22 = 0.0;
    } else {
      const double h = 1e-7 * std::max(1.0, std::abs(gamma));
      const EpSystem gp = ep_system(m, K, gamma + h, beta);
      const EpSystem gm = ep_system(m, K, gamma - h, beta);
      const EpSystem bp = ep_system(m, K, gamma, beta + 1e-7);
      const EpSystem bm = ep_system(m, K, gamma, beta - 1e-7);
      a11 = (gp.F1 - gm.F1) / (2.0 * h);
      a21 = (gp.F2 - gm.F2) / (2.0 * h);
      a12 = (bp.F1 - bm.F1) / 2e-7;
      a22 = (bp.F2 - bm.F2) / 2e-7;
    }
    if (std::abs(s.g2) < 1e-8) {
      std::ostringstream os;
      os << "d2f/dgamma2 = " << s.g2 << " at gamma = " << gamma << ": triple root";
      throw Error(ErrorCode::TripleRoot, os.str());
    }
    const cplx det = a11 * a22 - a12 * a21;
    if (det == cplx{}) throw Error(ErrorCode::NoConvergence, "singular exceptional-point Jacobian");
    cplx dg = (-s.F1 * a22 + s.F2 * a12) / det;
    cplx db = (-s.F2 * a11 + s.F1 * a21) / det;
    if (std::abs(dg) > 0.5) {
      const double shrink = 0.5 / std::abs(dg);
      dg *= shrink;
      db *= shrink;
    }
    gamma += dg;
    beta += db;
    if (!is_finite(gamma) || !is_finite(beta)) break;
    if (std::abs(dg) <= 1e-14 * std::max(1.0, std::abs(gamma)) &&
        std::abs(db) <= 1e-15 * std::max(1.0, std::abs(beta))) {
      converged = true;
      ++it;
      break;
    }
  }
  EpRecord ep;
  ep.m = m;
  ep.K = K;
  ep.iterations = it;
  if (is_finite(gamma) && is_finite(beta)) {
    const EpSystem s = ep_system(m, K, gamma, beta);
    ep.residual_f = std::abs(s.F1);
    ep.residual_df = std::abs(s.F2);
    ep.d2f = s.g2;
    if (!converged && ep.residual_f < 1e-12 && ep.residual_df < 1e-12) converged = true;
  }
  if (!converged || ep.residual_f > 1e-10 || ep.residual_df > 1e-10) {
    std::ostringstream os;
    os << "exceptional-point Newton did not converge from gamma = " << gamma << ", beta = " << beta;
    throw Error(ErrorCode::NoConvergence, os.str());
  }
  if (std::abs(ep.d2f) < 1e-8) throw Error(ErrorCode::TripleRoot, "triple root at exceptional point");
  ep.gamma_ep = canonical_root(gamma);
  ep.beta_ep = beta;
  ep.sqrt_coeff = -std::sqrt(-2.0 * fb / ep.d2f);
  const auto rigid = rigid_modes(m, static_cast<int>(ep.gamma_ep.real() / 2.0) + 4);
  const int below = static_cast<int>(
      std::count_if(rigid.begin(), rigid.end(), [&](double a) { return a < ep.gamma_ep.real(); }));
  const int lo = std::max(0, below - 1);
  ep.pair = {lo, lo + 1};
  return ep;
}

std::vector<EpRecord> enumerate_eps(int m, double K, int count) {
  if (count < 1 || count > 20) throw Error(ErrorCode::InvalidArgument, "count must lie in [1, 20]");
  std::vector<double> rigid = rigid_modes(m, count + 1);
  std::vector<EpRecord> out;
  for (int n = 0; n < count; ++n) {
    const double lo = rigid[n];
    const double hi = rigid[n + 1];
    cplx best{};
    double best_val = INFINITY;
    constexpr int kRe = 24;
    constexpr int kIm = 24;
    for (int i = 1; i < kRe; ++i) {
      for (int j = 0; j < kIm; ++j) {
        const cplx z{lo + (hi - lo) * i / kRe, 0.05 + (4.0 - 0.05) * j / (kIm - 1)};
        try {
          const double v = std::abs(dispersion_terms(m, z).dg);
          if (v < best_val) {
            best_val = v;
            best = z;
          }
        } catch (const Error&) {
        }
      }
    }
    try {
      const cplx beta_init = kJ * dispersion_terms(m, best).g / K;
      EpRecord ep = find_ep(m, K, best, beta_init);
      ep.pair = {n, n + 1};
      out.push_back(ep);
    } catch (const Error& e) {
      std::ostringstream os;
      os << "exceptional point " << n << " (seed gamma = " << best << ", rigid interval [" << lo << ", "
         << hi << "]): " << e.what();
      throw Error(e.code(), os.str());
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      if (std::abs(out[i].beta_ep - out[j].beta_ep) < 1e-3) {
        std::ostringstream os;
        os << "seeds " << i << " and " << j << " converged to the same exceptional point " << out[i].beta_ep;
        throw Error(ErrorCode::NoConvergence, os.str());
      }
    }
  }
  return out;
}

std::pair<cplx, cplx> local_expansion(const EpRecord& ep, cplx beta0) {
  const cplx db = beta0 - ep.beta_ep;
  if (std::abs(db) >= 1e-2) {
    std::ostringstream os;
    os << "|beta0 - beta_ep| = " << std::abs(db) << " outside the expansion disk of radius 1e-2";
    throw Error(ErrorCode::OutOfDisk, os.str());
  }
  const cplx d = ep.sqrt_coeff * std::sqrt(db);
  return {ep.gamma_ep + d, ep.gamma_ep - d};
}

EncircleResult encircle_ep(const EpRecord& ep, const std::vector<cplx>& loop, const BoundarySpec& spec,
                           int min_nodes) {
  if (loop.size() < 3) throw Error(ErrorCode::InvalidArgument, "loop needs at least three nodes");
  if (std::abs(loop.front() - loop.back()) > 1e-12 * std::max(1.0, std::abs(loop.front()))) {
    throw Error(ErrorCode::InvalidArgument, "loop is not closed (first node != last node)");
  }
  double length = 0.0;
  for (std::size_t i = 1; i < loop.size(); ++i) {
    const cplx d = segment_distance(loop[i - 1], loop[i], ep.beta_ep);
    if (std::abs(d) < 1e-6) {
      std::ostringstream os;
      os << "loop segment " << i - 1 << " passes " << std::abs(d) << " from beta_ep (< 1e-6)";
      throw Error(ErrorCode::TrackingFailure, os.str());
    }
    length += std::abs(loop[i] - loop[i - 1]);
  }
  std::vector<cplx> dense;
  for (std::size_t i = 1; i < loop.size(); ++i) {
    const double seg = std::abs(loop[i] - loop[i - 1]);
    const int pieces = std::max(1, static_cast<int>(std::ceil(seg / length * min_nodes)));
    for (int k = 1; k <= pieces; ++k) {
      dense.push_back(loop[i - 1] + (loop[i] - loop[i - 1]) * (static_cast<double>(k) / pieces));
    }
  }

  BoundarySpec start = BoundarySpec::admittance(spec.K, spec.m, loop.front());
  const ModeSet all = find_modes(start, ep.pair.second + 3);
  // The pair is the two modes nearest gamma_ep at the starting admittance.
  std::vector<Mode> sorted = all.modes;
  std::sort(sorted.begin(), sorted.end(), [&](const Mode& a, const Mode& b) {
    return mirror_distance(a.gamma, ep.gamma_ep) < mirror_distance(b.gamma, ep.gamma_ep);
  });
  ModeSet seed;
  seed.spec = start;
  seed.modes = {sorted[0], sorted[1]};
  if (seed.modes[0].n > seed.modes[1].n) std::swap(seed.modes[0], seed.modes[1]);

  std::vector<ModeSet> tracked;
  try {
    tracked = track_path(start, dense, seed);
  } catch (const Error& e) {
    throw Error(ErrorCode::TrackingFailure, std::string("encircling failed: ") + e.what());
  }
  EncircleResult res;
  res.pair = {seed.modes[0].n, seed.modes[1].n};
  res.nodes = static_cast<int>(dense.size());
  for (int k = 0; k < 2; ++k) {
    res.gamma_start[k] = seed.modes[k].gamma;
    res.gamma_end[k] = tracked.back().modes[k].gamma;
  }
  for (int k = 0; k < 2; ++k) {
    const double d0 = mirror_distance(res.gamma_end[k], res.gamma_start[0]);
    const double d1 = mirror_distance(res.gamma_end[k], res.gamma_start[1]);
    res.permutation[k] = d0 <= d1 ? seed.modes[0].n : seed.modes[1].n;
  }
  if (res.permutation[0] == res.permutation[1]) {
    throw Error(ErrorCode::TrackingFailure, "both tracked modes ended on the same eigenvalue");
  }
  return res;
}

TwoLevelEigen two_level_eigen(const TwoLevelModel& mdl) {
  if (mdl.c == cplx{}) throw Error(ErrorCode::InvalidArgument, "two-level coupling c must be nonzero");
  const cplx off = mdl.lambda * mdl.c;
  const cplx diff = mdl.alpha1 - mdl.alpha2;
  TwoLevelEigen e;
  e.R = std::sqrt(diff * diff + 4.0 * off * off);
  // Branch of R that reduces to alpha1 - alpha2 as lambda -> 0.
  if ((e.R * std::conj(diff)).real() < 0.0) e.R = -e.R;
  e.gamma1 = 0.5 * (mdl.alpha1 + mdl.alpha2 + e.R);
  e.gamma2 = 0.5 * (mdl.alpha1 + mdl.alpha2 - e.R);
  auto vector_for = [&](cplx g) {
    // Rows of (H - g I) give the two candidate null vectors; keep the larger.
    std::array<cplx, 2> a{off, g - mdl.alpha1};
    std::array<cplx, 2> b{g - mdl.alpha2, off};
    const double na = std::norm(a[0]) + std::norm(a[1]);
    const double nb = std::norm(b[0]) + std::norm(b[1]);
    std::array<cplx, 2> v = na >= nb ? a : b;
    double n = std::sqrt(std::max(na, nb));
    if (n == 0.0) {
      v = {1.0, 0.0};
      n = 1.0;
    }
    return std::array<cplx, 2>{v[0] / n, v[1] / n};
  };
  e.v1 = vector_for(e.gamma1);
  e.v2 = vector_for(e.gamma2);
  if (off == cplx{} && diff == cplx{}) e.v2 = {0.0, 1.0};
  return e;
}

}  // namespace ductmodes
