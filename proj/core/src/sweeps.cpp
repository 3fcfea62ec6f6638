#include "ductmodes/sweeps.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "ductmodes/nonortho.hpp"
#include "parallel.hpp"

namespace ductmodes {

namespace {

std::vector<double> axis(double lo, double hi, int n) {
  std::vector<double> a(n);
  for (int k = 0; k < n; ++k) a[k] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  return a;
}

// Continues `start` through `nodes`. A single track_path call is tried first;
// if it fails the nodes are retried one at a time and failures are skipped.
std::vector<std::optional<ModeSet>> continue_nodes(const ModeSet& start, const std::vector<cplx>& nodes,
                                                   const TrackOptions& opts) {
  std::vector<std::optional<ModeSet>> out(nodes.size());
  if (nodes.empty()) return out;
  try {
    std::vector<ModeSet> all = track_path(start.spec, nodes, start, opts);
    for (std::size_t k = 0; k < nodes.size(); ++k) out[k] = std::move(all[k]);
    return out;
  } catch (const Error&) {
  }
  ModeSet cur = start;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    try {
      std::vector<ModeSet> one = track_path(cur.spec, {nodes[k]}, cur, opts);
      cur = one[0];
      out[k] = std::move(one[0]);
    } catch (const Error&) {
    }
  }
  return out;
}

}  // namespace

const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::GammaRe: return "gamma_re";
    case Quantity::GammaIm: return "gamma_im";
    case Quantity::Kp: return "kp";
    case Quantity::SijRe: return "sij_re";
    case Quantity::SijIm: return "sij_im";
  }
  return "unknown";
}

Quantity quantity_from_string(const std::string& s) {
  for (Quantity q : {Quantity::GammaRe, Quantity::GammaIm, Quantity::Kp, Quantity::SijRe, Quantity::SijIm}) {
    if (s == to_string(q)) return q;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown sweep quantity '" + s + "'");
}

std::vector<cplx> sweep_row_path(const SweepRequest& req) {
  std::vector<cplx> path{{req.re_min, 0.0}, {req.re_min, req.im_min}};
  for (double re : axis(req.re_min, req.re_max, req.n_re)) path.emplace_back(re, req.im_min);
  return path;
}

GridResult sweep(const SweepRequest& req) {
  if (req.n_re < 1 || req.n_im < 1 || req.n_re > 512 || req.n_im > 512) {
    throw Error(ErrorCode::InvalidArgument, "sweep resolution must lie in [1, 512] per axis");
  }
  if (req.re_max < req.re_min || req.im_max < req.im_min) {
    throw Error(ErrorCode::InvalidArgument, "sweep ranges must satisfy min <= max");
  }
  if (req.n_modes < 1) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one mode");
  const bool sij = req.quantity == Quantity::SijRe || req.quantity == Quantity::SijIm;
  if (sij && (req.sij_pair.first < 0 || req.sij_pair.second < 0 || req.sij_pair.first >= req.n_modes ||
              req.sij_pair.second >= req.n_modes)) {
    throw Error(ErrorCode::InvalidArgument, "S_ij pair indices must be below n_modes");
  }

  GridResult res;
  res.re_axis = axis(req.re_min, req.re_max, req.n_re);
  res.im_axis = axis(req.im_min, req.im_max, req.n_im);
  res.quantity = req.quantity;
  res.n_modes = req.n_modes;
  res.layers = sij ? 1 : req.n_modes;
  const std::size_t cells = static_cast<std::size_t>(req.n_re) * req.n_im;
  res.values.assign(cells * res.layers, NAN);
  res.gamma.assign(cells * req.n_modes, cplx{NAN, NAN});
  res.mask.assign(cells, 1);

  const BoundarySpec spec0 = BoundarySpec::admittance(req.K, req.m, 0.0);
  const ModeSet seed = find_modes(spec0, req.n_modes);
  const std::vector<cplx> row_path = sweep_row_path(req);
  std::vector<std::optional<ModeSet>> row = continue_nodes(seed, row_path, req.track);
  row.erase(row.begin(), row.begin() + 2);

  auto store = [&](int i_im, int i_re, const ModeSet& ms) {
    const std::size_t cell = static_cast<std::size_t>(i_im) * req.n_re + i_re;
    try {
      for (int k = 0; k < req.n_modes; ++k) {
        res.gamma[static_cast<std::size_t>(k) * cells + cell] = ms.modes[k].gamma;
      }
      if (sij) {
        const cplx s = mutual_overlap(ms.modes[req.sij_pair.first], ms.modes[req.sij_pair.second]);
        res.values[cell] = req.quantity == Quantity::SijRe ? s.real() : s.imag();
      } else {
        for (int k = 0; k < req.n_modes; ++k) {
          const cplx g = ms.modes[k].gamma;
          double v = 0.0;
          switch (req.quantity) {
            case Quantity::GammaRe: v = g.real(); break;
            case Quantity::GammaIm: v = g.imag(); break;
            default: v = std::log10(kp(ms.modes[k]).kp); break;
          }
          res.values[static_cast<std::size_t>(k) * cells + cell] = v;
        }
      }
      res.mask[cell] = 0;
    } catch (const Error&) {
    }
  };

  detail::parallel_for(req.n_re, [&](int i) {
    if (!row[i]) return;
    store(0, i, *row[i]);
    std::vector<cplx> nodes;
    for (int j = 1; j < req.n_im; ++j) nodes.emplace_back(res.re_axis[i], res.im_axis[j]);
    const auto col = continue_nodes(*row[i], nodes, req.track);
    for (int j = 1; j < req.n_im; ++j) {
      if (col[j - 1]) store(j, i, *col[j - 1]);
    }
  });

  std::size_t masked = 0;
  for (auto v : res.mask) masked += v;
  if (masked > 0) {
    std::ostringstream os;
    os << masked << " of " << cells << " cells masked (continuation failed)";
    res.warnings.push_back(os.str());
  }

  if (req.ep_markers) {
    try {
      for (const EpRecord& ep : enumerate_eps(req.m, req.K, 10)) {
        if (ep.beta_ep.real() >= req.re_min && ep.beta_ep.real() <= req.re_max &&
            ep.beta_ep.imag() >= req.im_min && ep.beta_ep.imag() <= req.im_max) {
          res.ep_markers.push_back(ep);
        }
      }
    } catch (const Error& e) {
      res.warnings.push_back(std::string("exceptional-point markers unavailable: ") + e.what());
    }
  }
  return res;
}

}  // namespace ductmodes
