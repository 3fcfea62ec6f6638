#include "ductmodes_cli/run.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "ductmodes/ep_locator.hpp"
#include "ductmodes/junction.hpp"
#include "ductmodes/nonortho.hpp"
#include "ductmodes/power.hpp"
#include "ductmodes/sweeps.hpp"
#include "ductmodes/version.hpp"

namespace ductmodes::cli {

using nlohmann::json;

namespace {

json complex_array(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(complex_json(z));
  return a;
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows; ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols; ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json mode_json(const Mode& md) {
  return {{"n", md.n},
          {"gamma", complex_json(md.gamma)},
          {"k_axial", complex_json(md.k_axial)},
          {"class", to_string(md.cls)},
          {"residual", md.residual}};
}

json modeset_json(const ModeSet& ms) {
  json modes = json::array();
  for (const Mode& md : ms.modes) modes.push_back(mode_json(md));
  return {{"modes", modes},
          {"near_ep", ms.near_ep},
          {"min_separation", ms.min_separation},
          {"zeros_in_rectangle", ms.zeros_in_rectangle},
          {"roots_in_rectangle", ms.roots_in_rectangle}};
}

double max_residual(const ModeSet& ms) {
  double r = 0.0;
  for (const Mode& md : ms.modes) r = std::max(r, md.residual);
  return r;
}

json ep_json(const EpRecord& ep) {
  return {{"pair", {ep.pair.first, ep.pair.second}},
          {"beta_ep", complex_json(ep.beta_ep)},
          {"gamma_ep", complex_json(ep.gamma_ep)},
          {"sqrt_coeff", complex_json(ep.sqrt_coeff)},
          {"d2f", complex_json(ep.d2f)},
          {"residual_f", ep.residual_f},
          {"residual_df", ep.residual_df},
          {"iterations", ep.iterations}};
}

FindOptions find_options(const RunConfig& cfg) {
  FindOptions o;
  o.surface_threshold = cfg.surface_threshold;
  return o;
}

void append(std::vector<std::string>& dst, const std::vector<std::string>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

Report run_modes(const RunConfig& cfg) {
  Report rep;
  const ModeSet ms = find_modes(cfg.boundary(), cfg.n_modes, find_options(cfg));
  rep.result = modeset_json(ms);
  rep.max_residual = max_residual(ms);
  append(rep.warnings, ms.warnings);
  rep.table.columns = {"n", "gamma_re", "gamma_im", "k_axial_re", "k_axial_im", "class", "residual"};
  for (const Mode& md : ms.modes) {
    rep.table.rows.push_back({static_cast<long long>(md.n), md.gamma.real(), md.gamma.imag(), md.k_axial.real(),
                              md.k_axial.imag(), std::string(to_string(md.cls)), md.residual});
  }
  return rep;
}

Report run_ep(const RunConfig& cfg) {
  Report rep;
  const std::vector<EpRecord> eps = enumerate_eps(cfg.m, cfg.K, cfg.count);
  json list = json::array();
  rep.table.columns = {"index",    "n_lower",  "n_upper",       "beta_re",       "beta_im",    "gamma_re",
                       "gamma_im", "impedance_re", "impedance_im", "sqrt_coeff_re", "sqrt_coeff_im",
                       "residual_f", "residual_df"};
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const EpRecord& ep = eps[k];
    json e = ep_json(ep);
    const cplx z = 1.0 / ep.beta_ep;
    e["impedance"] = complex_json(z);
    list.push_back(e);
    rep.max_residual = std::max(rep.max_residual, ep.residual_f);
    rep.table.rows.push_back({static_cast<long long>(k + 1), static_cast<long long>(ep.pair.first),
                              static_cast<long long>(ep.pair.second), ep.beta_ep.real(), ep.beta_ep.imag(),
                              ep.gamma_ep.real(), ep.gamma_ep.imag(), z.real(), z.imag(), ep.sqrt_coeff.real(),
                              ep.sqrt_coeff.imag(), ep.residual_f, ep.residual_df});
  }
  rep.result = {{"eps", list}};
  return rep;
}

Report run_encircle(const RunConfig& cfg) {
  Report rep;
  std::vector<cplx> loop = cfg.loop.empty() ? default_loop() : cfg.loop;
  if (loop.front() != loop.back()) loop.push_back(loop.front());
  cplx centre = 0.0;
  for (std::size_t k = 0; k + 1 < loop.size(); ++k) centre += loop[k];
  centre /= static_cast<double>(loop.size() - 1);

  const std::vector<EpRecord> eps = enumerate_eps(cfg.m, cfg.K, cfg.count);
  const EpRecord* ep = &eps.front();
  for (const EpRecord& e : eps) {
    if (std::abs(e.beta_ep - centre) < std::abs(ep->beta_ep - centre)) ep = &e;
  }
  std::vector<cplx> path = loop;
  for (int t = 1; t < cfg.turns; ++t) path.insert(path.end(), loop.begin() + 1, loop.end());
  const EncircleResult r = encircle_ep(*ep, path, cfg.boundary(), cfg.loop_nodes * cfg.turns);

  rep.result = {{"ep", ep_json(*ep)},
                {"loop", complex_array(loop)},
                {"turns", cfg.turns},
                {"pair", {r.pair[0], r.pair[1]}},
                {"permutation", {r.permutation[0], r.permutation[1]}},
                {"gamma_start", complex_array({r.gamma_start[0], r.gamma_start[1]})},
                {"gamma_end", complex_array({r.gamma_end[0], r.gamma_end[1]})},
                {"nodes", r.nodes},
                {"swapped", r.swapped()},
                {"identity", r.identity()}};
  rep.table.columns = {"mode", "gamma_start_re", "gamma_start_im", "gamma_end_re", "gamma_end_im", "ends_on"};
  for (int k = 0; k < 2; ++k) {
    rep.table.rows.push_back({static_cast<long long>(r.pair[k]), r.gamma_start[k].real(), r.gamma_start[k].imag(),
                              r.gamma_end[k].real(), r.gamma_end[k].imag(),
                              static_cast<long long>(r.permutation[k])});
  }
  return rep;
}

Report run_nonortho(const RunConfig& cfg) {
  Report rep;
  const ModeSet ms = find_modes(cfg.boundary(), cfg.n_modes, find_options(cfg));
  append(rep.warnings, ms.warnings);
  rep.max_residual = max_residual(ms);
  const CMatrix S = sij_matrix(ms);
  json kps = json::array();
  rep.table.columns = {"n",  "gamma_re", "gamma_im", "kp_prime_re", "kp_prime_im", "kp", "capped", "s0n_re",
                       "s0n_im"};
  for (std::size_t k = 0; k < ms.modes.size(); ++k) {
    const Mode& md = ms.modes[k];
    const NonorthReport nr = kp(md);
    if (nr.capped) rep.warnings.push_back("K_p of mode " + std::to_string(md.n) + " clamped");
    kps.push_back({{"n", md.n},
                   {"gamma", complex_json(md.gamma)},
                   {"kp_prime", complex_json(nr.kp_prime)},
                   {"kp", nr.kp},
                   {"capped", nr.capped}});
    rep.table.rows.push_back({static_cast<long long>(md.n), md.gamma.real(), md.gamma.imag(), nr.kp_prime.real(),
                              nr.kp_prime.imag(), nr.kp, static_cast<long long>(nr.capped), S(0, k).real(),
                              S(0, k).imag()});
  }
  rep.result = {{"modes", kps}, {"sij", matrix_json(S)}, {"near_ep", ms.near_ep}};
  return rep;
}

json junction_json(const JunctionSolution& sol) {
  const ContinuityResiduals cr = continuity_residuals(sol);
  return {{"N", sol.N},
          {"alpha", sol.alpha},
          {"A", complex_array(sol.A)},
          {"B", complex_array(sol.B)},
          {"C", complex_array(sol.C)},
          {"Kr", complex_array(sol.Kr)},
          {"Kl", complex_array(sol.Kl)},
          {"kp_prime", complex_array(sol.kp_prime_diag)},
          {"lined", modeset_json(sol.lined)},
          {"rcond", sol.rcond},
          {"continuity_residual", {{"pressure", cr.pressure}, {"velocity", cr.velocity}}}};
}

Report run_junction(const RunConfig& cfg) {
  Report rep;
  const JunctionSolution sol = solve_junction(cfg.boundary(), cfg.n_modes);
  append(rep.warnings, sol.lined.warnings);
  rep.max_residual = max_residual(sol.lined);
  rep.result = junction_json(sol);
  rep.result["G"] = matrix_json(sol.G);
  rep.table.columns = {"n",    "alpha", "A_re",     "A_im",     "B_re", "B_im", "gamma_re",
                       "gamma_im", "C_re", "C_im", "Kl_re", "Kl_im"};
  for (int n = 0; n < sol.N; ++n) {
    const cplx g = sol.lined.modes[n].gamma;
    rep.table.rows.push_back({static_cast<long long>(n), sol.alpha[n], sol.A[n].real(), sol.A[n].imag(),
                              sol.B[n].real(), sol.B[n].imag(), g.real(), g.imag(), sol.C[n].real(),
                              sol.C[n].imag(), sol.Kl[n].real(), sol.Kl[n].imag()});
  }
  return rep;
}

Report run_power(const RunConfig& cfg) {
  Report rep;
  const JunctionSolution sol = solve_junction(cfg.boundary(), cfg.n_modes);
  append(rep.warnings, sol.lined.warnings);
  rep.max_residual = max_residual(sol.lined);
  PowerOptions opts;
  opts.azimuthal_factor = cfg.azimuthal_factor;
  const PowerProfile prof = power_profile(sol, linear_grid(cfg.zmin, cfg.zmax, cfg.z_points), opts);
  const InterfaceFlux flux = interface_flux(sol, opts);
  const PowerProfile at0 = power_profile(sol, {0.0}, opts);
  const double w0 = at0.W_total[0];
  const double balance = std::abs(w0 - (flux.incident - flux.reflected));

  json junction = junction_json(sol);
  rep.result = {{"z", prof.z},
                {"W_total", prof.W_total},
                {"W_modal", prof.W_modal},
                {"W_cross", prof.W_cross},
                {"modal_decay_rates", modal_decay_rates(sol)},
                {"interface",
                 {{"incident", flux.incident},
                  {"reflected", flux.reflected},
                  {"net", flux.net},
                  {"W_lined_0", w0},
                  {"balance_error", balance}}},
                {"C", junction["C"]},
                {"B", junction["B"]},
                {"rcond", sol.rcond},
                {"continuity_residual", junction["continuity_residual"]}};
  rep.table.columns = {"z", "W_total", "W_modal", "W_cross"};
  for (std::size_t k = 0; k < prof.z.size(); ++k) {
    rep.table.rows.push_back({prof.z[k], prof.W_total[k], prof.W_modal[k], prof.W_cross[k]});
  }
  return rep;
}

Report run_sweep(const RunConfig& cfg) {
  Report rep;
  SweepRequest req;
  req.K = cfg.K;
  req.m = cfg.m;
  req.re_min = cfg.re_min;
  req.re_max = cfg.re_max;
  req.im_min = cfg.im_min;
  req.im_max = cfg.im_max;
  req.n_re = cfg.n_re;
  req.n_im = cfg.n_im;
  req.quantity = cfg.quantity;
  req.n_modes = cfg.n_modes;
  req.sij_pair = {cfg.sij_i, cfg.sij_j};
  req.track.surface_threshold = cfg.surface_threshold;
  const GridResult g = sweep(req);
  append(rep.warnings, g.warnings);

  json layers = json::array();
  for (int l = 0; l < g.layers; ++l) {
    json rows = json::array();
    for (int i = 0; i < g.n_im(); ++i) {
      json row = json::array();
      for (int r = 0; r < g.n_re(); ++r) {
        if (g.masked(i, r)) {
          row.push_back(nullptr);
        } else {
          row.push_back(g.value(l, i, r));
        }
      }
      rows.push_back(row);
    }
    layers.push_back(rows);
  }
  json eps = json::array();
  for (const EpRecord& ep : g.ep_markers) eps.push_back(ep_json(ep));
  std::vector<int> mask(g.mask.begin(), g.mask.end());
  rep.result = {{"quantity", to_string(g.quantity)},
                {"re_axis", g.re_axis},
                {"im_axis", g.im_axis},
                {"values", layers},
                {"mask", mask},
                {"ep_markers", eps}};
  if (g.quantity == Quantity::Kp) rep.result["scale"] = "log10";

  rep.table.columns = {"beta_re", "beta_im", "layer", to_string(g.quantity), "masked"};
  for (int l = 0; l < g.layers; ++l) {
    for (int i = 0; i < g.n_im(); ++i) {
      for (int r = 0; r < g.n_re(); ++r) {
        rep.table.rows.push_back({g.re_axis[r], g.im_axis[i], static_cast<long long>(l), g.value(l, i, r),
                                  static_cast<long long>(g.masked(i, r))});
      }
    }
  }
  return rep;
}

std::string format_cell(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

std::string column_unit(const std::string& c) {
  static const std::set<std::string> counts = {"n",    "index", "n_lower", "n_upper", "layer",
                                               "mode", "ends_on", "masked", "capped",  "class"};
  if (counts.count(c)) return "";
  if (c == "z") return "radius";
  return "1";
}

}  // namespace

json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Report run(const RunConfig& cfg) {
  Report rep;
  switch (cfg.command) {
    case Command::Modes: rep = run_modes(cfg); break;
    case Command::Ep: rep = run_ep(cfg); break;
    case Command::Encircle: rep = run_encircle(cfg); break;
    case Command::Nonortho: rep = run_nonortho(cfg); break;
    case Command::Junction: rep = run_junction(cfg); break;
    case Command::Power: rep = run_power(cfg); break;
    case Command::Sweep: rep = run_sweep(cfg); break;
  }
  rep.config = cfg;
  return rep;
}

json to_json(const Report& rep) {
  return {{"config", config_to_json(rep.config)},
          {"result", rep.result},
          {"diagnostics",
           {{"version", kVersion}, {"max_residual", rep.max_residual}, {"warnings", rep.warnings}}}};
}

std::string to_csv(const Report& rep) {
  std::ostringstream os;
  os << "# ductmodes " << kVersion << " " << to_string(rep.config.command) << "\n";
  os << "# K=" << format_cell(rep.config.K) << " m=" << rep.config.m;
  if (rep.config.impedance) {
    os << " impedance=" << format_cell(rep.config.impedance->real()) << ","
       << format_cell(rep.config.impedance->imag());
  } else {
    os << " beta=" << format_cell(rep.config.beta_re) << "," << format_cell(rep.config.beta_im);
  }
  os << "\n# units: lengths in duct radii; [1] marks dimensionless values\n";
  for (const std::string& w : rep.warnings) os << "# warning: " << w << "\n";
  os << "# max_residual=" << format_cell(rep.max_residual) << "\n";
  for (std::size_t k = 0; k < rep.table.columns.size(); ++k) {
    const std::string& c = rep.table.columns[k];
    const std::string u = column_unit(c);
    os << (k ? "," : "") << c << (u.empty() ? "" : " [" + u + "]");
  }
  os << "\n";
  for (const auto& row : rep.table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? "," : "") << format_cell(row[k]);
    os << "\n";
  }
  return os.str();
}

std::string render(const Report& rep, Format f) {
  if (f == Format::Csv) return to_csv(rep);
  return to_json(rep).dump(2) + "\n";
}

int report_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const json::exception& e) {
    err << "error: invalid configuration: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    if (e.is_convergence_failure()) return kExitConvergence;
    if (e.code() == ErrorCode::InvalidArgument || e.code() == ErrorCode::RangeExceeded) return kExitConfig;
    return kExitOther;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitOther;
  } catch (...) {
    err << "error: unknown failure\n";
    return kExitOther;
  }
}

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace

int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    const Report rep = run(cfg);
    const std::string text = render(rep, cfg.format);
    if (cfg.output_path.empty() || cfg.output_path == "-") {
      out << text;
      out.flush();
      if (!out) throw IoError("failed writing to standard output");
    } else {
      write_text(cfg.output_path, text);
    }
    for (const std::string& w : rep.warnings) err << "warning: " << w << "\n";
    return kExitOk;
  } catch (...) {
    return report_exception(err);
  }
}

int execute_figure(const std::string& name, const std::string& dir, std::ostream& out, std::ostream& err) {
  std::vector<RunConfig> runs;
  try {
    runs = figure_recipe(name);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  } catch (...) {
    return report_exception(err);
  }
  int status = kExitOk;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    RunConfig cfg = runs[k];
    std::string stem = name;
    std::transform(stem.begin(), stem.end(), stem.begin(), [](unsigned char c) { return std::tolower(c); });
    if (runs.size() > 1) stem += "_" + std::to_string(k + 1);
    cfg.output_path = (std::filesystem::path(dir) / (stem + (cfg.format == Format::Csv ? ".csv" : ".json"))).string();
    const int rc = execute(cfg, out, err);
    if (rc == kExitOk) {
      out << cfg.output_path << "  " << cfg.label << "\n";
    } else if (status == kExitOk) {
      status = rc;
    }
  }
  return status;
}

}  // namespace ductmodes::cli
