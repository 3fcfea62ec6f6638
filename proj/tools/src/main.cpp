#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ductmodes/version.hpp"
#include "ductmodes_cli/config.hpp"
#include "ductmodes_cli/run.hpp"

using namespace ductmodes;
using namespace ductmodes::cli;

namespace {

// Options bound to temporaries; applied on top of the config file only when
// given on the command line.
struct Overrides {
  std::vector<std::function<void(RunConfig&)>> setters;

  template <class T, class Fn>
  CLI::Option* add(CLI::App* app, const std::string& name, const std::string& help, Fn apply) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    setters.push_back([opt, value, apply](RunConfig& c) {
      if (opt->count() > 0) apply(c, *value);
    });
    return opt;
  }

  void apply(RunConfig& c) const {
    for (const auto& s : setters) s(c);
  }
};

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read config file '" + path + "'");
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic modes of a circular duct with impedance walls"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Overrides ov;
  std::string config_path;
  int threads = 0;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--threads", threads, "Worker threads (default: DUCTMODES_THREADS or hardware)")
      ->check(CLI::NonNegativeNumber);
  ov.add<double>(&app, "--K", "Reduced frequency K", [](RunConfig& c, double v) { c.K = v; });
  ov.add<int>(&app, "--m", "Azimuthal order", [](RunConfig& c, int v) { c.m = v; });
  ov.add<double>(&app, "--beta-re", "Wall admittance, real part", [](RunConfig& c, double v) { c.beta_re = v; });
  ov.add<double>(&app, "--beta-im", "Wall admittance, imaginary part",
                 [](RunConfig& c, double v) { c.beta_im = v; });
  CLI::Option* zre = ov.add<double>(&app, "--z-re", "Wall impedance, real part", [](RunConfig& c, double v) {
    c.impedance = cplx{v, c.impedance ? c.impedance->imag() : 0.0};
  });
  CLI::Option* zim = ov.add<double>(&app, "--z-im", "Wall impedance, imaginary part", [](RunConfig& c, double v) {
    c.impedance = cplx{c.impedance ? c.impedance->real() : 0.0, v};
  });
  zre->needs(zim);
  zim->needs(zre);
  ov.add<int>(&app, "-n,--n", "Number of modes (truncation)", [](RunConfig& c, int v) { c.n_modes = v; });
  ov.add<double>(&app, "--surface-threshold", "Im(gamma) above which a mode is a surface mode",
                 [](RunConfig& c, double v) { c.surface_threshold = v; });
  ov.add<std::string>(&app, "--format", "csv or json",
                      [](RunConfig& c, const std::string& v) { c.format = format_from_string(v); })
      ->check(CLI::IsMember({"csv", "json"}));
  ov.add<std::string>(&app, "-o,--output", "Output file (default: standard output)",
                      [](RunConfig& c, const std::string& v) { c.output_path = v; });

  std::vector<std::pair<CLI::App*, Command>> subs;
  auto sub = [&](const char* name, const char* help, Command cmd) {
    CLI::App* s = app.add_subcommand(name, help);
    subs.emplace_back(s, cmd);
    return s;
  };
  sub("modes", "Transverse eigenvalues of the lined duct", Command::Modes);
  CLI::App* ep = sub("ep", "Exceptional points in the admittance plane", Command::Ep);
  ov.add<int>(ep, "--count", "Number of exceptional points", [](RunConfig& c, int v) { c.count = v; });
  CLI::App* enc = sub("encircle", "Continue a mode pair around an exceptional point", Command::Encircle);
  ov.add<int>(enc, "--count", "Exceptional points considered when picking the encircled one",
              [](RunConfig& c, int v) { c.count = v; });
  ov.add<int>(enc, "--loop-nodes", "Minimum continuation nodes per turn",
              [](RunConfig& c, int v) { c.loop_nodes = v; });
  ov.add<int>(enc, "--turns", "Number of times the loop is traversed", [](RunConfig& c, int v) { c.turns = v; });
  sub("nonortho", "Petermann factors and mode overlaps", Command::Nonortho);
  sub("junction", "Mode matching at a rigid-to-lined junction", Command::Junction);
  CLI::App* pw = sub("power", "Axial power profile downstream of the junction", Command::Power);
  ov.add<double>(pw, "--zmin", "Start of the z grid", [](RunConfig& c, double v) { c.zmin = v; });
  ov.add<double>(pw, "--zmax", "End of the z grid", [](RunConfig& c, double v) { c.zmax = v; });
  ov.add<int>(pw, "--z-points", "Points on the z grid", [](RunConfig& c, int v) { c.z_points = v; });
  auto azimuthal = std::make_shared<bool>(false);
  CLI::Option* az = pw->add_flag("--azimuthal", *azimuthal, "Include the azimuthal integral");
  ov.setters.push_back([az, azimuthal](RunConfig& c) {
    if (az->count() > 0) c.azimuthal_factor = *azimuthal;
  });
  CLI::App* sw = sub("sweep", "Admittance-plane lattice of eigenvalues or metrics", Command::Sweep);
  ov.add<double>(sw, "--re-min", "Lower bound of Re(beta)", [](RunConfig& c, double v) { c.re_min = v; });
  ov.add<double>(sw, "--re-max", "Upper bound of Re(beta)", [](RunConfig& c, double v) { c.re_max = v; });
  ov.add<double>(sw, "--im-min", "Lower bound of Im(beta)", [](RunConfig& c, double v) { c.im_min = v; });
  ov.add<double>(sw, "--im-max", "Upper bound of Im(beta)", [](RunConfig& c, double v) { c.im_max = v; });
  ov.add<int>(sw, "--n-re", "Points along Re(beta)", [](RunConfig& c, int v) { c.n_re = v; });
  ov.add<int>(sw, "--n-im", "Points along Im(beta)", [](RunConfig& c, int v) { c.n_im = v; });
  ov.add<std::string>(sw, "--quantity", "gamma_re, gamma_im, kp, sij_re or sij_im",
                      [](RunConfig& c, const std::string& v) { c.quantity = quantity_from_string(v); })
      ->check(CLI::IsMember({"gamma_re", "gamma_im", "kp", "sij_re", "sij_im"}));
  ov.add<int>(sw, "--sij-i", "First mode of the S_ij pair", [](RunConfig& c, int v) { c.sij_i = v; });
  ov.add<int>(sw, "--sij-j", "Second mode of the S_ij pair", [](RunConfig& c, int v) { c.sij_j = v; });

  CLI::App* fig = app.add_subcommand("figure", "Regenerate the data behind a figure");
  std::string fig_name;
  std::string fig_dir = "figures";
  bool fig_list = false;
  fig->add_option("name", fig_name, "Fig1 .. Fig13");
  fig->add_option("-d,--dir", fig_dir, "Output directory");
  fig->add_flag("--list", fig_list, "List available figures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  if (threads > 0) set_worker_threads(threads);

  if (fig->parsed()) {
    if (fig_list) {
      for (const std::string& n : figure_names()) std::cout << n << "\n";
      return kExitOk;
    }
    if (fig_name.empty()) {
      std::cerr << "error: figure needs a name (see --list)\n";
      return kExitConfig;
    }
    return execute_figure(fig_name, fig_dir, std::cout, std::cerr);
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& [s, cmd] : subs) {
      if (s->parsed()) cfg.command = cmd;
    }
    ov.apply(cfg);
  } catch (...) {
    return report_exception(std::cerr);
  }
  return execute(cfg, std::cout, std::cerr);
}
