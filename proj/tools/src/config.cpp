#include "ductmodes_cli/config.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace ductmodes::cli {

using nlohmann::json;

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "command", "K",        "m",          "beta_re",          "beta_im", "impedance_re", "impedance_im",
      "n_modes", "output_path", "format",  "surface_threshold", "count",  "loop",         "loop_nodes",
      "turns",   "zmin",     "zmax",       "z_points",         "azimuthal_factor", "re_min", "re_max",
      "im_min",  "im_max",   "n_re",       "n_im",             "quantity", "sij_i",       "sij_j",
      "label"};
  return keys;
}

double get_number(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
  return v.get<int>();
}

std::string get_string(const json& j, const std::string& key) {
  const json& v = j.at(key);
  if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return v.get<std::string>();
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

RunConfig base(Command c) {
  RunConfig cfg;
  cfg.command = c;
  return cfg;
}

}  // namespace

const char* to_string(Command c) {
  switch (c) {
    case Command::Modes: return "modes";
    case Command::Ep: return "ep";
    case Command::Encircle: return "encircle";
    case Command::Nonortho: return "nonortho";
    case Command::Junction: return "junction";
    case Command::Power: return "power";
    case Command::Sweep: return "sweep";
  }
  return "unknown";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::Modes, Command::Ep, Command::Encircle, Command::Nonortho, Command::Junction,
                    Command::Power, Command::Sweep}) {
    if (s == to_string(c)) return c;
  }
  throw ConfigError("unknown command '" + s + "'");
}

const char* to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

Format format_from_string(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("unknown format '" + s + "' (expected csv or json)");
}

BoundarySpec RunConfig::boundary() const {
  if (impedance) return BoundarySpec::with_impedance(K, m, *impedance);
  return BoundarySpec::admittance(K, m, cplx{beta_re, beta_im});
}

std::vector<cplx> default_loop() {
  return {{0.095, 0.042655}, {0.105, 0.042655}, {0.105, 0.042652}, {0.095, 0.042652}, {0.095, 0.042655}};
}

void validate(const RunConfig& c) {
  require(std::isfinite(c.K) && c.K > 0.0, "K must be a positive number");
  require(c.m >= 0 && c.m <= 200, "m must lie in [0, 200]");
  require(std::isfinite(c.beta_re) && std::isfinite(c.beta_im), "beta must be finite");
  if (c.impedance) require(is_finite(*c.impedance), "impedance must be finite");
  require(c.n_modes >= 1 && c.n_modes <= 400, "n_modes must lie in [1, 400]");
  require(std::isfinite(c.surface_threshold), "surface_threshold must be finite");
  switch (c.command) {
    case Command::Ep:
      require(c.count >= 1 && c.count <= 20, "count must lie in [1, 20]");
      require(!c.impedance, "ep works in the admittance plane; impedance is not accepted");
      break;
    case Command::Encircle:
      require(!c.impedance, "encircle works in the admittance plane; impedance is not accepted");
      require(c.loop.empty() || c.loop.size() >= 3, "loop needs at least three nodes");
      require(c.loop_nodes >= 8 && c.loop_nodes <= 100000, "loop_nodes must lie in [8, 100000]");
      require(c.turns >= 1 && c.turns <= 16, "turns must lie in [1, 16]");
      break;
    case Command::Power:
      require(std::isfinite(c.zmin) && std::isfinite(c.zmax) && c.zmin >= 0.0 && c.zmax >= c.zmin,
              "power needs 0 <= zmin <= zmax");
      require(c.z_points >= 1 && c.z_points <= 1000000, "z_points must lie in [1, 1000000]");
      break;
    case Command::Sweep:
      require(!c.impedance, "sweep works in the admittance plane; impedance is not accepted");
      require(c.re_max >= c.re_min && c.im_max >= c.im_min, "sweep ranges need min <= max");
      require(c.n_re >= 1 && c.n_re <= 512 && c.n_im >= 1 && c.n_im <= 512,
              "n_re and n_im must lie in [1, 512]");
      if (c.quantity == Quantity::SijRe || c.quantity == Quantity::SijIm) {
        require(c.sij_i >= 0 && c.sij_j >= 0 && c.sij_i < c.n_modes && c.sij_j < c.n_modes,
                "sij_i and sij_j must be below n_modes");
      }
      break;
    default:
      break;
  }
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  if (j.contains("config") && j.contains("result")) return config_from_json(j.at("config"));
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known_keys().count(it.key())) throw ConfigError("unknown config key '" + it.key() + "'");
  }
  RunConfig c;
  if (j.contains("command")) c.command = command_from_string(get_string(j, "command"));
  if (j.contains("K")) c.K = get_number(j, "K");
  if (j.contains("m")) c.m = get_int(j, "m");
  if (j.contains("beta_re")) c.beta_re = get_number(j, "beta_re");
  if (j.contains("beta_im")) c.beta_im = get_number(j, "beta_im");
  if (j.contains("impedance_re") || j.contains("impedance_im")) {
    require(j.contains("impedance_re") && j.contains("impedance_im"),
            "impedance_re and impedance_im must be given together");
    c.impedance = cplx{get_number(j, "impedance_re"), get_number(j, "impedance_im")};
  }
  if (j.contains("n_modes")) c.n_modes = get_int(j, "n_modes");
  if (j.contains("output_path")) c.output_path = get_string(j, "output_path");
  if (j.contains("format")) c.format = format_from_string(get_string(j, "format"));
  if (j.contains("surface_threshold")) c.surface_threshold = get_number(j, "surface_threshold");
  if (j.contains("count")) c.count = get_int(j, "count");
  if (j.contains("loop")) {
    const json& l = j.at("loop");
    require(l.is_array(), "config key 'loop' must be an array of {\"re\", \"im\"} objects");
    for (const json& p : l) {
      require(p.is_object() && p.size() == 2 && p.contains("re") && p.contains("im") && p["re"].is_number() &&
                  p["im"].is_number(),
              "loop entries must be {\"re\": number, \"im\": number}");
      c.loop.emplace_back(p["re"].get<double>(), p["im"].get<double>());
    }
  }
  if (j.contains("loop_nodes")) c.loop_nodes = get_int(j, "loop_nodes");
  if (j.contains("turns")) c.turns = get_int(j, "turns");
  if (j.contains("zmin")) c.zmin = get_number(j, "zmin");
  if (j.contains("zmax")) c.zmax = get_number(j, "zmax");
  if (j.contains("z_points")) c.z_points = get_int(j, "z_points");
  if (j.contains("azimuthal_factor")) {
    require(j.at("azimuthal_factor").is_boolean(), "config key 'azimuthal_factor' must be a boolean");
    c.azimuthal_factor = j.at("azimuthal_factor").get<bool>();
  }
  if (j.contains("re_min")) c.re_min = get_number(j, "re_min");
  if (j.contains("re_max")) c.re_max = get_number(j, "re_max");
  if (j.contains("im_min")) c.im_min = get_number(j, "im_min");
  if (j.contains("im_max")) c.im_max = get_number(j, "im_max");
  if (j.contains("n_re")) c.n_re = get_int(j, "n_re");
  if (j.contains("n_im")) c.n_im = get_int(j, "n_im");
  if (j.contains("quantity")) {
    try {
      c.quantity = quantity_from_string(get_string(j, "quantity"));
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("sij_i")) c.sij_i = get_int(j, "sij_i");
  if (j.contains("sij_j")) c.sij_j = get_int(j, "sij_j");
  if (j.contains("label")) c.label = get_string(j, "label");
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  j["K"] = c.K;
  j["m"] = c.m;
  j["beta_re"] = c.beta_re;
  j["beta_im"] = c.beta_im;
  if (c.impedance) {
    j["impedance_re"] = c.impedance->real();
    j["impedance_im"] = c.impedance->imag();
  }
  j["n_modes"] = c.n_modes;
  j["output_path"] = c.output_path;
  j["format"] = to_string(c.format);
  j["surface_threshold"] = c.surface_threshold;
  j["count"] = c.count;
  if (!c.loop.empty()) {
    json l = json::array();
    for (cplx p : c.loop) l.push_back({{"re", p.real()}, {"im", p.imag()}});
    j["loop"] = l;
  }
  j["loop_nodes"] = c.loop_nodes;
  j["turns"] = c.turns;
  j["zmin"] = c.zmin;
  j["zmax"] = c.zmax;
  j["z_points"] = c.z_points;
  j["azimuthal_factor"] = c.azimuthal_factor;
  j["re_min"] = c.re_min;
  j["re_max"] = c.re_max;
  j["im_min"] = c.im_min;
  j["im_max"] = c.im_max;
  j["n_re"] = c.n_re;
  j["n_im"] = c.n_im;
  j["quantity"] = to_string(c.quantity);
  j["sij_i"] = c.sij_i;
  j["sij_j"] = c.sij_j;
  j["label"] = c.label;
  return j;
}

std::vector<std::string> figure_names() {
  std::vector<std::string> names;
  for (int k = 1; k <= 13; ++k) names.push_back("Fig" + std::to_string(k));
  return names;
}

std::vector<RunConfig> figure_recipe(const std::string& name) {
  std::vector<RunConfig> out;
  auto sweep_cfg = [](const std::string& label, Quantity q, double re0, double re1, int nre, double im0,
                      double im1, int nim, int modes) {
    RunConfig c = base(Command::Sweep);
    c.label = label;
    c.quantity = q;
    c.re_min = re0;
    c.re_max = re1;
    c.n_re = nre;
    c.im_min = im0;
    c.im_max = im1;
    c.n_im = nim;
    c.n_modes = modes;
    c.format = Format::Csv;
    return c;
  };
  if (name == "Fig1") {
    RunConfig c = base(Command::Modes);
    c.beta_re = 0.4;
    c.beta_im = 0.2;
    c.n_modes = 30;
    c.label = "Fig1";
    out.push_back(c);
  } else if (name == "Fig2") {
    for (int m = 0; m <= 30; ++m) {
      RunConfig c = base(Command::Modes);
      c.m = m;
      c.beta_re = 0.4;
      c.beta_im = 0.2;
      c.n_modes = 30;
      c.label = "Fig2 m=" + std::to_string(m);
      out.push_back(c);
    }
  } else if (name == "Fig3") {
    out.push_back(sweep_cfg("Fig3 (a,b)", Quantity::GammaRe, 0.095, 0.105, 201, 0.042655, 0.042655, 1, 2));
    out.push_back(sweep_cfg("Fig3 (c,d)", Quantity::GammaRe, 0.095, 0.105, 201, 0.042652, 0.042652, 1, 2));
  } else if (name == "Fig4") {
    out.push_back(sweep_cfg("Fig4 real part", Quantity::SijRe, 0.099, 0.099, 1, 0.0, 0.06, 241, 2));
    out.push_back(sweep_cfg("Fig4 imaginary part", Quantity::SijIm, 0.099, 0.099, 1, 0.0, 0.06, 241, 2));
  } else if (name == "Fig5") {
    out.push_back(sweep_cfg("Fig5", Quantity::Kp, 0.099, 0.099, 1, 0.0, 0.06, 241, 2));
  } else if (name == "Fig6") {
    out.push_back(sweep_cfg("Fig6", Quantity::GammaRe, 0.09935, 0.09935, 1, 0.0, 0.05, 201, 2));
  } else if (name == "Fig7") {
    RunConfig c = base(Command::Ep);
    c.count = 10;
    c.label = "Fig7";
    out.push_back(c);
  } else if (name == "Fig8") {
    out.push_back(sweep_cfg("Fig8", Quantity::GammaRe, 0.0, 0.3, 61, 0.0, 0.1, 41, 3));
  } else if (name == "Fig9") {
    out.push_back(sweep_cfg("Fig9", Quantity::GammaIm, 0.0, 0.3, 61, 0.0, 0.1, 41, 3));
  } else if (name == "Fig10") {
    out.push_back(sweep_cfg("Fig10 real part", Quantity::SijRe, 0.05, 0.15, 51, 0.0, 0.1, 51, 2));
    out.push_back(sweep_cfg("Fig10 imaginary part", Quantity::SijIm, 0.05, 0.15, 51, 0.0, 0.1, 51, 2));
  } else if (name == "Fig11") {
    out.push_back(sweep_cfg("Fig11", Quantity::Kp, 0.05, 0.15, 51, 0.0, 0.1, 51, 2));
  } else if (name == "Fig12" || name == "Fig13") {
    const Command cmd = name == "Fig12" ? Command::Power : Command::Nonortho;
    RunConfig c1 = base(cmd);
    c1.impedance = cplx{0.1, -1.0};
    c1.label = name + " case 1";
    RunConfig c2 = base(cmd);
    c2.beta_re = 0.0993;
    c2.beta_im = 0.0427;
    c2.label = name + " case 2";
    for (RunConfig* c : {&c1, &c2}) {
      c->format = cmd == Command::Power ? Format::Csv : Format::Json;
      c->zmax = 10.0;
    }
    out.push_back(c1);
    out.push_back(c2);
  } else {
    std::ostringstream os;
    os << "unknown figure '" << name << "' (expected Fig1 .. Fig13)";
    throw ConfigError(os.str());
  }
  return out;
}

}  // namespace ductmodes::cli
