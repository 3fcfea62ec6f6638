#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ductmodes/common.hpp"
#include "ductmodes/eigensolver.hpp"
#include "ductmodes/sweeps.hpp"

namespace ductmodes::cli {

enum class Command { Modes, Ep, Encircle, Nonortho, Junction, Power, Sweep };
enum class Format { Csv, Json };

const char* to_string(Command c);
Command command_from_string(const std::string& s);
const char* to_string(Format f);
Format format_from_string(const std::string& s);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::Modes;
  double K = 30.0;
  int m = 0;
  double beta_re = 0.0;
  double beta_im = 0.0;
  /// Wall impedance; when set it replaces beta_re/beta_im.
  std::optional<cplx> impedance;
  int n_modes = 50;
  std::string output_path;
  Format format = Format::Json;
  double surface_threshold = 3.0;

  // ep
  int count = 1;
  // encircle
  std::vector<cplx> loop;
  int loop_nodes = 64;
  int turns = 1;
  // power
  double zmin = 0.0;
  double zmax = 10.0;
  int z_points = 101;
  bool azimuthal_factor = false;
  // sweep
  double re_min = 0.0, re_max = 0.0;
  double im_min = 0.0, im_max = 0.0;
  int n_re = 21, n_im = 21;
  Quantity quantity = Quantity::GammaRe;
  int sij_i = 0, sij_j = 1;

  /// Free-form tag set by figure recipes.
  std::string label;

  BoundarySpec boundary() const;
};

/// Rectangular loop around the first exceptional point for m = 0, K = 30.
std::vector<cplx> default_loop();

/// Throws ConfigError on out-of-range or inconsistent values.
void validate(const RunConfig& cfg);

/// Parses a JSON object. Unknown keys and wrongly typed values throw ConfigError.
/// A full output envelope is accepted too; its config echo is used.
RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);

std::vector<std::string> figure_names();
/// Configurations whose outputs regenerate the data behind a named figure
/// (Fig1 .. Fig13). Some figures need more than one run. Throws ConfigError
/// for an unknown name.
std::vector<RunConfig> figure_recipe(const std::string& name);

}  // namespace ductmodes::cli
