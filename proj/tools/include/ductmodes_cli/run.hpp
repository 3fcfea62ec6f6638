#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ductmodes_cli/config.hpp"

namespace ductmodes::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitConvergence = 3,
  kExitIo = 4,
};

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  RunConfig config;
  nlohmann::json result;
  Table table;
  std::vector<std::string> warnings;
  /// Largest dispersion residual among the modes involved, when relevant.
  double max_residual = 0.0;
};

/// Runs one validated configuration. Library errors propagate.
Report run(const RunConfig& cfg);

/// {"config", "result", "diagnostics"}; no timings, so output is reproducible.
nlohmann::json to_json(const Report& rep);
std::string to_csv(const Report& rep);
std::string render(const Report& rep, Format f);

/// Maps an in-flight exception to an exit code and writes a one-line message.
int report_exception(std::ostream& err);

/// validate + run + render, writing to cfg.output_path or `out`.
/// Returns an exit code; never throws.
int execute(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Runs every configuration of a figure recipe into `dir`, one file per run.
int execute_figure(const std::string& name, const std::string& dir, std::ostream& out, std::ostream& err);

nlohmann::json complex_json(cplx z);

}  // namespace ductmodes::cli
