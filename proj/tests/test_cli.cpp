#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ductmodes_cli/config.hpp"
#include "ductmodes_cli/run.hpp"
#include "support/oracles.hpp"

using namespace ductmodes;
using namespace ductmodes::cli;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome exec(const RunConfig& cfg) {
  std::ostringstream out, err;
  const int code = execute(cfg, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::vector<std::string> data_rows(const std::string& csv) {
  std::vector<std::string> v;
  for (const auto& l : lines_of(csv)) {
    if (!l.empty() && l[0] != '#') v.push_back(l);
  }
  return v;
}

std::filesystem::path temp_dir() {
  auto p = std::filesystem::temp_directory_path() / "ductmodes_cli_test";
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing and defaults") {
  const RunConfig d = config_from_json(json::object());
  CHECK(d.command == Command::Modes);
  CHECK(d.K == 30.0);
  CHECK(d.m == 0);
  CHECK(d.n_modes == 50);
  CHECK(d.format == Format::Json);

  const RunConfig c = config_from_json(json::parse(R"({"command":"sweep","K":20,"m":2,"beta_re":0.1,
      "beta_im":0.2,"quantity":"kp","n_re":5,"n_im":7,"re_max":0.3,"im_max":0.1,"format":"csv"})"));
  CHECK(c.command == Command::Sweep);
  CHECK(c.K == 20.0);
  CHECK(c.m == 2);
  CHECK(c.quantity == Quantity::Kp);
  CHECK(c.n_re == 5);
  CHECK(c.n_im == 7);
  CHECK(c.format == Format::Csv);

  const RunConfig z = config_from_json(json::parse(R"({"impedance_re":0.1,"impedance_im":-1})"));
  REQUIRE(z.impedance);
  CHECK(*z.impedance == cplx(0.1, -1.0));
  CHECK(z.boundary().impedance_form());
}

TEST_CASE("config rejects bad input") {
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"bogus":1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"K":"thirty"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"command":"dance"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse(R"({"impedance_re":0.1})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(json::parse("[1,2]")), ConfigError);

  RunConfig cfg;
  cfg.K = -1.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.m = 201;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.command = Command::Sweep;
  cfg.n_re = 513;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.command = Command::Power;
  cfg.zmin = 5.0;
  cfg.zmax = 1.0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
  cfg = RunConfig{};
  cfg.command = Command::Ep;
  cfg.count = 0;
  CHECK_THROWS_AS(validate(cfg), ConfigError);
}

TEST_CASE("config round-trips through JSON") {
  RunConfig cfg;
  cfg.command = Command::Encircle;
  cfg.loop = default_loop();
  cfg.turns = 2;
  cfg.label = "x";
  const RunConfig back = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("figure recipes") {
  CHECK(figure_names().size() == 13);

  const auto f3 = figure_recipe("Fig3");
  REQUIRE_FALSE(f3.empty());
  CHECK(f3[0].command == Command::Sweep);
  CHECK(f3[0].re_min == 0.095);
  CHECK(f3[0].re_max == 0.105);
  CHECK(f3[0].im_min == 0.042655);
  CHECK(f3[0].n_im == 1);

  const auto f7 = figure_recipe("Fig7");
  REQUIRE(f7.size() == 1);
  CHECK(f7[0].command == Command::Ep);
  CHECK(f7[0].count == 10);

  const auto f12 = figure_recipe("Fig12");
  REQUIRE(f12.size() == 2);
  CHECK(f12[0].command == Command::Power);
  REQUIRE(f12[0].impedance);
  CHECK(*f12[0].impedance == cplx(0.1, -1.0));
  CHECK(f12[1].beta_re == 0.0993);
  CHECK(f12[1].beta_im == 0.0427);

  CHECK_THROWS_AS(figure_recipe("Fig14"), ConfigError);
  for (const auto& name : figure_names()) {
    for (const RunConfig& cfg : figure_recipe(name)) CHECK_NOTHROW(validate(cfg));
  }
}

TEST_CASE("modes CSV carries units and the rigid roots") {
  RunConfig cfg;
  cfg.n_modes = 3;
  cfg.format = Format::Csv;
  const Outcome o = exec(cfg);
  REQUIRE(o.code == kExitOk);
  const auto rows = data_rows(o.out);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].find("gamma_re [1]") != std::string::npos);
  CHECK(rows[0].rfind("n,", 0) == 0);
  CHECK(o.out.find("# max_residual=") != std::string::npos);
  const auto roots = oracle::rigid_roots(0, 3);
  for (int k = 0; k < 3; ++k) {
    std::istringstream is(rows[k + 1]);
    std::string n, re;
    std::getline(is, n, ',');
    std::getline(is, re, ',');
    CHECK(std::stoi(n) == k);
    CHECK(std::abs(std::stod(re) - roots[k]) < 1e-6);
  }
}

TEST_CASE("ep JSON envelope") {
  RunConfig cfg;
  cfg.command = Command::Ep;
  const Outcome o = exec(cfg);
  REQUIRE(o.code == kExitOk);
  const json j = json::parse(o.out);
  CHECK(j.contains("config"));
  CHECK(j.contains("result"));
  CHECK(j.at("diagnostics").contains("version"));
  CHECK(j.at("diagnostics").contains("max_residual"));
  CHECK(j.at("diagnostics").at("warnings").is_array());
  const json& ep = j.at("result").at("eps").at(0);
  const cplx b(ep.at("beta_ep").at("re").get<double>(), ep.at("beta_ep").at("im").get<double>());
  CHECK(std::abs(b - cplx(0.099346, 0.042653)) < 5e-5);

  // Feeding the envelope back as configuration reproduces it byte for byte.
  const Outcome again = exec(config_from_json(j));
  CHECK(again.out == o.out);
}

TEST_CASE("power output shows the case-2 plateau") {
  RunConfig cfg;
  cfg.command = Command::Power;
  cfg.beta_re = 0.0993;
  cfg.beta_im = 0.0427;
  cfg.zmax = 10.0;
  cfg.z_points = 11;
  const Outcome o = exec(cfg);
  REQUIRE(o.code == kExitOk);
  const json prof = json::parse(o.out).at("result");
  const auto w = prof.at("W_total").get<std::vector<double>>();
  REQUIRE(w.size() == 11);
  CHECK(w[2] / w[8] < 10.0);
}

TEST_CASE("every command runs") {
  for (Command c : {Command::Modes, Command::Ep, Command::Encircle, Command::Nonortho, Command::Junction,
                    Command::Power, Command::Sweep}) {
    RunConfig cfg;
    cfg.command = c;
    cfg.n_modes = 6;
    cfg.beta_re = 0.4;
    cfg.beta_im = 0.2;
    if (c == Command::Ep || c == Command::Encircle) cfg.beta_re = cfg.beta_im = 0.0;
    cfg.re_max = 0.2;
    cfg.im_max = 0.1;
    cfg.n_re = cfg.n_im = 3;
    cfg.z_points = 5;
    for (Format f : {Format::Json, Format::Csv}) {
      cfg.format = f;
      CAPTURE(to_string(c));
      CAPTURE(to_string(f));
      const Outcome o = exec(cfg);
      CHECK(o.code == kExitOk);
      CHECK_FALSE(o.out.empty());
      if (f == Format::Json) CHECK_NOTHROW(json::parse(o.out));
    }
  }
}

TEST_CASE("exit codes") {
  RunConfig bad;
  bad.K = -1.0;
  const Outcome c = exec(bad);
  CHECK(c.code == kExitConfig);
  CHECK_FALSE(c.err.empty());

  RunConfig io;
  io.output_path = "/nonexistent-dir/out.json";
  CHECK(exec(io).code == kExitIo);

  RunConfig conv;
  conv.command = Command::Encircle;
  const cplx b(0.0993460805, 0.0426534180);
  conv.loop = {b + cplx(-1e-3, 1e-7), b + cplx(1e-3, 1e-7), b + cplx(1e-3, 1e-3), b + cplx(-1e-3, 1e-3),
               b + cplx(-1e-3, 1e-7)};
  CHECK(exec(conv).code == kExitConvergence);
}

TEST_CASE("output files and figure runs") {
  const auto dir = temp_dir();
  RunConfig cfg;
  cfg.n_modes = 2;
  cfg.output_path = (dir / "modes.json").string();
  REQUIRE(exec(cfg).code == kExitOk);
  std::ifstream in(cfg.output_path);
  CHECK(json::parse(in).at("result").contains("modes"));

  std::ostringstream out, err;
  REQUIRE(execute_figure("Fig7", (dir / "figs").string(), out, err) == kExitOk);
  CHECK(std::filesystem::exists(dir / "figs" / "fig7.json"));
  CHECK(execute_figure("Fig99", (dir / "figs").string(), out, err) == kExitConfig);
  std::filesystem::remove_all(dir);
}
