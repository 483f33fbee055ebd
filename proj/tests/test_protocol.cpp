#include "qfichain/protocol.hpp"

#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace qfi;
using namespace qfi::protocol;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}
}  // namespace

TEST_CASE("config parsing is strict") {
  CHECK_THROWS_AS(ProtocolConfig::from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(ProtocolConfig::from_json_text(R"({"protocol":"equilibrium","bogus":1})"),
                  ConfigError);
  CHECK_THROWS_AS(ProtocolConfig::from_json_text(
                      R"({"protocol":"equilibrium","model":{"h":0.5,"j":1}})"),
                  ConfigError);
  CHECK_THROWS_AS(ProtocolConfig::from_json_text(R"({"protocol":"equilibrium"})"),
                  ConfigError);  // missing beta/sizes
  CHECK_THROWS_AS(ProtocolConfig::from_json_text(R"({"protocol":"warp_drive"})"),
                  ConfigError);

  const auto cfg = ProtocolConfig::from_json_text(
      R"({"protocol":"equilibrium","model":{"h":0.5},
          "subsystem":{"sizes":[4,6]},"beta":[1.0,"inf"],"output":"x.csv"})");
  CHECK(cfg.betas.size() == 2);
  CHECK(std::isinf(cfg.betas[1]));
  CHECK(cfg.sizes.size() == 2);

  const auto timed = ProtocolConfig::from_json_text(
      R"({"protocol":"single_kick","model":{"h":0.5},
          "subsystem":{"half_width":3},"times":{"start":0,"stop":2,"count":5}})");
  CHECK(timed.times.size() == 5);
  CHECK(timed.times[4] == doctest::Approx(2.0));
}

TEST_CASE("config hash is stable and sensitive") {
  const std::string text =
      R"({"protocol":"equilibrium","model":{"h":0.5},
          "subsystem":{"sizes":[4]},"beta":[1.0]})";
  const auto a = ProtocolConfig::from_json_text(text);
  const auto b = ProtocolConfig::from_json_text(text);
  CHECK(a.config_hash() == b.config_hash());
  auto c = a;
  c.model.h = 0.6;
  CHECK(a.config_hash() != c.config_hash());
}

TEST_CASE("equilibrium run: layout and determinism") {
  auto cfg = ProtocolConfig::from_json_text(
      R"({"protocol":"equilibrium","model":{"h":0.5},
          "subsystem":{"sizes":[4,6]},"beta":[0.5,2.0],
          "sources":["simulation"],"output":"proto_eq.csv",
          "measure":{"beta_max":2.0,"beta_spacing":0.1,"fit_domains":8,"fit_window":6}})");
  std::ostringstream log;
  const auto files = run(cfg, log);
  REQUIRE(files.size() == 1);
  const std::string first = slurp(files[0]);
  CHECK(first.find("# qfi-csv v1") == 0);
  CHECK(first.find("time,subsystem_left") != std::string::npos);
  // one row per (beta, size) plus two header lines
  CHECK(std::count(first.begin(), first.end(), '\n') == 2 + 4);

  const auto files2 = run(cfg, log);
  CHECK(slurp(files2[0]) == first);  // bit-identical rerun
  std::remove(files[0].c_str());
}

TEST_CASE("single kick run produces simulation and prediction rows") {
  auto cfg = ProtocolConfig::from_json_text(
      R"({"protocol":"single_kick","model":{"h":0.5},
          "subsystem":{"half_width":4},"times":[0.0,2.0,4.0],
          "kick":{"kind":"majorana_odd"},
          "sources":["simulation","semiclassical"],"output":"proto_kick.csv",
          "measure":{"beta_max":2.0,"beta_spacing":0.1,"fit_domains":8,"fit_window":6}})");
  std::ostringstream log;
  const auto rows = compute_rows(cfg, log);
  int sim = 0, sc = 0;
  for (const auto& r : rows) {
    if (r.source == Source::simulation) {
      ++sim;
      CHECK(r.subsystem_left == -4);
      CHECK(r.subsystem_right == 4);
      CHECK(r.chi >= -1e-9);
      CHECK(r.chi <= 1.0 + 1e-9);
      CHECK(r.lower <= r.upper + 1e-12);
    } else if (r.source == Source::semiclassical) {
      ++sc;
    }
  }
  CHECK(sim == 3);
  CHECK(sc == 2);  // predictions start at t > 0
}

TEST_CASE("sweep merges with the axis column") {
  auto cfg = ProtocolConfig::from_json_text(
      R"({"protocol":"equilibrium","model":{"h":0.5},
          "subsystem":{"sizes":[4]},"beta":[1.0],
          "sources":["simulation"],"output":"proto_sweep.csv",
          "measure":{"beta_max":2.0,"beta_spacing":0.1,"fit_domains":8,"fit_window":6}})");
  std::ostringstream log;
  CHECK_THROWS_AS(sweep(cfg, "model.h", {}, log), ConfigError);
  CHECK_THROWS_AS(sweep(cfg, "model.flux", {0.1}, log), ConfigError);
  const auto files = sweep(cfg, "model.h", {0.3, 0.7}, log);
  const std::string text = slurp(files[0]);
  CHECK(text.find(",axis,axis_value") != std::string::npos);
  std::size_t axis_rows = 0, pos = 0;
  while ((pos = text.find(",model.h,", pos)) != std::string::npos) {
    ++axis_rows;
    pos += 1;
  }
  CHECK(axis_rows == 2);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 2);
  std::remove(files[0].c_str());
}

TEST_CASE("quench rows carry prediction and asymptotics") {
  auto cfg = ProtocolConfig::from_json_text(
      R"({"protocol":"global_quench","quench":{"h0":0.0,"h":0.4},
          "subsystem":{"sizes":[8]},"times":[5.0],
          "sources":["simulation","semiclassical","asymptotic"],
          "output":"proto_quench.csv",
          "measure":{"beta_max":2.0,"beta_spacing":0.1,"fit_domains":8,"fit_window":6}})");
  std::ostringstream log;
  const auto rows = compute_rows(cfg, log);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].source == Source::simulation);
  CHECK(rows[1].source == Source::semiclassical);
  CHECK(rows[2].source == Source::asymptotic);
  // prediction and simulation in the same ballpark
  CHECK(std::abs(rows[0].chi - rows[1].chi) < 0.2);
}

TEST_CASE("validate --quick passes") {
  std::ostringstream out;
  CHECK(validate(true, out));
  CHECK(out.str().find("FAIL") == std::string::npos);
}
