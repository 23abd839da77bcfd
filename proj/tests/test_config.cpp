#include <string>
#include <vector>

#include "chanrad/config.hpp"
#include "chanrad/error.hpp"
#include "doctest.h"

using namespace chanrad;
using doctest::Approx;

namespace {

std::string validation_message(const std::vector<std::string>& args,
                               const std::optional<std::string>& file = std::nullopt) {
  try {
    parse_config(args, file);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::validation);
    return e.what();
  }
  FAIL("expected a validation error");
  return {};
}

}  // namespace

TEST_CASE("quantity parsers") {
  CHECK(parse_energy("10GeV") == 10e9);
  CHECK(parse_energy("250 MeV") == 250e6);
  CHECK(parse_energy("1.5e9") == 1.5e9);
  CHECK_THROWS_AS(parse_energy("10 furlongs"), Error);
  CHECK_THROWS_AS(parse_energy("GeV"), Error);

  CHECK(parse_length("1.26A") == 1.26);
  CHECK(parse_length("0.126nm") == Approx(1.26));

  const auto rel = parse_angle("0.5L");
  CHECK(rel.relative);
  CHECK(rel.value == 0.5);
  const auto abs = parse_angle("31urad");
  CHECK_FALSE(abs.relative);
  CHECK(abs.value == Approx(31e-6).epsilon(1e-15));
  CHECK(parse_angle("3e-5").value == 3e-5);
  CHECK(parse_angle("0.3", true).relative);

  const auto grid = parse_grid("0:0.85L:100");
  CHECK(grid.count == 100);
  CHECK(grid.stop.relative);
  const auto thetas = grid.resolve(2.0);
  REQUIRE(thetas.size() == 100);
  CHECK(thetas.front() == 0.0);
  CHECK(thetas.back() == Approx(1.7));

  const auto list = parse_energy_list("4,6,10GeV");
  REQUIRE(list.size() == 3);
  CHECK(list[0] == 4e9);
  CHECK(list[2] == 10e9);
}

TEST_CASE("defaults reproduce the reference setup") {
  const auto cfg = parse_config({"table"});
  CHECK(cfg.command == Command::table);
  CHECK(cfg.channel.well_depth_eV == 23.0);
  CHECK(cfg.channel.spacing_A == 1.26);
  CHECK(cfg.theta_in.value == Approx(31e-6));
  CHECK_FALSE(cfg.theta_in.relative);
  CHECK(cfg.energies_eV == std::vector<double>{4e9, 6e9, 10e9, 14e9});
  CHECK(cfg.precision == 9);
}

TEST_CASE("relative entrance angle") {
  const auto cfg = parse_config({"table", "--theta-in", "0.5L", "--energy", "10GeV"});
  const double theta = cfg.theta_in.resolve(lindhard_angle(cfg.channel, cfg.energies_eV[0]));
  CHECK(theta == Approx(33.9e-6).epsilon(0.01));
}

TEST_CASE("validation errors name the field and are aggregated") {
  const auto msg = validation_message({"table", "--energy", "-3GeV"});
  CHECK(msg.find("energy") != std::string::npos);

  const auto many = validation_message({"beamavg", "--energy", "-3GeV", "--sigma", "-1urad", "--quadrature-points", "8"});
  CHECK(many.find("3 problem(s)") != std::string::npos);
  CHECK(many.find("energy") != std::string::npos);
  CHECK(many.find("sigma") != std::string::npos);
  CHECK(many.find("quadrature") != std::string::npos);

  CHECK(validation_message({"gscan", "--grid", "0:0.95L:10"}).find("grid") != std::string::npos);
  CHECK(validation_message({"spectrum", "--harmonic", "7"}).find("harmonic") != std::string::npos);
  CHECK(validation_message({"table", "--V0", "abc"}).find("V0") != std::string::npos);
  CHECK(validation_message({}).find("command") != std::string::npos);
}

TEST_CASE("config file precedence and unknown keys") {
  const std::string file = R"({"beam": {"energies_eV": ["6GeV"], "theta_in": "20urad"}, "output": {"precision": 6}})";
  const auto from_file = parse_config({"table"}, file);
  CHECK(from_file.energies_eV == std::vector<double>{6e9});
  CHECK(from_file.theta_in.value == Approx(20e-6));
  CHECK(from_file.precision == 6);

  const auto flags_win = parse_config({"table", "--precision", "4", "--energy", "14GeV"}, file);
  CHECK(flags_win.precision == 4);
  CHECK(flags_win.energies_eV == std::vector<double>{14e9});
  CHECK(flags_win.theta_in.value == Approx(20e-6));

  const auto msg = validation_message({"table"}, std::string(R"({"beam": {"energy": [1e10]}})"));
  CHECK(msg.find("energy") != std::string::npos);
  CHECK(msg.find("unknown key") != std::string::npos);
  CHECK(validation_message({"table"}, std::string(R"({"colour": 1})")).find("colour") != std::string::npos);
}

TEST_CASE("echoed configuration round-trips") {
  const std::vector<std::vector<std::string>> invocations{
      {"table"},
      {"gscan", "--energy", "10GeV", "--grid", "0:0.85L:30", "--harmonic", "2", "--phase", "literal"},
      {"spectrum", "--energy", "6GeV,14GeV", "--weight", "dipole_planar", "--mode", "coherent", "--grid-size", "32"},
      {"beamavg", "--sigma", "7urad", "--estimator", "n0", "--quadrature-points", "48"},
      {"populations", "--model", "hermite", "--grid", "0:0.5L:11", "--format", "json"},
      {"electron-compare", "--shape", "poschl_teller", "--width-b", "0.3A"},
  };
  for (const auto& args : invocations) {
    CAPTURE(args.front());
    const auto cfg = parse_config(args);
    const auto echo = to_json(cfg);
    const auto again = parse_config({}, echo.dump());
    CHECK(to_json(again) == echo);
    CHECK(again.command == cfg.command);
  }
}

TEST_CASE("help is not an error") {
  CHECK_THROWS_AS(parse_config({"gscan", "--help"}), HelpRequested);
}
