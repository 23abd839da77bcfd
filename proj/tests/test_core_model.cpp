#include <cmath>
#include <vector>

#include "chanrad/core_model.hpp"
#include "chanrad/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chanrad;
using doctest::Approx;

namespace {

const CrystalChannel diamond = CrystalChannel::diamond_110();

template <class F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected chanrad::Error");
  return Errc::io;
}

}  // namespace

TEST_CASE("constants are positive and alpha is small") {
  CHECK(kPhys.hbar_c_eV_A > 0);
  CHECK(kPhys.electron_mass_eV > 0);
  CHECK(kPhys.fine_structure > 0);
  CHECK(kPhys.fine_structure < 0.01);
}

TEST_CASE("oscillator frequency from the closed form") {
  // (2 hbar c / d) sqrt(2 V0 / E), evaluated by hand
  const double expected4 = 2.0 * 1973.27 / 1.26 * std::sqrt(2.0 * 23.0 / 4e9);
  CHECK(oscillator_frequency(diamond, 4e9) == Approx(expected4).epsilon(1e-14));
  CHECK(oscillator_frequency(diamond, 4e9) == Approx(0.3359).epsilon(1e-4));
  CHECK(oscillator_frequency(diamond, 10e9) == Approx(0.2124).epsilon(1e-3));

  CrystalChannel deep = diamond;
  deep.well_depth_eV *= 4;
  CHECK(oscillator_frequency(deep, 10e9) == Approx(2.0 * oscillator_frequency(diamond, 10e9)).epsilon(1e-14));

  CHECK(error_code([] { oscillator_frequency(diamond.as_shape(PotentialShape::poschl_teller), 1e10); }) ==
        Errc::unsupported_shape);
  CHECK(error_code([] { oscillator_frequency(diamond, 0.0); }) == Errc::invalid_input);
}

TEST_CASE("level energies") {
  const auto ls = level_structure(diamond, 10e9);
  CHECK(level_energy(ls, 0) == Approx(ls.omega_eV / 2).epsilon(1e-15));
  CHECK(level_energy(ls, 10) - level_energy(ls, 9) == Approx(ls.omega_eV).epsilon(1e-12));
  CHECK(error_code([&] { level_energy(ls, -1); }) == Errc::index_out_of_range);
  CHECK(error_code([&] { level_energy(ls, ls.n_max + 1); }) == Errc::index_out_of_range);

  const auto ls4 = level_structure(diamond, 4e9);
  CHECK(level_energy(ls4, 66) == Approx(22.34).epsilon(1e-3));
  CHECK(level_energy(ls4, ls4.n_max) <= 23.0);
  CHECK(level_energy(ls4, ls4.n_max) + ls4.omega_eV > 23.0);
}

TEST_CASE("bound level count") {
  CHECK(max_bound_level(diamond, 10e9) == 107);
  CHECK(max_bound_level(diamond, 4e9) == 67);
  CHECK(std::abs(max_bound_level(diamond, 14e9) - 127) <= 3);

  CrystalChannel shallow = diamond;
  shallow.well_depth_eV = 1e-3;
  CHECK(error_code([&] { max_bound_level(shallow, 1e9); }) == Errc::degenerate_well);
}

TEST_CASE("Lindhard angle") {
  CHECK(lindhard_angle(diamond, 4e9) == Approx(107.2e-6).epsilon(1e-3));
  CHECK(lindhard_angle(diamond, 14e9) == Approx(57.3e-6).epsilon(1e-3));
  CHECK(lindhard_angle(diamond, 16e9) == Approx(lindhard_angle(diamond, 4e9) / 2).epsilon(1e-15));
  const auto ls = level_structure(diamond, 6e9);
  CHECK(ls.theta_L_rad == std::sqrt(2.0 * 23.0 / 6e9));
  CHECK(ls.gamma == 6e9 / kPhys.electron_mass_eV);
}

TEST_CASE("scaling invariants over energy") {
  const std::vector<double> energies{1e9, 2.5e9, 4e9, 6e9, 10e9, 14e9, 30e9, 100e9};
  const double omega_ref = oscillator_frequency(diamond, energies[0]) * std::sqrt(energies[0]);
  const double theta_ref = lindhard_angle(diamond, energies[0]) * std::sqrt(energies[0]);
  // V0 / Omega grows exactly as sqrt(E); n_max is its floor less one half
  const double depth_ratio = 23.0 / oscillator_frequency(diamond, energies[0]) / std::sqrt(energies[0]);
  double prev_omega = INFINITY;
  int prev_nmax = 0;
  for (double e : energies) {
    CAPTURE(e);
    const double omega = oscillator_frequency(diamond, e);
    CHECK(omega * std::sqrt(e) == Approx(omega_ref).epsilon(1e-12));
    CHECK(lindhard_angle(diamond, e) * std::sqrt(e) == Approx(theta_ref).epsilon(1e-12));
    const int n = max_bound_level(diamond, e);
    CHECK(std::abs(n - (depth_ratio * std::sqrt(e) - 0.5)) <= 1.0);
    CHECK(omega < prev_omega);
    CHECK(n >= prev_nmax);
    prev_omega = omega;
    prev_nmax = n;
  }
}

TEST_CASE("level structure derived fields") {
  const auto ls = level_structure(diamond, 10e9);
  CHECK(ls.xi_scale == Approx(std::sqrt(10e9 / ls.omega_eV)).epsilon(1e-15));
  CHECK(ls.n0(31e-6) == Approx(22.6187).epsilon(1e-5));
  CHECK(ls.n0(ls.theta_L_rad) == Approx(23.0 / ls.omega_eV).epsilon(1e-12));
}

TEST_CASE("Doppler frequency") {
  const auto ls = level_structure(diamond, 4e9);
  CHECK(doppler_frequency(ls, 1, 0.0) == Approx(41.16e6).epsilon(1e-3));
  CHECK(doppler_frequency(ls, 1, 1.0 / ls.gamma) == Approx(doppler_frequency(ls, 1, 0) / 2).epsilon(1e-15));
  CHECK(doppler_frequency(ls, 2, 0.0) == Approx(2 * doppler_frequency(ls, 1, 0)).epsilon(1e-15));

  const double ref = doppler_frequency(ls, 3, 0.0);
  double prev = INFINITY;
  for (int k = 0; k <= 40; ++k) {
    const double theta = k * 5e-6;
    const double w = doppler_frequency(ls, 3, theta);
    CHECK(w * (1 + ls.gamma * ls.gamma * theta * theta) == Approx(ref).epsilon(1e-12));
    CHECK(w < prev);
    prev = w;
  }
  CHECK(error_code([&] { doppler_frequency(ls, 0, 0.0); }) == Errc::invalid_harmonic);
  CHECK(error_code([&] { doppler_frequency(ls, 1, -1e-6); }) == Errc::invalid_input);
}

TEST_CASE("Poschl-Teller spectrum against a shooting solver") {
  CrystalChannel pt = diamond.as_shape(PotentialShape::poschl_teller);
  pt.width_b_A = 0.315;
  const double e = 10e9;
  const auto levels = poschl_teller_levels(pt, e);
  REQUIRE(levels.size() > 8);

  const double b = 0.315 / kPhys.hbar_c_eV_A;
  const oracle::ShootingWell well{2.0 * e * 23.0 * b * b};

  for (int n : {0, 1, 2, 7, 30, 61, 100}) {
    CAPTURE(n);
    REQUIRE(n < static_cast<int>(levels.size()));
    CHECK(levels[n] == Approx(23.0 * well.level(n)).epsilon(1e-6));
  }
  // Level count: every state below a quarter of the top level is counted.
  const double probe = 0.25 * levels.back() / 23.0;
  const int count = well.nodes(probe, true) + well.nodes(probe, false);
  CHECK(count == static_cast<int>(levels.size()));
}

TEST_CASE("Poschl-Teller levels are bound and non-equidistant") {
  const auto pt = diamond.as_shape(PotentialShape::poschl_teller);
  CHECK(pt.effective_width_A() == Approx(1.26 / 4));
  for (double e : {4e9, 6e9, 8e9, 10e9, 12e9, 14e9}) {
    CAPTURE(e);
    const auto lv = poschl_teller_levels(pt, e);
    REQUIRE(lv.size() >= 3);
    CHECK(lv[0] > -23.0);
    CHECK(lv.back() < 0.0);
    CHECK((lv[1] - lv[0]) != doctest::Approx(lv[2] - lv[1]).epsilon(1e-9));
    CHECK(equidistance_deviation(lv) > 0.0);
  }
  CHECK(error_code([] { poschl_teller_levels(diamond, 1e10); }) == Errc::unsupported_shape);
}

TEST_CASE("equidistance deviation") {
  const auto ls = level_structure(diamond, 10e9);
  CHECK(equidistance_deviation(harmonic_levels(ls)) < 1e-12);

  CrystalChannel pt = diamond.as_shape(PotentialShape::poschl_teller);
  pt.width_b_A = 0.315;
  const auto lv = poschl_teller_levels(pt, 10e9);
  // direct evaluation from the listed levels
  std::vector<double> gaps;
  for (std::size_t i = 1; i < lv.size(); ++i) gaps.push_back(lv[i] - lv[i - 1]);
  double mean = 0;
  for (double g : gaps) mean += g;
  mean /= static_cast<double>(gaps.size());
  double worst = 0;
  for (std::size_t i = 1; i < gaps.size(); ++i) worst = std::max(worst, std::abs(gaps[i] - gaps[i - 1]) / mean);
  CHECK(equidistance_deviation(lv) == Approx(worst).epsilon(1e-12));

  const std::vector<double> two{1.0, 2.0};
  CHECK(error_code([&] { equidistance_deviation(two); }) == Errc::insufficient_data);
}

TEST_CASE("channel and beam validation") {
  CHECK_NOTHROW(diamond.validate());
  CrystalChannel bad = diamond;
  bad.well_depth_eV = -1;
  CHECK(error_code([&] { bad.validate(); }) == Errc::invalid_input);
  CrystalChannel bad_pt = diamond.as_shape(PotentialShape::poschl_teller);
  bad_pt.width_b_A = 0.0;
  CHECK(error_code([&] { bad_pt.validate(); }) == Errc::invalid_input);

  Beam beam;
  CHECK_NOTHROW(beam.validate());
  beam.energy_eV = 5e7;
  CHECK(error_code([&] { beam.validate(); }) == Errc::invalid_input);
  beam = Beam{};
  beam.sigma_theta_rad = -1e-6;
  CHECK(error_code([&] { beam.validate(); }) == Errc::invalid_input);
}

TEST_CASE("deterministic level structure") {
  const auto a = level_structure(diamond, 14e9);
  const auto b = level_structure(diamond, 14e9);
  CHECK(a.omega_eV == b.omega_eV);
  CHECK(a.n_max == b.n_max);
  CHECK(a.theta_L_rad == b.theta_L_rad);
  CHECK(a.xi_scale == b.xi_scale);
}
