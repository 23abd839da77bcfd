#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "chanrad/entry_state.hpp"
#include "chanrad/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace chanrad;
using doctest::Approx;

namespace {

const CrystalChannel diamond = CrystalChannel::diamond_110();

double total(const std::vector<double>& p) {
  double s = 0;
  for (double v : p) s += v;
  return s;
}

int argmax(const std::vector<double>& p) {
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

void check_relative(double got, double want, double tol) {
  if (want == 0.0) {
    CHECK(std::abs(got) < 1e-300);
    return;
  }
  CHECK(std::abs(got - want) <= tol * std::abs(want));
}

}  // namespace

TEST_CASE("hermite function closed values") {
  CHECK(hermite_function(0, 0.0) == Approx(std::pow(std::numbers::pi, -0.25)).epsilon(1e-15));
  CHECK(hermite_function(0, 0.0) == Approx(0.75113).epsilon(1e-5));
  CHECK(hermite_function(1, 0.0) == 0.0);
  CHECK(hermite_function(3, 0.0) == 0.0);
  CHECK_THROWS_AS(hermite_function(2, 40.0), Error);
  CHECK_THROWS_AS(hermite_function(-1, 1.0), Error);
}

TEST_CASE("hermite function against 50-digit naive Hermite, n <= 20") {
  for (double xi : {0.5, 3.4, 6.7, -2.2}) {
    for (int n = 0; n <= 20; ++n) {
      CAPTURE(xi);
      CAPTURE(n);
      check_relative(hermite_function(n, xi), static_cast<double>(oracle::hermite_function(n, xi)), 1e-10);
    }
  }
}

TEST_CASE("hermite function against 50-digit naive Hermite, n <= 200") {
  for (double xi : {0.1, 1.0, 4.75, 9.3, 13.0, 17.5, 20.0}) {
    for (int n = 0; n <= 200; n += 7) {
      CAPTURE(xi);
      CAPTURE(n);
      const double want = static_cast<double>(oracle::hermite_function(n, xi));
      // values that underflow a double are out of scope for the comparison
      if (std::abs(want) < 1e-290) continue;
      check_relative(hermite_function(n, xi), want, 1e-6);
    }
  }
}

TEST_CASE("hermite function stays finite to n = 1000") {
  for (double xi : {0.0, 5.0, 25.0, 39.0}) {
    for (int n : {0, 10, 500, 999, 1000}) {
      CAPTURE(xi);
      CAPTURE(n);
      CHECK(std::isfinite(hermite_function(n, xi)));
    }
  }
}

TEST_CASE("hermite function parity") {
  for (int n = 0; n <= 30; ++n) {
    const double s = n % 2 == 0 ? 1.0 : -1.0;
    CHECK(hermite_function(n, -2.3) == Approx(s * hermite_function(n, 2.3)).epsilon(1e-13));
  }
}

TEST_CASE("normalization over models and angles") {
  for (double e : {4e9, 7e9, 14e9}) {
    const auto ls = level_structure(diamond, e);
    for (int k = 0; k <= 10; ++k) {
      const double theta = ls.theta_L_rad * k / 10.0;
      for (auto model : {PopulationModel::glauber, PopulationModel::hermite}) {
        CAPTURE(e);
        CAPTURE(k);
        const auto p = populations(entry_amplitudes(ls, theta, model));
        CHECK(std::abs(total(p) - 1.0) <= 1e-12);
        CHECK(std::all_of(p.begin(), p.end(), [](double v) { return v >= 0; }));
        CHECK(p.size() == static_cast<std::size_t>(ls.n_max + 1));
      }
    }
  }
}

TEST_CASE("glauber populations are the truncated Poisson law") {
  const auto ls = level_structure(diamond, 10e9);
  for (double theta : {5e-6, 31e-6, 60e-6}) {
    const auto es = entry_amplitudes(ls, theta, PopulationModel::glauber);
    const double n0 = ls.n0(theta);
    std::vector<double> poisson(ls.n_max + 1);
    double norm = 0;
    for (int n = 0; n <= ls.n_max; ++n) {
      poisson[n] = std::exp(-n0 + n * std::log(n0) - std::lgamma(n + 1.0));
      norm += poisson[n];
    }
    const auto p = populations(es);
    for (int n = 0; n <= ls.n_max; ++n) {
      CAPTURE(n);
      const double want = poisson[n] / norm;
      if (want < 1e-55) {
        CHECK(p[n] < 1e-55);
      } else {
        CHECK(std::abs(p[n] - want) <= 1e-12);
      }
    }
  }
}

TEST_CASE("zero entry angle") {
  const auto ls = level_structure(diamond, 10e9);
  const auto g = populations(entry_amplitudes(ls, 0.0, PopulationModel::glauber));
  CHECK(g[0] == 1.0);
  CHECK(std::all_of(g.begin() + 1, g.end(), [](double v) { return v == 0.0; }));
  CHECK(mean_occupancy(entry_amplitudes(ls, 0.0, PopulationModel::glauber)) == 0.0);

  const auto h = entry_amplitudes(ls, 0.0, PopulationModel::hermite);
  for (int n = 1; n <= ls.n_max; n += 2) CHECK(h.amplitudes()[n] == std::complex<double>(0.0, 0.0));
  CHECK(populations(h)[2] > 0.0);
}

TEST_CASE("glauber mean occupancy") {
  const auto ls10 = level_structure(diamond, 10e9);
  CHECK(mean_occupancy(entry_amplitudes(ls10, 31e-6, PopulationModel::glauber)) == Approx(22.6).epsilon(0.1 / 22.6));
  const auto ls4 = level_structure(diamond, 4e9);
  CHECK(mean_occupancy(entry_amplitudes(ls4, 31e-6, PopulationModel::glauber)) == Approx(5.72).epsilon(0.05 / 5.72));

  for (double e : {4e9, 10e9, 14e9}) {
    const auto ls = level_structure(diamond, e);
    for (int k = 1; k <= 20; ++k) {
      const double theta = ls.theta_L_rad * k / 20.0;
      const double n0 = ls.n0(theta);
      if (n0 >= ls.n_max / 2.0) break;
      CAPTURE(e);
      CAPTURE(theta);
      CHECK(std::abs(mean_occupancy(entry_amplitudes(ls, theta, PopulationModel::glauber)) - n0) < 1e-6 * n0);
    }
  }
}

TEST_CASE("Poisson shape checks") {
  const auto ls = level_structure(diamond, 10e9);
  // n0 = 1
  const double theta1 = std::sqrt(2.0) / ls.xi_scale;
  const auto p1 = populations(entry_amplitudes(ls, theta1, PopulationModel::glauber));
  CHECK(p1[0] == Approx(p1[1]).epsilon(1e-12));
  CHECK(p1[0] == Approx(std::exp(-1.0)).epsilon(1e-12));

  const auto p = populations(entry_amplitudes(ls, 31e-6, PopulationModel::glauber));
  const int mode = argmax(p);
  CHECK((mode == 22 || mode == 23));
}

TEST_CASE("hermite populations against the extended-precision projection") {
  for (double e : {4e9, 10e9}) {
    const auto ls = level_structure(diamond, e);
    const double xi0 = ls.xi0(31e-6);
    const auto ref = oracle::hermite_populations(ls.n_max, xi0);
    const auto es = entry_amplitudes(ls, 31e-6, PopulationModel::hermite);
    const auto p = populations(es);
    double ref_mean = 0;
    for (int n = 0; n <= ls.n_max; ++n) {
      CAPTURE(n);
      ref_mean += n * ref[n];
      CHECK(std::abs(p[n] - ref[n]) <= 1e-12);
    }
    CHECK(mean_occupancy(es) == Approx(ref_mean).epsilon(1e-10));
  }
}

TEST_CASE("hermite peak sits near n0 while its tail inflates the mean") {
  const auto ls10 = level_structure(diamond, 10e9);
  const auto es10 = entry_amplitudes(ls10, 31e-6, PopulationModel::hermite);
  const double n0 = ls10.n0(31e-6);
  CHECK(std::abs(argmax(populations(es10)) - n0) <= 0.2 * n0);

  // The projection decays like a power law rather than factorially, so the
  // bound-state mean is far above n0 even though the peak is not.
  const auto ls4 = level_structure(diamond, 4e9);
  const auto es4 = entry_amplitudes(ls4, 31e-6, PopulationModel::hermite);
  CHECK(mean_occupancy(es4) > 2.0 * ls4.n0(31e-6));
  CHECK(mean_occupancy(es10) > 2.0 * n0);
}

TEST_CASE("phase ladder in the literal convention") {
  const auto ls = level_structure(diamond, 10e9);
  const auto es = entry_amplitudes(ls, 31e-6, PopulationModel::glauber, PhaseConvention::literal_in_phase);
  CHECK(es.phase_convention() == PhaseConvention::literal_in_phase);
  const auto& c = es.amplitudes();
  int checked = 0;
  for (int n = 1; n <= es.n_max(); ++n) {
    if (c[n] == 0.0 || c[n - 1] == 0.0) continue;
    double d = std::arg(c[n]) - std::arg(c[n - 1]);
    d = std::remainder(d, 2 * std::numbers::pi);
    CHECK(std::abs(std::abs(d) - std::numbers::pi / 2) < 1e-12);
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("entry state accessors") {
  const auto ls = level_structure(diamond, 6e9);
  const auto es = entry_amplitudes(ls, 20e-6, PopulationModel::glauber);
  CHECK(es.xi0() == Approx(ls.xi0(20e-6)).epsilon(1e-15));
  CHECK(es.n0() == Approx(ls.n0(20e-6)).epsilon(1e-15));
  CHECK(es.alpha() == Approx(es.xi0() / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(es.n_max() == ls.n_max);
  const auto dist = population_distribution(es);
  REQUIRE(dist.size() == static_cast<std::size_t>(ls.n_max + 1));
  for (int n = 0; n <= ls.n_max; ++n) CHECK(dist[n].n == n);

  CHECK_THROWS_AS(entry_amplitudes(ls, -1e-6, PopulationModel::glauber), Error);
}

TEST_CASE("large n0 stays finite") {
  CrystalChannel deep = diamond;
  deep.well_depth_eV = 200.0;
  const auto ls = level_structure(deep, 14e9);
  const auto es = entry_amplitudes(ls, 0.85 * ls.theta_L_rad, PopulationModel::glauber);
  CHECK(es.n0() > 150.0);
  const auto p = populations(es);
  CHECK(std::all_of(p.begin(), p.end(), [](double v) { return std::isfinite(v); }));
  CHECK(std::abs(total(p) - 1.0) <= 1e-12);
}
