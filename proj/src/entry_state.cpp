#include "chanrad/entry_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chanrad/error.hpp"

namespace chanrad {

namespace {

constexpr double kRescaleAbove = 1e200;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// log(10^-30): amplitudes below this are flushed to zero.
const double kLogTruncation = -30.0 * std::numbers::ln10;

std::complex<double> i_pow(int n) {
  switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void check_xi(double xi) {
  if (!(std::abs(xi) < 40.0)) throw Error(Errc::invalid_input, "|xi| must be < 40");
}

// log|c_n| and sign -> normalized amplitudes, with the i^n ladder applied.
EntryState::Amplitudes assemble(const std::vector<std::pair<double, int>>& log_terms) {
  double peak = kNegInf;
  for (const auto& [lg, sign] : log_terms)
    if (sign != 0) peak = std::max(peak, lg);
  if (peak == kNegInf) throw Error(Errc::empty_population, "all entry amplitudes vanish");

  double z = 0;
  for (const auto& [lg, sign] : log_terms)
    if (sign != 0) z += std::exp(2.0 * (lg - peak));
  const double log_norm = peak + 0.5 * std::log(z);

  EntryState::Amplitudes out(log_terms.size());
  for (std::size_t n = 0; n < log_terms.size(); ++n) {
    const auto [lg, sign] = log_terms[n];
    const double lc = lg - log_norm;
    if (sign == 0 || lc < kLogTruncation) continue;
    out[n] = static_cast<double>(sign) * std::exp(lc) * i_pow(static_cast<int>(n));
  }
  return out;
}

}  // namespace

std::vector<std::pair<double, int>> log_hermite_functions(int n_max, double xi) {
  check_xi(xi);
  if (n_max < 0) throw Error(Errc::index_out_of_range, "n_max must be >= 0");

  std::vector<std::pair<double, int>> out(n_max + 1);
  auto store = [&](int n, double v, double log_scale) {
    out[n] = v == 0.0 ? std::pair{kNegInf, 0} : std::pair{std::log(std::abs(v)) + log_scale, v > 0 ? 1 : -1};
  };

  // Mantissas p_{n-1}, p_n share the exponent log_scale.
  double log_scale = -0.5 * xi * xi;
  double prev = 0.0;
  double cur = std::pow(std::numbers::pi, -0.25);
  store(0, cur, log_scale);
  for (int n = 1; n <= n_max; ++n) {
    const double next = xi * std::sqrt(2.0 / n) * cur - std::sqrt((n - 1.0) / n) * prev;
    prev = cur;
    cur = next;
    if (std::abs(cur) > kRescaleAbove) {
      prev /= kRescaleAbove;
      cur /= kRescaleAbove;
      log_scale += std::log(kRescaleAbove);
    }
    store(n, cur, log_scale);
  }
  return out;
}

double hermite_function(int n, double xi) {
  if (n < 0) throw Error(Errc::index_out_of_range, "Hermite order must be >= 0");
  const auto [lg, sign] = log_hermite_functions(n, xi).back();
  return sign == 0 ? 0.0 : sign * std::exp(lg);
}

EntryState::EntryState(PopulationModel model, double xi0, Amplitudes amplitudes,
                       PhaseConvention convention)
    : model_(model), convention_(convention), xi0_(xi0), amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.empty()) throw Error(Errc::invalid_input, "entry state needs at least one level");
}

double EntryState::alpha() const { return xi0_ / std::numbers::sqrt2; }

EntryState entry_amplitudes(const LevelStructure& ls, double theta_in_rad, PopulationModel model,
                            PhaseConvention convention) {
  if (!(theta_in_rad >= 0)) throw Error(Errc::invalid_input, "theta_in must be >= 0");
  if (ls.n_max < 1) throw Error(Errc::degenerate_well, "well holds fewer than two bound levels");

  const double xi0 = ls.xi0(theta_in_rad);
  std::vector<std::pair<double, int>> log_terms;

  if (model == PopulationModel::hermite) {
    log_terms = log_hermite_functions(ls.n_max, xi0);
  } else {
    // c_n ~ exp(-n0/2) alpha^n / sqrt(n!), alpha = xi0/sqrt(2)
    log_terms.resize(ls.n_max + 1, {kNegInf, 0});
    log_terms[0] = {0.0, 1};
    if (xi0 > 0) {
      const double log_alpha = std::log(xi0 / std::numbers::sqrt2);
      for (int n = 0; n <= ls.n_max; ++n)
        log_terms[n] = {n * log_alpha - 0.5 * std::lgamma(n + 1.0), 1};
    }
  }
  return EntryState(model, xi0, assemble(log_terms), convention);
}

std::vector<double> populations(const EntryState& es) {
  std::vector<double> p;
  p.reserve(es.amplitudes().size());
  for (const auto& c : es.amplitudes()) p.push_back(std::norm(c));
  return p;
}

std::vector<LevelPopulation> population_distribution(const EntryState& es) {
  const auto p = populations(es);
  std::vector<LevelPopulation> out(p.size());
  for (std::size_t n = 0; n < p.size(); ++n) out[n] = {static_cast<int>(n), p[n]};
  return out;
}

double mean_occupancy(const EntryState& es) {
  const auto p = populations(es);
  double mean = 0;
  for (std::size_t n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p[n];
  return mean;
}

}  // namespace chanrad
