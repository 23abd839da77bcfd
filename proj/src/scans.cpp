#include "chanrad/scans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "chanrad/error.hpp"
#include "chanrad/parallel.hpp"
#include "chanrad/quadrature.hpp"

namespace chanrad {

double enhancement_at(const LevelStructure& ls, double theta_in_rad, int j, const ScanOptions& opt) {
  const auto es = entry_amplitudes(ls, theta_in_rad, opt.model, opt.phase);
  try {
    return enhancement_factor(es, matrix_elements(ls, j));
  } catch (const Error& e) {
    if (e.code() == Errc::empty_population) return 1.0;
    throw;
  }
}

EnergyTable energy_table(const CrystalChannel& channel, std::span<const double> energies_eV,
                         double theta_in_rad, std::span<const double> exp_peaks_eV, const ScanOptions& opt) {
  if (!exp_peaks_eV.empty() && exp_peaks_eV.size() != energies_eV.size())
    throw Error(Errc::invalid_input, "experimental peaks must match the energy list one to one");
  for (double e : energies_eV)
    if (!(e >= units::GeV)) throw Error(Errc::invalid_input, "energy table rows need E >= 1 GeV");

  EnergyTable table{theta_in_rad, std::vector<EnergyTableRow>(energies_eV.size())};
  parallel_for(energies_eV.size(), opt.threads, [&](std::size_t i) {
    const auto ls = level_structure(channel, energies_eV[i]);
    EnergyTableRow row{};
    row.energy_eV = ls.energy_eV;
    row.omega_eV = ls.omega_eV;
    row.n_max = ls.n_max;
    row.theta_L_rad = ls.theta_L_rad;
    row.gamma = ls.gamma;
    row.omega1_dipole_eV = doppler_frequency(ls, 1, 0.0);
    row.n0 = ls.n0(theta_in_rad);
    row.g1 = enhancement_at(ls, theta_in_rad, 1, opt);
    if (!exp_peaks_eV.empty()) {
      row.omega1_exp_eV = exp_peaks_eV[i];
      row.dipole_over_exp = row.omega1_dipole_eV / exp_peaks_eV[i];
    }
    table.rows[i] = row;
  });
  return table;
}

namespace {

void check_grid(std::span<const double> grid, double theta_L) {
  if (grid.empty()) throw Error(Errc::invalid_input, "theta grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0) || grid[i] > 0.9 * theta_L * (1 + 1e-12))
      throw Error(Errc::invalid_input, "theta grid must lie within [0, 0.9 theta_L]");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw Error(Errc::invalid_input, "theta grid must be strictly increasing");
  }
}

}  // namespace

double log_log_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error(Errc::insufficient_data, "log-log fit needs at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ThetaScan theta_scan(const CrystalChannel& channel, double energy_eV, std::span<const double> theta_grid_rad,
                     int j, const ScanOptions& opt) {
  const auto ls = level_structure(channel, energy_eV);
  check_grid(theta_grid_rad, ls.theta_L_rad);
  matrix_elements(ls, j);  // validates j before fanning out

  ThetaScan scan{energy_eV, ls.theta_L_rad, j, opt, std::vector<ThetaScanPoint>(theta_grid_rad.size()), {}};
  parallel_for(theta_grid_rad.size(), opt.threads, [&](std::size_t i) {
    const double theta = theta_grid_rad[i];
    const double n0 = ls.n0(theta);
    scan.points[i] = {theta, theta / ls.theta_L_rad, enhancement_at(ls, theta, j, opt), n0,
                      kSqrtScalingCoefficient * std::sqrt(n0)};
  });

  const auto first = std::find_if(scan.points.begin(), scan.points.end(),
                                  [](const ThetaScanPoint& p) { return p.theta_rad > 0 && p.g > 1.05; });
  if (first != scan.points.end()) {
    const double lo = first->theta_rad, hi = 10.0 * lo;
    std::vector<double> xs, ys;
    for (auto it = first; it != scan.points.end() && it->theta_rad <= hi; ++it) {
      xs.push_back(it->theta_rad);
      ys.push_back(it->g);
    }
    if (xs.size() >= 2)
      scan.small_angle_fit = LogSlopeFit{lo, xs.back(), log_log_slope(xs, ys), static_cast<int>(xs.size())};
  }
  return scan;
}

PopulationGrid population_grid(const CrystalChannel& channel, double energy_eV,
                               std::span<const double> theta_grid_rad, const ScanOptions& opt) {
  const auto ls = level_structure(channel, energy_eV);
  check_grid(theta_grid_rad, ls.theta_L_rad);
  PopulationGrid grid{energy_eV,
                      ls.theta_L_rad,
                      opt.model,
                      {theta_grid_rad.begin(), theta_grid_rad.end()},
                      ls.n_max,
                      std::vector<std::vector<double>>(theta_grid_rad.size())};
  parallel_for(theta_grid_rad.size(), opt.threads, [&](std::size_t i) {
    grid.columns[i] = populations(entry_amplitudes(ls, theta_grid_rad[i], opt.model, opt.phase));
  });
  return grid;
}

namespace {

// (2/sqrt(pi)) * integral_0^inf g(x) exp(-x^2) dx, with an optional kink at
// x = split handled by Gauss-Legendre on [0, split]. A kink past x = 12 sits
// under weight < 1e-62 and is ignored.
template <class G>
double half_line_average(G&& g, int points, std::optional<double> split, unsigned threads) {
  struct Node {
    double x, w;
  };
  std::vector<Node> nodes;
  const auto tail = quadrature::half_range_hermite(points);
  if (split && *split > 0 && *split < 12.0) {
    const double s = *split;
    const auto head = quadrature::gauss_legendre(points, 0.0, s);
    for (int i = 0; i < points; ++i)
      nodes.push_back({head.nodes[i], head.weights[i] * std::exp(-head.nodes[i] * head.nodes[i])});
    // x = s + t:  exp(-x^2) = exp(-t^2) * exp(-s^2 - 2 s t)
    for (int i = 0; i < points; ++i) {
      const double t = tail.nodes[i];
      nodes.push_back({s + t, tail.weights[i] * std::exp(-s * s - 2.0 * s * t)});
    }
  } else {
    for (int i = 0; i < points; ++i) nodes.push_back({tail.nodes[i], tail.weights[i]});
  }

  std::vector<double> terms(nodes.size());
  parallel_for(nodes.size(), threads, [&](std::size_t i) { terms[i] = nodes[i].w * g(nodes[i].x); });
  double sum = 0;
  for (double t : terms) sum += t;
  return 2.0 / std::sqrt(std::numbers::pi) * sum;
}

}  // namespace

BeamAverage beam_average(const CrystalChannel& channel, double energy_eV, double sigma_rad,
                         BeamEstimator estimator, int quadrature_points, const ScanOptions& opt) {
  if (!(sigma_rad > 0)) throw Error(Errc::invalid_input, "beam divergence sigma must be > 0");
  if (quadrature_points < 32 || quadrature_points > kMaxBeamQuadraturePoints)
    throw Error(Errc::invalid_input, "beam average needs 32..128 quadrature points");
  const auto ls = level_structure(channel, energy_eV);

  // theta = sqrt(2) sigma x
  const double to_theta = std::numbers::sqrt2 * sigma_rad;
  auto eval = [&](int points) {
    if (estimator == BeamEstimator::eq7) {
      return half_line_average([&](double x) { return enhancement_at(ls, to_theta * x, 1, opt); }, points,
                               std::nullopt, opt.threads);
    }
    // n0(theta) = 1 at theta = sqrt(2) / xi_scale
    const double kink = std::numbers::sqrt2 / ls.xi_scale / to_theta;
    return half_line_average([&](double x) { return std::max(1.0, ls.n0(to_theta * x)); }, points, kink,
                             opt.threads);
  };

  BeamAverage out{};
  out.value = eval(quadrature_points);
  out.value_doubled = eval(2 * quadrature_points);
  out.relative_change = std::abs(out.value_doubled - out.value) / std::abs(out.value_doubled);
  out.converged = out.relative_change <= 1e-6;
  return out;
}

ScalingReport scaling_report(const ThetaScan& scan) {
  const double limit = 0.3 * scan.theta_L_rad * (1 + 1e-12);
  int below = 0;
  std::vector<double> th, g, n0, coh;
  for (const auto& p : scan.points) {
    if (p.theta_rad <= 0 || p.theta_rad > limit) continue;
    ++below;
    if (p.g <= 1.05) continue;
    th.push_back(p.theta_rad);
    g.push_back(p.g);
    n0.push_back(p.n0);
    coh.push_back(p.g * p.n0);
  }
  if (below < 10)
    throw Error(Errc::invalid_input, "scaling report needs >= 10 grid points in (0, 0.3 theta_L]");
  if (th.size() < 3) throw Error(Errc::invalid_input, "too few points with G > 1.05 to fit");

  ScalingReport r{};
  r.g_exponent = log_log_slope(th, g);
  r.incoherent_exponent = log_log_slope(th, n0);
  r.coherent_exponent = log_log_slope(th, coh);
  r.g_agrees = std::abs(r.g_exponent - r.claimed_g_exponent) <= r.tolerance;
  r.coherent_agrees = std::abs(r.coherent_exponent - r.claimed_coherent_exponent) <= r.tolerance;
  r.points_used = static_cast<int>(th.size());
  r.theta_max_rad = th.back();
  return r;
}

std::vector<WellComparisonRow> electron_comparison(const CrystalChannel& channel,
                                                   std::span<const double> energies_eV) {
  std::vector<WellComparisonRow> rows;
  const auto parabolic = channel.as_shape(PotentialShape::parabolic);
  const auto pt = channel.as_shape(PotentialShape::poschl_teller);
  for (double e : energies_eV) {
    const auto ls = level_structure(parabolic, e);
    const auto harm = harmonic_levels(ls);
    const auto levels = poschl_teller_levels(pt, e);
    WellComparisonRow row{};
    row.energy_eV = e;
    row.harmonic_levels = static_cast<int>(harm.size());
    row.harmonic_deviation = equidistance_deviation(harm);
    row.harmonic_spacing_eV = ls.omega_eV;
    row.pt_levels = static_cast<int>(levels.size());
    row.pt_deviation = levels.size() >= 3 ? equidistance_deviation(levels) : std::numeric_limits<double>::quiet_NaN();
    if (!levels.empty()) row.pt_ground_eV = levels.front();
    if (levels.size() >= 2) {
      row.pt_first_spacing_eV = levels[1] - levels[0];
      row.pt_last_spacing_eV = levels.back() - levels[levels.size() - 2];
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace chanrad
