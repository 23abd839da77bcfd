#include "chanrad/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chanrad/error.hpp"

namespace chanrad {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::unsupported_shape: return "unsupported-shape";
    case Errc::index_out_of_range: return "index";
    case Errc::degenerate_well: return "degenerate-well";
    case Errc::invalid_harmonic: return "invalid-harmonic";
    case Errc::insufficient_data: return "insufficient-data";
    case Errc::dimension_mismatch: return "dimension";
    case Errc::empty_population: return "empty-population";
    case Errc::invalid_input: return "invalid-input";
    case Errc::validation: return "validation";
    case Errc::io: return "io";
  }
  return "unknown";
}

void CrystalChannel::validate() const {
  std::ostringstream problems;
  if (!(well_depth_eV > 0)) problems << " well_depth_V0 must be > 0;";
  if (!(spacing_A > 0)) problems << " spacing_d must be > 0;";
  if (shape == PotentialShape::poschl_teller && width_b_A && !(*width_b_A > 0))
    problems << " width_b must be > 0;";
  if (!problems.str().empty()) throw Error(Errc::invalid_input, "channel" + problems.str());
}

void Beam::validate() const {
  std::ostringstream problems;
  if (!(energy_eV >= 1e8)) problems << " energy must be >= 1e8 eV;";
  if (!(theta_in_rad >= 0)) problems << " theta_in must be >= 0;";
  if (sigma_theta_rad && !(*sigma_theta_rad >= 0)) problems << " sigma_theta must be >= 0;";
  if (!problems.str().empty()) throw Error(Errc::invalid_input, "beam" + problems.str());
}

namespace {

void require_parabolic(const CrystalChannel& channel) {
  if (channel.shape != PotentialShape::parabolic)
    throw Error(Errc::unsupported_shape, "closed-form oscillator quantities need a parabolic well");
}

void require_positive_energy(double energy_eV) {
  if (!(energy_eV > 0)) throw Error(Errc::invalid_input, "beam energy must be > 0");
}

}  // namespace

double oscillator_frequency(const CrystalChannel& channel, double energy_eV) {
  require_parabolic(channel);
  require_positive_energy(energy_eV);
  // V = V0 (2x/d)^2 with transverse mass E  =>  Omega = (2/d) sqrt(2 V0 / E)
  const double inv_d_eV = kPhys.hbar_c_eV_A / channel.spacing_A;
  return 2.0 * inv_d_eV * std::sqrt(2.0 * channel.well_depth_eV / energy_eV);
}

double level_energy(const LevelStructure& ls, int n) {
  if (n < 0 || n > ls.n_max)
    throw Error(Errc::index_out_of_range,
                "level " + std::to_string(n) + " outside [0, " + std::to_string(ls.n_max) + "]");
  return ls.omega_eV * (n + 0.5);
}

int max_bound_level(const CrystalChannel& channel, double energy_eV) {
  const double omega = oscillator_frequency(channel, energy_eV);
  const double n = std::floor(channel.well_depth_eV / omega - 0.5);
  if (n < 1) throw Error(Errc::degenerate_well, "well holds fewer than two bound levels");
  return static_cast<int>(n);
}

double lindhard_angle(const CrystalChannel& channel, double energy_eV) {
  require_positive_energy(energy_eV);
  return std::sqrt(2.0 * channel.well_depth_eV / energy_eV);
}

double lorentz_gamma(double energy_eV) { return energy_eV / kPhys.electron_mass_eV; }

LevelStructure level_structure(const CrystalChannel& channel, double energy_eV) {
  channel.validate();
  LevelStructure ls;
  ls.energy_eV = energy_eV;
  ls.well_depth_eV = channel.well_depth_eV;
  ls.omega_eV = oscillator_frequency(channel, energy_eV);
  ls.n_max = max_bound_level(channel, energy_eV);
  ls.theta_L_rad = lindhard_angle(channel, energy_eV);
  ls.gamma = lorentz_gamma(energy_eV);
  ls.xi_scale = std::sqrt(energy_eV / ls.omega_eV);
  return ls;
}

double doppler_frequency(const LevelStructure& ls, int j, double theta_obs_rad) {
  if (j < 1) throw Error(Errc::invalid_harmonic, "harmonic order must be >= 1");
  if (!(theta_obs_rad >= 0)) throw Error(Errc::invalid_input, "observation angle must be >= 0");
  const double g2 = ls.gamma * ls.gamma;
  return 2.0 * g2 * j * ls.omega_eV / (1.0 + g2 * theta_obs_rad * theta_obs_rad);
}

double poschl_teller_strength(const CrystalChannel& channel, double energy_eV) {
  if (channel.shape != PotentialShape::poschl_teller)
    throw Error(Errc::unsupported_shape, "Poschl-Teller levels need a cosh^-2 well");
  require_positive_energy(energy_eV);
  const double b = channel.effective_width_A() / kPhys.hbar_c_eV_A;  // eV^-1
  const double lambda = 2.0 * energy_eV * channel.well_depth_eV * b * b;
  return 0.5 * (-1.0 + std::sqrt(1.0 + 4.0 * lambda));
}

std::vector<double> poschl_teller_levels(const CrystalChannel& channel, double energy_eV) {
  const double s = poschl_teller_strength(channel, energy_eV);
  std::vector<double> levels;
  if (!(s > 0)) return levels;
  const double b = channel.effective_width_A() / kPhys.hbar_c_eV_A;
  const double scale = 1.0 / (2.0 * energy_eV * b * b);
  for (int n = 0; n < s; ++n) {
    const double k = s - n;
    levels.push_back(-scale * k * k);
  }
  return levels;
}

double equidistance_deviation(std::span<const double> levels) {
  if (levels.size() < 3)
    throw Error(Errc::insufficient_data, "equidistance check needs at least three levels");
  std::vector<double> gaps(levels.size() - 1);
  for (std::size_t n = 0; n < gaps.size(); ++n) gaps[n] = levels[n + 1] - levels[n];
  const double mean = (levels.back() - levels.front()) / static_cast<double>(gaps.size());
  double worst = 0;
  for (std::size_t i = 0; i + 1 < gaps.size(); ++i)
    worst = std::max(worst, std::abs(gaps[i + 1] - gaps[i]));
  return worst / std::abs(mean);
}

std::vector<double> harmonic_levels(const LevelStructure& ls) {
  std::vector<double> out(ls.n_max + 1);
  for (int n = 0; n <= ls.n_max; ++n) out[n] = level_energy(ls, n);
  return out;
}

}  // namespace chanrad
