#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chanrad/constants.hpp"

namespace chanrad {

enum class PotentialShape { parabolic, poschl_teller };

/// Static planar-channel parameters. `width_b_A` is only read for the
/// cosh^-2 (Poschl-Teller) well; it defaults to spacing/4 when unset.
struct CrystalChannel {
  std::string name = "diamond(110)";
  double well_depth_eV = 23.0;
  double spacing_A = 1.26;
  PotentialShape shape = PotentialShape::parabolic;
  std::optional<double> width_b_A;

  static CrystalChannel diamond_110() { return {}; }

  CrystalChannel as_shape(PotentialShape s) const {
    CrystalChannel out = *this;
    out.shape = s;
    return out;
  }

  double effective_width_A() const { return width_b_A.value_or(spacing_A / 4.0); }

  // Throws Errc::invalid_input on a non-physical parameter set.
  void validate() const;
};

struct Beam {
  double energy_eV = 10.0 * units::GeV;
  double theta_in_rad = 31.0 * units::urad;
  std::optional<double> sigma_theta_rad;

  void validate() const;
};

/// Closed-form transverse level structure of the parabolic well at one beam
/// energy.
struct LevelStructure {
  double energy_eV = 0;
  double well_depth_eV = 0;
  double omega_eV = 0;
  int n_max = 0;
  double theta_L_rad = 0;
  double gamma = 0;
  double xi_scale = 0;  // sqrt(E / Omega): xi0 = theta_in * xi_scale

  double xi0(double theta_in_rad) const { return theta_in_rad * xi_scale; }
  // Mean occupancy of the entry coherent state, xi0^2 / 2.
  double n0(double theta_in_rad) const {
    const double xi = xi0(theta_in_rad);
    return 0.5 * xi * xi;
  }
};

double oscillator_frequency(const CrystalChannel& channel, double energy_eV);
double level_energy(const LevelStructure& ls, int n);
int max_bound_level(const CrystalChannel& channel, double energy_eV);
double lindhard_angle(const CrystalChannel& channel, double energy_eV);
double lorentz_gamma(double energy_eV);

LevelStructure level_structure(const CrystalChannel& channel, double energy_eV);

// omega_j(theta) = 2 gamma^2 j Omega / (1 + gamma^2 theta^2)
double doppler_frequency(const LevelStructure& ls, int j, double theta_obs_rad);

/// Bound levels of V(x) = -V0 cosh^-2(x/b), ascending (most negative first):
///   eps_n = -(s - n)^2 / (2 E b^2),  s(s+1) = 2 E V0 b^2.
/// Only levels with s - n > 0 are returned; an empty list means no bound state.
std::vector<double> poschl_teller_levels(const CrystalChannel& channel, double energy_eV);

// The Poschl-Teller strength parameter s for the channel at this energy.
double poschl_teller_strength(const CrystalChannel& channel, double energy_eV);

/// max_n |D_{n+1} - D_n| / mean(D), D_n = eps_{n+1} - eps_n.
/// Zero for an exactly equidistant ladder.
double equidistance_deviation(std::span<const double> levels);

std::vector<double> harmonic_levels(const LevelStructure& ls);

}  // namespace chanrad
