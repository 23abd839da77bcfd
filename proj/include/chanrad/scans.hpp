#pragma once

#include <optional>
#include <span>
#include <vector>

#include "chanrad/core_model.hpp"
#include "chanrad/entry_state.hpp"
#include "chanrad/radiation.hpp"

namespace chanrad {

struct ScanOptions {
  PopulationModel model = PopulationModel::glauber;
  PhaseConvention phase = PhaseConvention::magnitude_aligned;
  unsigned threads = 1;
};

/// G_j = |sum c_n m_n|^2 / sum |c_n|^2 m_n^2 at one entrance angle. At
/// theta_in = 0 no level n >= j is populated and the single-level limit
/// G = 1 is returned.
double enhancement_at(const LevelStructure& ls, double theta_in_rad, int j, const ScanOptions& opt = {});

// ---- Table reproduction ----------------------------------------------------

struct EnergyTableRow {
  double energy_eV;
  double omega_eV;
  int n_max;
  double theta_L_rad;
  double gamma;
  double omega1_dipole_eV;  // 2 gamma^2 Omega
  double n0;
  double g1;
  std::optional<double> omega1_exp_eV;
  std::optional<double> dipole_over_exp;
};

struct EnergyTable {
  double theta_in_rad;
  std::vector<EnergyTableRow> rows;
};

// `exp_peaks_eV` is either empty or one value per energy.
EnergyTable energy_table(const CrystalChannel& channel, std::span<const double> energies_eV,
                         double theta_in_rad, std::span<const double> exp_peaks_eV = {},
                         const ScanOptions& opt = {});

// ---- Entrance-angle scans --------------------------------------------------

struct ThetaScanPoint {
  double theta_rad;
  double theta_over_L;
  double g;
  double n0;             // G ~ n0 estimate
  double sqrt_estimate;  // G ~ 5.013 sqrt(n0)
};

struct LogSlopeFit {
  double theta_lo_rad;
  double theta_hi_rad;
  double slope;
  int points;
};

struct ThetaScan {
  double energy_eV;
  double theta_L_rad;
  int j;
  ScanOptions options;
  std::vector<ThetaScanPoint> points;
  // log-log slope of G over the first decade of theta where G > 1.05
  std::optional<LogSlopeFit> small_angle_fit;
};

inline constexpr double kSqrtScalingCoefficient = 5.013;

ThetaScan theta_scan(const CrystalChannel& channel, double energy_eV, std::span<const double> theta_grid_rad,
                     int j = 1, const ScanOptions& opt = {});

struct PopulationGrid {
  double energy_eV;
  double theta_L_rad;
  PopulationModel model;
  std::vector<double> thetas_rad;
  int n_max;
  std::vector<std::vector<double>> columns;  // columns[theta index][n]
};

PopulationGrid population_grid(const CrystalChannel& channel, double energy_eV,
                               std::span<const double> theta_grid_rad, const ScanOptions& opt = {});

// ---- Beam divergence average ----------------------------------------------

enum class BeamEstimator { eq7, n0 };

struct BeamAverage {
  double value;
  double value_doubled;    // same integral with twice the nodes
  double relative_change;  // |value_doubled - value| / |value_doubled|
  bool converged;          // relative_change <= 1e-6
};

// Largest rule accepted; the doubled rule (256 nodes) is still exact to
// machine precision on the moment tests. Nodes past x ~ 8 carry weight below
// exp(-64), so larger rules buy nothing.
inline constexpr int kMaxBeamQuadraturePoints = 128;

/// <G> over a zero-mean Gaussian entrance-angle profile of width sigma,
/// integrating G(|theta|) on the half line with half-range Gauss-Hermite
/// nodes. The n0 estimator, max(1, n0), has a kink where n0 = 1; that point
/// splits the integral into a Gauss-Legendre piece and a shifted half-range
/// Gauss-Hermite tail.
BeamAverage beam_average(const CrystalChannel& channel, double energy_eV, double sigma_rad,
                         BeamEstimator estimator, int quadrature_points, const ScanOptions& opt = {});

// ---- Angular-scaling diagnostic -------------------------------------------

struct ScalingReport {
  double g_exponent;
  double incoherent_exponent;  // slope of n0(theta)
  double coherent_exponent;    // slope of G * n0
  double claimed_g_exponent = 2.0;
  double claimed_coherent_exponent = 4.0;
  double tolerance = 0.1;
  bool g_agrees;
  bool coherent_agrees;
  int points_used;
  double theta_max_rad;
};

/// Log-log least-squares exponents over 0 < theta <= 0.3 theta_L (points with
/// G > 1.05). Needs at least 10 grid points in that window.
ScalingReport scaling_report(const ThetaScan& scan);

// ---- Electron (cosh^-2) contrast -------------------------------------------

struct WellComparisonRow {
  double energy_eV;
  int harmonic_levels;
  double harmonic_deviation;
  double harmonic_spacing_eV;
  int pt_levels;
  double pt_deviation;
  double pt_ground_eV;
  double pt_first_spacing_eV;
  double pt_last_spacing_eV;
};

std::vector<WellComparisonRow> electron_comparison(const CrystalChannel& channel,
                                                   std::span<const double> energies_eV);

// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

}  // namespace chanrad
