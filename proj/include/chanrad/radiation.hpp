#pragma once

#include <complex>
#include <vector>

#include "chanrad/core_model.hpp"
#include "chanrad/entry_state.hpp"

namespace chanrad {

/// Dipole/multipole transition elements m_n = <n-j| x |n> in oscillator
/// units, for n = j..n_max.
class MatrixElementSet {
 public:
  MatrixElementSet(int j, int n_max, std::vector<double> values);

  int harmonic() const { return j_; }
  int n_max() const { return n_max_; }
  // m_n for n >= j; zero below j.
  double at(int n) const { return n < j_ ? 0.0 : values_[n - j_]; }
  const std::vector<double>& values() const { return values_; }

 private:
  int j_;
  int n_max_;
  std::vector<double> values_;
};

enum class EmissionModel { coherent, incoherent };
enum class AngularWeight { flat, dipole_planar };

struct SpectrumPoint {
  double omega_eV;
  double intensity;
};

struct SpectrumSeries {
  int j = 1;
  EmissionModel model = EmissionModel::coherent;
  AngularWeight weight = AngularWeight::flat;
  double omega_cutoff_eV = 0;
  double strength = 0;  // |A_j|^2 or sum P_n m_n^2
  std::vector<SpectrumPoint> points;

  // Trapezoid over [0, cutoff], closing the grid at omega -> 0+ with the
  // analytic left limit of the line shape.
  double integrate() const;
};

MatrixElementSet matrix_elements(const LevelStructure& ls, int j);

std::complex<double> coherent_amplitude(const EntryState& es, const MatrixElementSet& me);

// sum_n |c_n|^2 m_n^2
double incoherent_strength(const EntryState& es, const MatrixElementSet& me);

/// G_j = |sum_n c_n m_n|^2 / sum_n |c_n|^2 m_n^2, in the entry state's phase
/// convention. Throws Errc::empty_population when no level n >= j is
/// occupied.
double enhancement_factor(const EntryState& es, const MatrixElementSet& me);

// W(x), x = omega / omega_j(0); both weights integrate to 1 over [0, 1].
double angular_weight(AngularWeight weight, double x);

/// dI/domega = e^2 j Omega W(x) S on omega_k = k * omega_j(0) / grid_size,
/// k = 1..grid_size. The delta line is mapped onto omega analytically via
/// theta |dtheta/domega| = j Omega / omega^2.
SpectrumSeries spectrum(const LevelStructure& ls, const EntryState& es, int j, EmissionModel model,
                        AngularWeight weight, int grid_size);

struct HarmonicRatio {
  int j;
  double g_j;
  double ratio_to_first;
};

std::vector<HarmonicRatio> harmonic_ratio_table(const LevelStructure& ls, const EntryState& es,
                                                int j_max);

}  // namespace chanrad
