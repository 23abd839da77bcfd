#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "chanrad/core_model.hpp"

namespace chanrad {

enum class PopulationModel { hermite, glauber };

// How the coherent sum treats the i^n phase ladder of the entry amplitudes.
enum class PhaseConvention { literal_in_phase, magnitude_aligned };

/// Normalized oscillator eigenfunction
///   psi_n(xi) = (2^n n! sqrt(pi))^(-1/2) H_n(xi) exp(-xi^2/2)
/// by the three-term normalized recurrence, with running rescaling so large
/// |xi| (where psi_0 underflows) still yields finite values up to n ~ 1000.
/// Requires n >= 0 and |xi| < 40.
double hermite_function(int n, double xi);

/// psi_0..psi_n_max at a single xi, as (log|psi_n|, sign) pairs. Zeros come
/// back as (-inf, 0).
std::vector<std::pair<double, int>> log_hermite_functions(int n_max, double xi);

class EntryState {
 public:
  using Amplitudes = std::vector<std::complex<double>>;

  EntryState(PopulationModel model, double xi0, Amplitudes amplitudes,
             PhaseConvention convention = PhaseConvention::magnitude_aligned);

  PopulationModel model() const { return model_; }
  PhaseConvention phase_convention() const { return convention_; }
  double xi0() const { return xi0_; }
  double n0() const { return 0.5 * xi0_ * xi0_; }
  double alpha() const;  // xi0 / sqrt(2)
  int n_max() const { return static_cast<int>(amplitudes_.size()) - 1; }
  const Amplitudes& amplitudes() const { return amplitudes_; }

  EntryState with_convention(PhaseConvention c) const {
    return EntryState(model_, xi0_, amplitudes_, c);
  }

 private:
  PopulationModel model_;
  PhaseConvention convention_;
  double xi0_;
  Amplitudes amplitudes_;
};

/// Sudden-approximation amplitudes c_n, n = 0..n_max, renormalized over the
/// bound spectrum. Both models carry the i^n ladder; amplitudes with
/// log10|c_n| < -30 are stored as exact zero.
EntryState entry_amplitudes(const LevelStructure& ls, double theta_in_rad, PopulationModel model,
                            PhaseConvention convention = PhaseConvention::magnitude_aligned);

struct LevelPopulation {
  int n;
  double p;
};

std::vector<LevelPopulation> population_distribution(const EntryState& es);
std::vector<double> populations(const EntryState& es);
double mean_occupancy(const EntryState& es);

}  // namespace chanrad
