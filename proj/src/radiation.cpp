#include "chanrad/radiation.hpp"

#include <cmath>
#include <numbers>

#include "chanrad/error.hpp"

namespace chanrad {

MatrixElementSet::MatrixElementSet(int j, int n_max, std::vector<double> values)
    : j_(j), n_max_(n_max), values_(std::move(values)) {
  if (j < 1 || j > n_max) throw Error(Errc::invalid_harmonic, "harmonic must lie in [1, n_max]");
  if (static_cast<int>(values_.size()) != n_max - j + 1)
    throw Error(Errc::dimension_mismatch, "matrix element count must be n_max - j + 1");
}

MatrixElementSet matrix_elements(const LevelStructure& ls, int j) {
  if (j < 1 || j > ls.n_max)
    throw Error(Errc::invalid_harmonic,
                "harmonic " + std::to_string(j) + " outside [1, " + std::to_string(ls.n_max) + "]");
  std::vector<double> m;
  m.reserve(ls.n_max - j + 1);
  for (int n = j; n <= ls.n_max; ++n) {
    if (j == 1) {
      m.push_back(std::sqrt(0.5 * n));
    } else {
      // 2^(-j/2) sqrt(n! / (n-j)!), leading multipole order
      const double lg = -0.5 * j * std::numbers::ln2 + 0.5 * (std::lgamma(n + 1.0) - std::lgamma(n - j + 1.0));
      m.push_back(std::exp(lg));
    }
  }
  return MatrixElementSet(j, ls.n_max, std::move(m));
}

namespace {

void check_dims(const EntryState& es, const MatrixElementSet& me) {
  if (es.n_max() != me.n_max())
    throw Error(Errc::dimension_mismatch, "entry state n_max " + std::to_string(es.n_max()) +
                                              " != matrix element n_max " + std::to_string(me.n_max()));
}

}  // namespace

std::complex<double> coherent_amplitude(const EntryState& es, const MatrixElementSet& me) {
  check_dims(es, me);
  const auto& c = es.amplitudes();
  std::complex<double> sum{};
  for (int n = me.harmonic(); n <= me.n_max(); ++n) {
    if (es.phase_convention() == PhaseConvention::magnitude_aligned)
      sum += std::abs(c[n]) * me.at(n);
    else
      sum += c[n] * me.at(n);
  }
  return sum;
}

double incoherent_strength(const EntryState& es, const MatrixElementSet& me) {
  check_dims(es, me);
  const auto& c = es.amplitudes();
  double sum = 0;
  for (int n = me.harmonic(); n <= me.n_max(); ++n) {
    const double m = me.at(n);
    sum += std::norm(c[n]) * m * m;
  }
  return sum;
}

double enhancement_factor(const EntryState& es, const MatrixElementSet& me) {
  const double den = incoherent_strength(es, me);
  if (!(den > 0))
    throw Error(Errc::empty_population,
                "no populated level with n >= " + std::to_string(me.harmonic()));
  return std::norm(coherent_amplitude(es, me)) / den;
}

double angular_weight(AngularWeight weight, double x) {
  if (weight == AngularWeight::flat) return 1.0;
  return 1.5 * (1.0 - 2.0 * x + 2.0 * x * x);
}

double SpectrumSeries::integrate() const {
  if (points.empty()) return 0;
  const double x1 = points.front().omega_eV / omega_cutoff_eV;
  const double left = points.front().intensity * angular_weight(weight, 0.0) / angular_weight(weight, x1);
  double sum = 0.5 * (left + points.front().intensity) * points.front().omega_eV;
  for (std::size_t k = 1; k < points.size(); ++k)
    sum += 0.5 * (points[k - 1].intensity + points[k].intensity) *
           (points[k].omega_eV - points[k - 1].omega_eV);
  return sum;
}

SpectrumSeries spectrum(const LevelStructure& ls, const EntryState& es, int j, EmissionModel model,
                        AngularWeight weight, int grid_size) {
  if (grid_size < 16) throw Error(Errc::invalid_input, "spectrum grid needs at least 16 points");
  const auto me = matrix_elements(ls, j);

  SpectrumSeries out;
  out.j = j;
  out.model = model;
  out.weight = weight;
  out.omega_cutoff_eV = doppler_frequency(ls, j, 0.0);
  out.strength = model == EmissionModel::coherent ? std::norm(coherent_amplitude(es, me))
                                                  : incoherent_strength(es, me);

  const double prefactor = kPhys.fine_structure * j * ls.omega_eV * out.strength;
  out.points.reserve(grid_size);
  for (int k = 1; k <= grid_size; ++k) {
    const double x = static_cast<double>(k) / grid_size;
    out.points.push_back({x * out.omega_cutoff_eV, prefactor * angular_weight(weight, x)});
  }
  return out;
}

std::vector<HarmonicRatio> harmonic_ratio_table(const LevelStructure& ls, const EntryState& es,
                                                int j_max) {
  if (j_max < 1 || j_max > 6) throw Error(Errc::invalid_harmonic, "j_max must lie in [1, 6]");
  if (es.phase_convention() != PhaseConvention::magnitude_aligned)
    throw Error(Errc::invalid_input, "harmonic ratios are defined for the magnitude-aligned sum");
  std::vector<HarmonicRatio> out;
  double g1 = 0;
  for (int j = 1; j <= j_max; ++j) {
    const double g = enhancement_factor(es, matrix_elements(ls, j));
    if (j == 1) g1 = g;
    out.push_back({j, g, j == 1 ? 1.0 : g / g1});
  }
  return out;
}

}  // namespace chanrad
