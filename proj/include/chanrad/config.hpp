#pragma once

#include "json.hpp"
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chanrad/core_model.hpp"
#include "chanrad/entry_state.hpp"
#include "chanrad/radiation.hpp"

namespace chanrad {

enum class Command { table, populations, spectrum, gscan, beamavg, electron_compare };
enum class OutputFormat { csv, json };
enum class SpectrumMode { coherent, incoherent, both };
enum class EstimatorChoice { eq7, n0, both };

/// An angle either in radians or as a fraction of the Lindhard angle
/// (suffix `L`), resolved per beam energy.
struct Angle {
  double value = 0;
  bool relative = false;

  double resolve(double theta_L_rad) const { return relative ? value * theta_L_rad : value; }
  std::string to_string() const;
  bool operator==(const Angle&) const = default;
};

/// `start:stop:count`, inclusive linspace. Bare endpoints are in units of
/// theta_L.
struct AngleGrid {
  Angle start{0.0, true};
  Angle stop{0.85, true};
  int count = 100;

  std::vector<double> resolve(double theta_L_rad) const;
  std::string to_string() const;
  bool operator==(const AngleGrid&) const = default;
};

struct RunConfig {
  Command command = Command::table;
  CrystalChannel channel = CrystalChannel::diamond_110();
  std::vector<double> energies_eV{4e9, 6e9, 10e9, 14e9};
  Angle theta_in{31e-6, false};
  double sigma_rad = 10e-6;
  AngleGrid grid;
  std::vector<int> harmonics{1};
  PopulationModel model = PopulationModel::glauber;
  PhaseConvention phase = PhaseConvention::magnitude_aligned;
  AngularWeight weight = AngularWeight::flat;
  SpectrumMode mode = SpectrumMode::both;
  EstimatorChoice estimator = EstimatorChoice::both;
  int quadrature_points = 64;
  int grid_size = 200;
  // Measured first-harmonic peaks for the default energies.
  std::vector<double> exp_peaks_eV{23e6, 42e6, 90e6, 120e6};
  OutputFormat format = OutputFormat::csv;
  int precision = 9;

  // Execution details, deliberately left out of the metadata echo: they never
  // change the numbers.
  std::optional<std::string> output_path;
  unsigned threads = 1;
};

std::string_view to_string(Command c);
std::string_view to_string(PopulationModel m);
std::string_view to_string(PhaseConvention p);
std::string_view to_string(AngularWeight w);
std::string_view to_string(SpectrumMode m);
std::string_view to_string(EstimatorChoice e);
std::string_view to_string(PotentialShape s);

// Quantity parsers. Bare numbers are in the canonical unit (eV, rad, A)
// except where noted. Throw Errc::validation with a short reason.
double parse_energy(std::string_view text);
double parse_length(std::string_view text);
Angle parse_angle(std::string_view text, bool bare_is_relative = false);
AngleGrid parse_grid(std::string_view text);
// Comma list; items without a unit take the unit of the last item.
std::vector<double> parse_energy_list(std::string_view text);

/// Echo of every field that affects the numbers. Feeding it back as a config
/// file reproduces the run exactly.
nlohmann::ordered_json to_json(const RunConfig& cfg);

/// Defaults <- config file <- flags. `args` excludes the program name and
/// starts with the subcommand. `--config PATH` is read from disk unless
/// `file_text` is supplied. All problems are collected into one
/// Errc::validation error.
RunConfig parse_config(const std::vector<std::string>& args,
                       const std::optional<std::string>& file_text = std::nullopt);

// Raised by parse_config for --help; carries the rendered usage text.
struct HelpRequested {
  std::string text;
};

// Throws the aggregated validation error, if any.
void validate(const RunConfig& cfg);

}  // namespace chanrad
