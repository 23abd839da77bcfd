#include "chanrad/config.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "chanrad/error.hpp"
#include "chanrad/scans.hpp"

namespace chanrad {

namespace {

using json = nlohmann::ordered_json;

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::string_view what, std::string_view text) {
  throw Error(Errc::validation, std::string(what) + " '" + std::string(text) + "'");
}

// Leading number plus trimmed unit suffix.
std::pair<double, std::string> split_quantity(std::string_view text) {
  const auto t = trim(text);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr == t.data()) bad("malformed number", text);
  return {v, std::string(trim(std::string_view(ptr, t.data() + t.size() - ptr)))};
}

template <class Map>
double unit_factor(const Map& units, const std::string& unit, std::string_view text) {
  const auto it = units.find(unit);
  if (it == units.end()) bad("unknown unit in", text);
  return it->second;
}

const std::map<std::string, double> kEnergyUnits{{"", units::eV},     {"eV", units::eV},
                                                 {"keV", units::keV}, {"MeV", units::MeV},
                                                 {"GeV", units::GeV}, {"TeV", units::TeV}};
const std::map<std::string, double> kLengthUnits{
    {"", units::angstrom}, {"A", units::angstrom}, {"\xC3\x85", units::angstrom}, {"nm", units::nm}, {"pm", 0.01}};
const std::map<std::string, double> kAngleUnits{{"rad", units::rad},   {"mrad", units::mrad},
                                                {"urad", units::urad}, {"\xC2\xB5rad", units::urad},
                                                {"nrad", units::nrad}};

template <class E>
E parse_enum(std::string_view text, std::initializer_list<std::pair<std::string_view, E>> names,
             std::string_view field) {
  for (const auto& [name, value] : names)
    if (name == text) return value;
  std::string known;
  for (const auto& [name, value] : names) known += (known.empty() ? "" : "|") + std::string(name);
  throw Error(Errc::validation, std::string(field) + ": expected " + known + ", got '" + std::string(text) + "'");
}

PopulationModel parse_model(std::string_view s) {
  return parse_enum<PopulationModel>(s, {{"glauber", PopulationModel::glauber}, {"hermite", PopulationModel::hermite}},
                                     "model");
}
PhaseConvention parse_phase(std::string_view s) {
  return parse_enum<PhaseConvention>(s,
                                     {{"magnitude_aligned", PhaseConvention::magnitude_aligned},
                                      {"aligned", PhaseConvention::magnitude_aligned},
                                      {"literal_in_phase", PhaseConvention::literal_in_phase},
                                      {"literal", PhaseConvention::literal_in_phase}},
                                     "phase");
}
AngularWeight parse_weight(std::string_view s) {
  return parse_enum<AngularWeight>(s, {{"flat", AngularWeight::flat}, {"dipole_planar", AngularWeight::dipole_planar}},
                                   "weight");
}
SpectrumMode parse_mode(std::string_view s) {
  return parse_enum<SpectrumMode>(
      s, {{"coherent", SpectrumMode::coherent}, {"incoherent", SpectrumMode::incoherent}, {"both", SpectrumMode::both}},
      "mode");
}
EstimatorChoice parse_estimator(std::string_view s) {
  return parse_enum<EstimatorChoice>(
      s, {{"eq7", EstimatorChoice::eq7}, {"n0", EstimatorChoice::n0}, {"both", EstimatorChoice::both}}, "estimator");
}
PotentialShape parse_shape(std::string_view s) {
  return parse_enum<PotentialShape>(
      s, {{"parabolic", PotentialShape::parabolic}, {"poschl_teller", PotentialShape::poschl_teller}}, "shape");
}
OutputFormat parse_format(std::string_view s) {
  return parse_enum<OutputFormat>(s, {{"csv", OutputFormat::csv}, {"json", OutputFormat::json}}, "format");
}
Command parse_command(std::string_view s) {
  return parse_enum<Command>(s,
                             {{"table", Command::table},
                              {"populations", Command::populations},
                              {"spectrum", Command::spectrum},
                              {"gscan", Command::gscan},
                              {"beamavg", Command::beamavg},
                              {"electron-compare", Command::electron_compare}},
                             "command");
}

int parse_int(std::string_view text, std::string_view field) {
  const auto t = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size())
    throw Error(Errc::validation, std::string(field) + ": malformed integer '" + std::string(text) + "'");
  return v;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    out.emplace_back(trim(text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

// Runs `fn`, turning any Error into a "field: reason" problem entry.
class Problems {
 public:
  template <class Fn>
  void guard(std::string_view field, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      add(field, e.message());
    } catch (const nlohmann::json::exception& e) {
      add(field, e.what());
    }
  }
  void add(std::string_view field, std::string_view msg) { items_.push_back(std::string(field) + ": " + std::string(msg)); }
  void raise() const {
    if (items_.empty()) return;
    std::string msg = std::to_string(items_.size()) + " problem(s) in run configuration";
    for (const auto& p : items_) msg += "\n  - " + p;
    throw Error(Errc::validation, msg);
  }

 private:
  std::vector<std::string> items_;
};

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::table: return "table";
    case Command::populations: return "populations";
    case Command::spectrum: return "spectrum";
    case Command::gscan: return "gscan";
    case Command::beamavg: return "beamavg";
    case Command::electron_compare: return "electron-compare";
  }
  return "?";
}
std::string_view to_string(PopulationModel m) { return m == PopulationModel::glauber ? "glauber" : "hermite"; }
std::string_view to_string(PhaseConvention p) {
  return p == PhaseConvention::magnitude_aligned ? "magnitude_aligned" : "literal_in_phase";
}
std::string_view to_string(AngularWeight w) { return w == AngularWeight::flat ? "flat" : "dipole_planar"; }
std::string_view to_string(SpectrumMode m) {
  switch (m) {
    case SpectrumMode::coherent: return "coherent";
    case SpectrumMode::incoherent: return "incoherent";
    case SpectrumMode::both: return "both";
  }
  return "?";
}
std::string_view to_string(EstimatorChoice e) {
  switch (e) {
    case EstimatorChoice::eq7: return "eq7";
    case EstimatorChoice::n0: return "n0";
    case EstimatorChoice::both: return "both";
  }
  return "?";
}
std::string_view to_string(PotentialShape s) { return s == PotentialShape::parabolic ? "parabolic" : "poschl_teller"; }

std::string Angle::to_string() const { return shortest(value) + (relative ? "L" : "rad"); }

std::vector<double> AngleGrid::resolve(double theta_L_rad) const {
  const double a = start.resolve(theta_L_rad), b = stop.resolve(theta_L_rad);
  if (count == 1) return {a};
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = a + (b - a) * i / (count - 1);
  out.back() = b;
  return out;
}

std::string AngleGrid::to_string() const {
  return start.to_string() + ":" + stop.to_string() + ":" + std::to_string(count);
}

double parse_energy(std::string_view text) {
  const auto [v, unit] = split_quantity(text);
  return v * unit_factor(kEnergyUnits, unit, text);
}

double parse_length(std::string_view text) {
  const auto [v, unit] = split_quantity(text);
  return v * unit_factor(kLengthUnits, unit, text);
}

Angle parse_angle(std::string_view text, bool bare_is_relative) {
  const auto [v, unit] = split_quantity(text);
  if (unit == "L") return {v, true};
  if (unit.empty()) return {v, bare_is_relative};
  return {v * unit_factor(kAngleUnits, unit, text), false};
}

AngleGrid parse_grid(std::string_view text) {
  const auto t = trim(text);
  const auto c1 = t.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : t.find(':', c1 + 1);
  if (c2 == std::string_view::npos) bad("grid must be start:stop:count, got", text);
  AngleGrid g;
  g.start = parse_angle(t.substr(0, c1), true);
  g.stop = parse_angle(t.substr(c1 + 1, c2 - c1 - 1), true);
  g.count = parse_int(t.substr(c2 + 1), "grid count");
  return g;
}

std::vector<double> parse_energy_list(std::string_view text) {
  auto items = split_list(text);
  const auto last_unit = split_quantity(items.back()).second;
  std::vector<double> out;
  for (auto& item : items) {
    if (split_quantity(item).second.empty()) item += last_unit;
    out.push_back(parse_energy(item));
  }
  return out;
}

json to_json(const RunConfig& cfg) {
  json channel;
  channel["name"] = cfg.channel.name;
  channel["V0_eV"] = cfg.channel.well_depth_eV;
  channel["d_A"] = cfg.channel.spacing_A;
  channel["shape"] = to_string(cfg.channel.shape);
  channel["width_b_A"] = cfg.channel.width_b_A ? json(*cfg.channel.width_b_A) : json(nullptr);

  json beam;
  beam["energies_eV"] = cfg.energies_eV;
  beam["theta_in"] = cfg.theta_in.to_string();
  beam["sigma_rad"] = cfg.sigma_rad;

  json scan;
  scan["grid"] = cfg.grid.to_string();
  scan["harmonics"] = cfg.harmonics;
  scan["model"] = to_string(cfg.model);
  scan["phase"] = to_string(cfg.phase);
  scan["weight"] = to_string(cfg.weight);
  scan["mode"] = to_string(cfg.mode);
  scan["estimator"] = to_string(cfg.estimator);
  scan["quadrature_points"] = cfg.quadrature_points;
  scan["grid_size"] = cfg.grid_size;
  scan["exp_peaks_eV"] = cfg.exp_peaks_eV;

  json out;
  out["command"] = to_string(cfg.command);
  out["channel"] = std::move(channel);
  out["beam"] = std::move(beam);
  out["scan"] = std::move(scan);
  out["output"] = json{{"format", cfg.format == OutputFormat::csv ? "csv" : "json"}, {"precision", cfg.precision}};
  return out;
}

namespace {

struct Overrides {
  bool energies = false;
  bool exp_peaks = false;
};

// Either a number in the canonical unit or a string with a suffix.
template <class Parse>
double json_quantity(const json& v, Parse&& parse) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse(v.get<std::string>());
  throw Error(Errc::validation, "expected a number or a string with unit");
}

std::vector<double> json_energy_list(const json& v) {
  if (v.is_string()) return parse_energy_list(v.get<std::string>());
  if (!v.is_array()) throw Error(Errc::validation, "expected an array of energies");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(json_quantity(e, parse_energy));
  return out;
}

void check_keys(const json& obj, std::string_view section, std::initializer_list<std::string_view> allowed,
                Problems& problems) {
  if (!obj.is_object()) {
    problems.add(section, "expected an object");
    return;
  }
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      problems.add(std::string(section) + (section.empty() ? "" : ".") + key, "unknown key");
  }
}

void apply_file(const std::string& text, RunConfig& cfg, Overrides& ov, Problems& problems) {
  json root;
  try {
    root = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    problems.add("config", std::string("not valid JSON: ") + e.what());
    return;
  }
  check_keys(root, "", {"command", "channel", "beam", "scan", "output"}, problems);
  if (!root.is_object()) return;

  if (root.contains("command"))
    problems.guard("command", [&] { cfg.command = parse_command(root["command"].get<std::string>()); });

  if (root.contains("channel")) {
    const auto& c = root["channel"];
    check_keys(c, "channel", {"name", "V0_eV", "d_A", "shape", "width_b_A"}, problems);
    if (c.is_object()) {
      if (c.contains("name")) problems.guard("channel.name", [&] { cfg.channel.name = c["name"].get<std::string>(); });
      if (c.contains("V0_eV"))
        problems.guard("channel.V0_eV", [&] { cfg.channel.well_depth_eV = json_quantity(c["V0_eV"], parse_energy); });
      if (c.contains("d_A"))
        problems.guard("channel.d_A", [&] { cfg.channel.spacing_A = json_quantity(c["d_A"], parse_length); });
      if (c.contains("shape"))
        problems.guard("channel.shape", [&] { cfg.channel.shape = parse_shape(c["shape"].get<std::string>()); });
      if (c.contains("width_b_A") && !c["width_b_A"].is_null())
        problems.guard("channel.width_b_A", [&] { cfg.channel.width_b_A = json_quantity(c["width_b_A"], parse_length); });
    }
  }

  if (root.contains("beam")) {
    const auto& b = root["beam"];
    check_keys(b, "beam", {"energies_eV", "theta_in", "sigma_rad"}, problems);
    if (b.is_object()) {
      if (b.contains("energies_eV"))
        problems.guard("beam.energies_eV", [&] {
          cfg.energies_eV = json_energy_list(b["energies_eV"]);
          ov.energies = true;
        });
      if (b.contains("theta_in"))
        problems.guard("beam.theta_in", [&] {
          const auto& v = b["theta_in"];
          cfg.theta_in = v.is_number() ? Angle{v.get<double>(), false} : parse_angle(v.get<std::string>());
        });
      if (b.contains("sigma_rad"))
        problems.guard("beam.sigma_rad", [&] {
          cfg.sigma_rad = json_quantity(b["sigma_rad"], [](const std::string& s) {
            const Angle a = parse_angle(s);
            if (a.relative) throw Error(Errc::validation, "sigma must be an absolute angle");
            return a.value;
          });
        });
    }
  }

  if (root.contains("scan")) {
    const auto& s = root["scan"];
    check_keys(s, "scan",
               {"grid", "harmonics", "model", "phase", "weight", "mode", "estimator", "quadrature_points", "grid_size",
                "exp_peaks_eV"},
               problems);
    if (s.is_object()) {
      auto str = [&](const char* key) { return s[key].get<std::string>(); };
      if (s.contains("grid")) problems.guard("scan.grid", [&] { cfg.grid = parse_grid(str("grid")); });
      if (s.contains("harmonics"))
        problems.guard("scan.harmonics", [&] { cfg.harmonics = s["harmonics"].get<std::vector<int>>(); });
      if (s.contains("model")) problems.guard("scan.model", [&] { cfg.model = parse_model(str("model")); });
      if (s.contains("phase")) problems.guard("scan.phase", [&] { cfg.phase = parse_phase(str("phase")); });
      if (s.contains("weight")) problems.guard("scan.weight", [&] { cfg.weight = parse_weight(str("weight")); });
      if (s.contains("mode")) problems.guard("scan.mode", [&] { cfg.mode = parse_mode(str("mode")); });
      if (s.contains("estimator"))
        problems.guard("scan.estimator", [&] { cfg.estimator = parse_estimator(str("estimator")); });
      if (s.contains("quadrature_points"))
        problems.guard("scan.quadrature_points", [&] { cfg.quadrature_points = s["quadrature_points"].get<int>(); });
      if (s.contains("grid_size"))
        problems.guard("scan.grid_size", [&] { cfg.grid_size = s["grid_size"].get<int>(); });
      if (s.contains("exp_peaks_eV"))
        problems.guard("scan.exp_peaks_eV", [&] {
          cfg.exp_peaks_eV = json_energy_list(s["exp_peaks_eV"]);
          ov.exp_peaks = true;
        });
    }
  }

  if (root.contains("output")) {
    const auto& o = root["output"];
    check_keys(o, "output", {"format", "precision"}, problems);
    if (o.is_object()) {
      if (o.contains("format"))
        problems.guard("output.format", [&] { cfg.format = parse_format(o["format"].get<std::string>()); });
      if (o.contains("precision"))
        problems.guard("output.precision", [&] { cfg.precision = o["precision"].get<int>(); });
    }
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Flags {
  std::optional<std::string> config, format, output, precision, threads;
  std::optional<std::string> v0, spacing, shape, width_b, name;
  std::vector<std::string> energy, harmonic, exp_peak;
  std::optional<std::string> theta_in, sigma, grid, model, phase, weight, mode, estimator, quadrature_points, grid_size;
};

// Options per subcommand.
enum Opt : unsigned {
  kEnergy = 1u << 0,
  kThetaIn = 1u << 1,
  kGrid = 1u << 2,
  kHarmonic = 1u << 3,
  kModel = 1u << 4,
  kPhase = 1u << 5,
  kWeight = 1u << 6,
  kMode = 1u << 7,
  kGridSize = 1u << 8,
  kSigma = 1u << 9,
  kEstimator = 1u << 10,
  kQuad = 1u << 11,
  kExpPeak = 1u << 12,
  kWidthB = 1u << 13,
};

void register_options(CLI::App& sub, Flags& f, unsigned mask) {
  sub.add_option("--config", f.config, "JSON run configuration (same layout as the metadata echo)");
  sub.add_option("--format", f.format, "csv | json");
  sub.add_option("-o,--output", f.output, "output file (default: stdout)");
  sub.add_option("--precision", f.precision, "significant digits in emitted numbers");
  sub.add_option("--threads", f.threads, "worker threads for scans");
  sub.add_option("--V0", f.v0, "well depth, e.g. 23eV");
  sub.add_option("--spacing", f.spacing, "interplanar spacing, e.g. 1.26A");
  sub.add_option("--channel-name", f.name, "label for the crystal channel");
  sub.add_option("--shape", f.shape, "parabolic | poschl_teller");
  if (mask & kEnergy) sub.add_option("-E,--energy", f.energy, "beam energies, e.g. 10GeV or 4,6,10,14GeV");
  if (mask & kThetaIn) sub.add_option("--theta-in", f.theta_in, "entrance angle, e.g. 31urad or 0.5L");
  if (mask & kGrid) sub.add_option("--grid", f.grid, "entrance-angle grid start:stop:count, e.g. 0:0.85L:100");
  if (mask & kHarmonic) sub.add_option("-j,--harmonic", f.harmonic, "harmonic order(s)");
  if (mask & kModel) sub.add_option("--model", f.model, "glauber | hermite");
  if (mask & kPhase) sub.add_option("--phase", f.phase, "magnitude_aligned | literal_in_phase");
  if (mask & kWeight) sub.add_option("--weight", f.weight, "flat | dipole_planar");
  if (mask & kMode) sub.add_option("--mode", f.mode, "coherent | incoherent | both");
  if (mask & kGridSize) sub.add_option("--grid-size", f.grid_size, "number of photon-energy samples");
  if (mask & kSigma) sub.add_option("--sigma", f.sigma, "beam divergence, e.g. 10urad");
  if (mask & kEstimator) sub.add_option("--estimator", f.estimator, "eq7 | n0 | both");
  if (mask & kQuad) sub.add_option("--quadrature-points", f.quadrature_points, "quadrature nodes (32..128)");
  if (mask & kExpPeak) sub.add_option("--exp-peak", f.exp_peak, "measured first-harmonic peaks, one per energy");
  if (mask & kWidthB) sub.add_option("--width-b", f.width_b, "cosh^-2 well width b (default d/4)");
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

void apply_flags(const Flags& f, RunConfig& cfg, Overrides& ov, Problems& problems) {
  if (f.format) problems.guard("--format", [&] { cfg.format = parse_format(*f.format); });
  if (f.output) cfg.output_path = *f.output;
  if (f.precision) problems.guard("--precision", [&] { cfg.precision = parse_int(*f.precision, "precision"); });
  if (f.threads)
    problems.guard("--threads", [&] {
      const int t = parse_int(*f.threads, "threads");
      if (t < 1) throw Error(Errc::validation, "must be >= 1");
      cfg.threads = static_cast<unsigned>(t);
    });
  if (f.v0) problems.guard("--V0", [&] { cfg.channel.well_depth_eV = parse_energy(*f.v0); });
  if (f.spacing) problems.guard("--spacing", [&] { cfg.channel.spacing_A = parse_length(*f.spacing); });
  if (f.name) cfg.channel.name = *f.name;
  if (f.shape) problems.guard("--shape", [&] { cfg.channel.shape = parse_shape(*f.shape); });
  if (f.width_b) problems.guard("--width-b", [&] { cfg.channel.width_b_A = parse_length(*f.width_b); });
  if (!f.energy.empty())
    problems.guard("--energy", [&] {
      cfg.energies_eV = parse_energy_list(join(f.energy));
      ov.energies = true;
    });
  if (!f.exp_peak.empty())
    problems.guard("--exp-peak", [&] {
      cfg.exp_peaks_eV = parse_energy_list(join(f.exp_peak));
      ov.exp_peaks = true;
    });
  if (!f.harmonic.empty())
    problems.guard("--harmonic", [&] {
      cfg.harmonics.clear();
      for (const auto& h : split_list(join(f.harmonic))) cfg.harmonics.push_back(parse_int(h, "harmonic"));
    });
  if (f.theta_in) problems.guard("--theta-in", [&] { cfg.theta_in = parse_angle(*f.theta_in); });
  if (f.sigma)
    problems.guard("--sigma", [&] {
      const Angle a = parse_angle(*f.sigma);
      if (a.relative) throw Error(Errc::validation, "sigma must be an absolute angle");
      cfg.sigma_rad = a.value;
    });
  if (f.grid) problems.guard("--grid", [&] { cfg.grid = parse_grid(*f.grid); });
  if (f.model) problems.guard("--model", [&] { cfg.model = parse_model(*f.model); });
  if (f.phase) problems.guard("--phase", [&] { cfg.phase = parse_phase(*f.phase); });
  if (f.weight) problems.guard("--weight", [&] { cfg.weight = parse_weight(*f.weight); });
  if (f.mode) problems.guard("--mode", [&] { cfg.mode = parse_mode(*f.mode); });
  if (f.estimator) problems.guard("--estimator", [&] { cfg.estimator = parse_estimator(*f.estimator); });
  if (f.quadrature_points)
    problems.guard("--quadrature-points",
                   [&] { cfg.quadrature_points = parse_int(*f.quadrature_points, "quadrature points"); });
  if (f.grid_size) problems.guard("--grid-size", [&] { cfg.grid_size = parse_int(*f.grid_size, "grid size"); });
}

void collect_problems(const RunConfig& cfg, Problems& problems) {
  const auto& ch = cfg.channel;
  if (!(ch.well_depth_eV > 0)) problems.add("V0", "well depth must be > 0");
  if (!(ch.spacing_A > 0)) problems.add("spacing", "interplanar spacing must be > 0");
  if (ch.width_b_A && !(*ch.width_b_A > 0)) problems.add("width_b", "must be > 0");

  if (cfg.energies_eV.empty()) problems.add("energy", "at least one beam energy is required");
  const double min_energy = cfg.command == Command::table ? units::GeV : 1e8;
  for (double e : cfg.energies_eV)
    if (!(e >= min_energy))
      problems.add("energy", shortest(e) + " eV is below the relativistic minimum " + shortest(min_energy) + " eV");

  if (!(cfg.theta_in.value >= 0)) problems.add("theta_in", "must be >= 0");
  if (!(cfg.sigma_rad > 0)) problems.add("sigma", "must be > 0");

  if (cfg.harmonics.empty()) problems.add("harmonic", "at least one harmonic is required");
  for (int j : cfg.harmonics)
    if (j < 1 || j > 6) problems.add("harmonic", std::to_string(j) + " outside [1, 6]");

  if (cfg.quadrature_points < 32 || cfg.quadrature_points > kMaxBeamQuadraturePoints)
    problems.add("quadrature_points", "must lie in [32, " + std::to_string(kMaxBeamQuadraturePoints) + "]");
  if (cfg.grid_size < 16 || cfg.grid_size > 1000000) problems.add("grid_size", "must lie in [16, 1000000]");
  if (cfg.precision < 1 || cfg.precision > 17) problems.add("precision", "must lie in [1, 17]");

  if (!cfg.exp_peaks_eV.empty() && cfg.exp_peaks_eV.size() != cfg.energies_eV.size())
    problems.add("exp_peak", "needs exactly one value per energy");
  for (double e : cfg.exp_peaks_eV)
    if (!(e > 0)) problems.add("exp_peak", "must be > 0");

  const bool uses_grid = cfg.command == Command::gscan || cfg.command == Command::populations;
  if (uses_grid) {
    const auto& g = cfg.grid;
    if (g.count < 1) problems.add("grid", "count must be >= 1");
    if (g.count > 1 && g.start.relative == g.stop.relative && !(g.stop.value > g.start.value))
      problems.add("grid", "stop must exceed start");
    if (!(g.start.value >= 0)) problems.add("grid", "start must be >= 0");
    // Resolved endpoints must sit in [0, 0.9 theta_L] at every energy.
    if (g.count >= 1 && ch.well_depth_eV > 0) {
      for (double e : cfg.energies_eV) {
        if (!(e > 0)) continue;
        const double tl = std::sqrt(2.0 * ch.well_depth_eV / e);
        const double a = g.start.resolve(tl), b = g.stop.resolve(tl);
        if (b > 0.9 * tl * (1 + 1e-12) || a > 0.9 * tl * (1 + 1e-12)) {
          problems.add("grid", "extends beyond 0.9 theta_L at " + shortest(e) + " eV");
          break;
        }
        if (g.count > 1 && !(b > a)) {
          problems.add("grid", "not increasing at " + shortest(e) + " eV");
          break;
        }
      }
    }
  }
}

}  // namespace

void validate(const RunConfig& cfg) {
  Problems problems;
  collect_problems(cfg, problems);
  problems.raise();
}

RunConfig parse_config(const std::vector<std::string>& args, const std::optional<std::string>& file_text) {
  CLI::App app{"chanrad: coherent positron channeling radiation in a parabolic planar channel", "chanrad"};
  app.require_subcommand(0, 1);
  Flags flags;
  register_options(app, flags, 0);
  const std::vector<std::pair<Command, unsigned>> subs{
      {Command::table, kEnergy | kThetaIn | kExpPeak | kModel | kPhase},
      {Command::populations, kEnergy | kGrid | kModel},
      {Command::spectrum, kEnergy | kThetaIn | kHarmonic | kMode | kWeight | kGridSize | kModel | kPhase},
      {Command::gscan, kEnergy | kGrid | kHarmonic | kModel | kPhase},
      {Command::beamavg, kEnergy | kSigma | kEstimator | kQuad | kModel | kPhase},
      {Command::electron_compare, kEnergy | kWidthB},
  };
  const std::map<Command, std::string> descriptions{
      {Command::table, "level structure and G per energy at a fixed entrance angle"},
      {Command::populations, "level populations P_n over an entrance-angle grid"},
      {Command::spectrum, "coherent / incoherent harmonic line shapes"},
      {Command::gscan, "enhancement factor versus entrance angle"},
      {Command::beamavg, "enhancement averaged over a Gaussian beam divergence"},
      {Command::electron_compare, "parabolic versus cosh^-2 level ladders"},
  };
  std::map<Command, CLI::App*> apps;
  for (const auto& [cmd, mask] : subs) {
    auto* sub = app.add_subcommand(std::string(to_string(cmd)), descriptions.at(cmd));
    register_options(*sub, flags, mask);
    apps[cmd] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    for (const auto& [cmd, sub] : apps)
      if (sub->parsed()) throw HelpRequested{sub->help()};
    throw HelpRequested{app.help()};
  } catch (const CLI::ParseError& e) {
    throw Error(Errc::validation, e.what());
  }

  RunConfig cfg;
  Overrides ov;
  Problems problems;

  std::optional<std::string> text = file_text;
  if (flags.config) {
    if (text) problems.add("--config", "a config file was supplied twice");
    else problems.guard("--config", [&] { text = read_file(*flags.config); });
  }
  bool have_command = false;
  if (text) {
    apply_file(*text, cfg, ov, problems);
    have_command = json::accept(*text) && json::parse(*text).contains("command");
  }
  for (const auto& [cmd, sub] : apps) {
    if (sub->parsed()) {
      cfg.command = cmd;
      have_command = true;
    }
  }
  if (!have_command) problems.add("command", "a subcommand is required");

  apply_flags(flags, cfg, ov, problems);
  if (ov.energies && !ov.exp_peaks) cfg.exp_peaks_eV.clear();

  collect_problems(cfg, problems);
  problems.raise();
  return cfg;
}

}  // namespace chanrad
