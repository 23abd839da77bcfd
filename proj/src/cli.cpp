#include "chanrad/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <ostream>

#include "chanrad/error.hpp"
#include "chanrad/scans.hpp"

namespace chanrad::cli {

namespace {

using json = nlohmann::ordered_json;

ScanOptions scan_options(const RunConfig& cfg) { return {cfg.model, cfg.phase, cfg.threads}; }

// Leading key columns for multi-energy / multi-harmonic runs.
struct Keys {
  bool energy;
  bool harmonic;

  std::vector<std::string> columns(std::vector<std::string> rest) const {
    std::vector<std::string> out;
    if (energy) out.emplace_back("energy_GeV");
    if (harmonic) out.emplace_back("j");
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
  std::vector<Cell> row(double energy_eV, int j, std::vector<Cell> rest) const {
    std::vector<Cell> out;
    if (energy) out.emplace_back(energy_eV / units::GeV);
    if (harmonic) out.emplace_back(std::int64_t{j});
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
  }
};

Cell opt_cell(const std::optional<double>& v, double scale = 1.0) {
  return v ? Cell{*v * scale} : Cell{};
}

Table table_command(const RunConfig& cfg) {
  Table t{"energy_table",
          {"energy_GeV", "omega_eV", "n_max", "theta_L_urad", "gamma", "theta_in_urad", "n0", "G1",
           "omega1_dipole_MeV", "omega1_exp_MeV", "dipole_over_exp"},
          {},
          nullptr};
  const auto opt = scan_options(cfg);
  for (std::size_t i = 0; i < cfg.energies_eV.size(); ++i) {
    const double e = cfg.energies_eV[i];
    const double theta = cfg.theta_in.resolve(lindhard_angle(cfg.channel, e));
    std::vector<double> exp;
    if (!cfg.exp_peaks_eV.empty()) exp.push_back(cfg.exp_peaks_eV[i]);
    const auto row = energy_table(cfg.channel, std::span(&e, 1), theta, exp, opt).rows.front();
    t.rows.push_back({row.energy_eV / units::GeV, row.omega_eV, std::int64_t{row.n_max},
                      row.theta_L_rad / units::urad, row.gamma, theta / units::urad, row.n0, row.g1,
                      row.omega1_dipole_eV / units::MeV, opt_cell(row.omega1_exp_eV, 1.0 / units::MeV),
                      opt_cell(row.dipole_over_exp)});
  }
  return t;
}

Table populations_command(const RunConfig& cfg) {
  const Keys keys{cfg.energies_eV.size() > 1, false};
  Table t{"population_grid", keys.columns({"theta_rad", "theta_over_thetaL", "n", "P"}), {}, nullptr};
  for (double e : cfg.energies_eV) {
    const auto grid = population_grid(cfg.channel, e, cfg.grid.resolve(lindhard_angle(cfg.channel, e)),
                                      scan_options(cfg));
    for (std::size_t i = 0; i < grid.thetas_rad.size(); ++i) {
      const double th = grid.thetas_rad[i];
      for (int n = 0; n <= grid.n_max; ++n)
        t.rows.push_back(keys.row(e, 1, {th, th / grid.theta_L_rad, std::int64_t{n}, grid.columns[i][n]}));
    }
  }
  return t;
}

Table spectrum_command(const RunConfig& cfg) {
  const Keys keys{cfg.energies_eV.size() > 1, cfg.harmonics.size() > 1};
  std::vector<std::string> cols{"omega_eV", "x"};
  if (cfg.mode != SpectrumMode::incoherent) cols.emplace_back("coherent");
  if (cfg.mode != SpectrumMode::coherent) cols.emplace_back("incoherent");
  if (cfg.mode == SpectrumMode::both) cols.emplace_back("ratio");
  Table t{"spectrum", keys.columns(cols), {}, json::array()};

  for (double e : cfg.energies_eV) {
    const auto ls = level_structure(cfg.channel, e);
    const double theta = cfg.theta_in.resolve(ls.theta_L_rad);
    const auto es = entry_amplitudes(ls, theta, cfg.model, cfg.phase);
    for (int j : cfg.harmonics) {
      const auto coh = spectrum(ls, es, j, EmissionModel::coherent, cfg.weight, cfg.grid_size);
      const auto inc = spectrum(ls, es, j, EmissionModel::incoherent, cfg.weight, cfg.grid_size);
      json d;
      d["energy_eV"] = e;
      d["j"] = j;
      d["theta_in_rad"] = theta;
      d["omega_cutoff_eV"] = coh.omega_cutoff_eV;
      d["coherent_strength"] = coh.strength;
      d["incoherent_strength"] = inc.strength;
      d["G"] = inc.strength > 0 ? json(coh.strength / inc.strength) : json(nullptr);
      t.diagnostics.push_back(std::move(d));

      for (std::size_t k = 0; k < coh.points.size(); ++k) {
        std::vector<Cell> rest{coh.points[k].omega_eV, coh.points[k].omega_eV / coh.omega_cutoff_eV};
        if (cfg.mode != SpectrumMode::incoherent) rest.emplace_back(coh.points[k].intensity);
        if (cfg.mode != SpectrumMode::coherent) rest.emplace_back(inc.points[k].intensity);
        if (cfg.mode == SpectrumMode::both)
          rest.push_back(inc.points[k].intensity > 0 ? Cell{coh.points[k].intensity / inc.points[k].intensity}
                                                     : Cell{});
        t.rows.push_back(keys.row(e, j, std::move(rest)));
      }
    }
  }
  return t;
}

json fit_json(const ThetaScan& scan) {
  json d;
  d["energy_eV"] = scan.energy_eV;
  d["j"] = scan.j;
  d["theta_L_rad"] = scan.theta_L_rad;
  if (scan.small_angle_fit) {
    const auto& f = *scan.small_angle_fit;
    d["small_angle_fit"] = {{"theta_lo_rad", f.theta_lo_rad},
                            {"theta_hi_rad", f.theta_hi_rad},
                            {"slope", f.slope},
                            {"points", f.points}};
  } else {
    d["small_angle_fit"] = nullptr;
  }
  try {
    const auto r = scaling_report(scan);
    d["scaling_report"] = {{"G_exponent", r.g_exponent},
                           {"G_exponent_claimed", r.claimed_g_exponent},
                           {"G_agrees", r.g_agrees},
                           {"incoherent_exponent", r.incoherent_exponent},
                           {"coherent_exponent", r.coherent_exponent},
                           {"coherent_exponent_claimed", r.claimed_coherent_exponent},
                           {"coherent_agrees", r.coherent_agrees},
                           {"tolerance", r.tolerance},
                           {"points_used", r.points_used},
                           {"theta_max_rad", r.theta_max_rad}};
  } catch (const Error& e) {
    d["scaling_report"] = {{"unavailable", e.message()}};
  }
  return d;
}

Table gscan_command(const RunConfig& cfg) {
  const Keys keys{cfg.energies_eV.size() > 1, cfg.harmonics.size() > 1};
  Table t{"theta_scan",
          keys.columns({"theta_rad", "theta_over_thetaL", "G_eq7", "G_n0_estimate", "G_sqrt_estimate"}),
          {},
          json::array()};
  for (double e : cfg.energies_eV) {
    const auto grid = cfg.grid.resolve(lindhard_angle(cfg.channel, e));
    for (int j : cfg.harmonics) {
      const auto scan = theta_scan(cfg.channel, e, grid, j, scan_options(cfg));
      for (const auto& p : scan.points)
        t.rows.push_back(keys.row(e, j, {p.theta_rad, p.theta_over_L, p.g, p.n0, p.sqrt_estimate}));
      t.diagnostics.push_back(fit_json(scan));
    }
  }
  return t;
}

Table beamavg_command(const RunConfig& cfg, std::ostream& diag) {
  Table t{"beam_average",
          {"energy_GeV", "sigma_rad", "estimator", "G_avg", "G_avg_doubled", "rel_change_on_doubling", "converged"},
          {},
          nullptr};
  std::vector<BeamEstimator> estimators;
  if (cfg.estimator != EstimatorChoice::n0) estimators.push_back(BeamEstimator::eq7);
  if (cfg.estimator != EstimatorChoice::eq7) estimators.push_back(BeamEstimator::n0);
  for (double e : cfg.energies_eV) {
    for (auto est : estimators) {
      const auto avg = beam_average(cfg.channel, e, cfg.sigma_rad, est, cfg.quadrature_points, scan_options(cfg));
      const std::string name = est == BeamEstimator::eq7 ? "eq7" : "n0";
      if (!avg.converged)
        diag << "warning: beam average (" << name << ", E=" << e / units::GeV
             << " GeV) changed by " << avg.relative_change << " on doubling the quadrature\n";
      t.rows.push_back({e / units::GeV, cfg.sigma_rad, name, avg.value, avg.value_doubled, avg.relative_change,
                        std::string(avg.converged ? "true" : "false")});
    }
  }
  return t;
}

Table electron_command(const RunConfig& cfg) {
  Table t{"electron_compare",
          {"energy_GeV", "harmonic_levels", "harmonic_deviation", "harmonic_spacing_eV", "pt_levels", "pt_deviation",
           "pt_ground_eV", "pt_first_spacing_eV", "pt_last_spacing_eV"},
          {},
          json{{"width_b_A", cfg.channel.effective_width_A()}}};
  for (const auto& r : electron_comparison(cfg.channel, cfg.energies_eV)) {
    t.rows.push_back({r.energy_eV / units::GeV, std::int64_t{r.harmonic_levels}, r.harmonic_deviation,
                      r.harmonic_spacing_eV, std::int64_t{r.pt_levels}, r.pt_deviation, r.pt_ground_eV,
                      r.pt_first_spacing_eV, r.pt_last_spacing_eV});
  }
  return t;
}

std::string resolve_output_path(const std::string& path) {
  namespace fs = std::filesystem;
  const char* dir = std::getenv("CHANRAD_OUTPUT_DIR");
  if (dir && *dir && fs::path(path).is_relative()) return (fs::path(dir) / path).string();
  return path;
}

}  // namespace

Table compute(const RunConfig& cfg, std::ostream& diagnostics) {
  switch (cfg.command) {
    case Command::table: return table_command(cfg);
    case Command::populations: return populations_command(cfg);
    case Command::spectrum: return spectrum_command(cfg);
    case Command::gscan: return gscan_command(cfg);
    case Command::beamavg: return beamavg_command(cfg, diagnostics);
    case Command::electron_compare: return electron_command(cfg);
  }
  throw Error(Errc::invalid_input, "unknown command");
}

std::string render(const RunConfig& cfg, std::ostream& diagnostics) { return emit(compute(cfg, diagnostics), cfg); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = parse_config(args);
    const std::string bytes = render(cfg, err);
    if (cfg.output_path) {
      write_atomically(resolve_output_path(*cfg.output_path), bytes);
    } else {
      out << bytes;
      out.flush();
    }
    return 0;
  } catch (const HelpRequested& h) {
    out << h.text;
    return 0;
  } catch (const Error& e) {
    err << "chanrad: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::validation: return 2;
      case Errc::io: return 3;
      default: return 1;
    }
  } catch (const std::exception& e) {
    err << "chanrad: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chanrad::cli
