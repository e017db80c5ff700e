// Command-line runner: xxzlr <command> [--config file] [--out dir] ...

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "xxzlr/analysis.hpp"
#include "xxzlr/cavity.hpp"
#include "xxzlr/config.hpp"
#include "xxzlr/dmrg.hpp"
#include "xxzlr/errors.hpp"
#include "xxzlr/exactdiag.hpp"
#include "xxzlr/mpo.hpp"
#include "xxzlr/records.hpp"
#include "xxzlr/spinwave.hpp"
#include "xxzlr/sweep.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace xxzlr;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string config;
  std::string out;
  std::string format;
  std::uint64_t seed = 0;
  int workers = 0;
  bool seed_set = false;
};

ordered_json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return round12(v);
}

ordered_json num_list(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

RunConfig load(const Flags& f) {
  RunConfig cfg;
  try {
    if (!f.config.empty()) cfg = parse_config(f.config);
  } catch (const ParseError& e) {
    throw ConfigError(f.config + ": " + e.what());
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (!f.format.empty()) cfg.format = f.format;
  if (f.seed_set) cfg.seed = f.seed;
  if (f.workers > 0) cfg.workers = f.workers;
  try {
    cfg.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ordered_json envelope(const char* kind, const RunConfig& cfg) {
  ordered_json j;
  j["schema"] = std::string("xxzlr.") + kind + "/1";
  const std::string text = emit_config(cfg);
  j["config_hash"] = hex64(fnv1a64(text));
  j["seed"] = cfg.seed;
  return j;
}

void write_json(const RunConfig& cfg, const std::string& name, const ordered_json& j) {
  const fs::path path = fs::path(cfg.output_dir) / name;
  write_text(path, j.dump(2) + "\n");
  std::cout << "wrote " << path.string() << "\n";
}

int run_ed(const Flags& f) {
  const RunConfig cfg = load(f);
  EdOptions opts;
  opts.path = cfg.ed_path;
  opts.seed = cfg.seed;
  opts.lanczos.tolerance = cfg.ed_tolerance;
  opts.lanczos.max_iterations = cfg.ed_max_iterations;
  const GroundStateReport g = global_ground_state(cfg.model, opts);
  const int n = cfg.model.n_sites;
  std::vector<double> profile;
  for (int cut = 1; cut < n; ++cut) profile.push_back(cut_entanglement_entropy(g.state, cut));
  const auto& pm = g.observables.pm;
  const OrderParameters order = order_parameters(g.observables.sigma_z, [&pm](int a, int b) { return pm(a, b); });
  ordered_json j = envelope("ed", cfg);
  j["alpha"] = num(cfg.model.alpha);
  j["j"] = num(cfg.model.j_lr);
  j["n"] = n;
  j["energy"] = num(g.energy);
  j["sector_n_up"] = g.sector;
  j["degenerate_sectors"] = g.degenerate_sectors;
  j["sector_energies"] = num_list(g.sector_energies);
  j["s_half"] = num(profile[static_cast<std::size_t>(n / 2 - 1)]);
  j["entropy_profile"] = num_list(profile);
  j["sigma_z"] = num_list(g.observables.sigma_z);
  j["sigma_z_mean"] = num(order.sigma_z_mean);
  j["xy_plateau"] = num(order.xy_plateau);
  write_json(cfg, "ed.json", j);
  return 0;
}

int run_spinwave(const Flags& f) {
  const RunConfig cfg = load(f);
  const ModelParams& p = cfg.model;
  ordered_json j = envelope("spinwave", cfg);
  j["alpha"] = num(p.alpha);
  j["j"] = num(p.j_lr);
  j["n"] = p.n_sites;
  const FmStability fm = fm_stability(p);
  j["fm"] = {{"min_omega", num(fm.min_omega)}, {"argmin_k", fm.argmin_k}, {"stable", fm.stable},
             {"boundary_alpha", num(fm_phase_boundary(p.j_lr))}};
  const std::vector<int> sizes = cfg.spinwave_sizes.empty() ? default_density_sizes() : cfg.spinwave_sizes;
  try {
    const ExcitationDensityResult d = excitation_density(p.alpha, p.j_lr, sizes);
    ordered_json series = ordered_json::array();
    for (const auto& [n, v] : d.finite_n_series) series.push_back({{"n", n}, {"density", num(v)}});
    j["density"] = {{"value", num(d.value)}, {"log_slope", num(d.log_slope)},
                    {"scaling", d.classification == DensityScaling::log_divergent ? "log_divergent" : "convergent"},
                    {"series", series}};
  } catch (const ModeInstability& e) {
    j["density"] = {{"error", e.what()}, {"n", e.n_sites()}, {"k", e.k_index()}};
  }
  try {
    j["label"] = std::string(to_string(classify_spinwave(p.alpha, p.j_lr)));
  } catch (const Unclassifiable& e) {
    j["label"] = "NA";
    j["label_error"] = e.what();
  }
  write_json(cfg, "spinwave.json", j);
  return 0;
}

int run_dmrg(const Flags& f) {
  RunConfig cfg = load(f);
  if (f.seed_set) cfg.dmrg.seed = cfg.seed;
  const ModelParams& p = cfg.model;
  const DmrgResult r = dmrg_ground_state(build_mpo(p), cfg.dmrg);
  ordered_json j = envelope("dmrg", cfg);
  j["alpha"] = num(p.alpha);
  j["j"] = num(p.j_lr);
  j["n"] = p.n_sites;
  j["energy"] = num(r.report.energy);
  j["energies_per_sweep"] = num_list(r.report.energies_per_sweep);
  j["truncation_per_sweep"] = num_list(r.report.truncation_per_sweep);
  j["max_truncation_error"] = num(r.report.max_truncation_error);
  j["converged"] = r.report.converged;
  j["sweeps"] = r.report.sweeps;
  j["s_half"] = num(r.report.entropy_profile[static_cast<std::size_t>(p.n_sites / 2 - 1)]);
  j["entropy_profile"] = num_list(r.report.entropy_profile);
  j["bond_dims"] = r.report.bond_dims;
  if (cfg.dmrg.compute_variance) j["variance"] = num(r.report.variance);
  if (!cfg.checkpoint.empty()) {
    save_checkpoint(cfg.checkpoint, r.state, cfg.dmrg.seed);
    j["checkpoint"] = cfg.checkpoint;
  }
  write_json(cfg, "dmrg.json", j);
  if (!r.report.converged) std::cerr << "warning: DMRG did not converge in " << r.report.sweeps << " sweeps\n";
  return 0;
}

int run_sweep_cmd(const Flags& f) {
  const RunConfig cfg = load(f);
  const SweepSummary s = run_sweep(cfg, [](const std::string& line) { std::cerr << line << "\n"; });
  std::cout << "sweep: " << s.records.size() << " points (" << s.computed << " computed, " << s.skipped
            << " resumed) in " << cfg.output_dir << "\n";
  return 0;
}

EntropyScalingSeries read_series_csv(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  EntropyScalingSeries s;
  bool header = true;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.rfind("L", 0) == 0) continue;  // "L,S"
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError(path + ":" + std::to_string(line_no) + ": expected L,S");
    try {
      s.points.push_back({std::stoi(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
    } catch (const std::exception&) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected L,S");
    }
  }
  return s;
}

int run_fit(const Flags& f, const std::string& input) {
  const RunConfig cfg = load(f);
  const EntropyScalingSeries series = read_series_csv(input);
  FitOptions opts;
  opts.seed = cfg.seed;
  const CentralChargeFit fit = fit_central_charge(series, opts);
  ordered_json j = envelope("fit", cfg);
  j["input"] = input;
  j["n_points"] = fit.n_points;
  j["c"] = num(fit.c);
  j["offset"] = num(fit.offset);
  j["residual"] = num(fit.residual);
  j["ci_halfwidth"] = num(fit.ci_halfwidth);
  write_json(cfg, "fit.json", j);
  return 0;
}

// Accepts sweep records (single or array) or bare {"c": .., "sigma_z_mean": ..} objects.
int run_classify(const Flags& f, const std::string& input) {
  const RunConfig cfg = load(f);
  nlohmann::json in;
  try {
    in = nlohmann::json::parse(read_text(input));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(input + ": " + e.what());
  }
  if (!in.is_array()) in = nlohmann::json::array({in});
  ordered_json out = ordered_json::array();
  for (const auto& item : in) {
    double c = NAN, sz = NAN;
    ordered_json row;
    if (item.contains("schema")) {
      const SweepRecord r = record_from_json(item);
      c = r.has_fit ? r.fit.c : NAN;
      sz = r.order.sigma_z_mean;
      row["alpha"] = num(r.alpha);
      row["j"] = num(r.j);
    } else {
      c = item.at("c").get<double>();
      sz = item.at("sigma_z_mean").get<double>();
    }
    row["c"] = num(c);
    row["sigma_z_mean"] = num(sz);
    row["label"] = std::isfinite(c) && std::isfinite(sz) ? std::string(to_string(classify_phase(c, sz))) : "NA";
    out.push_back(row);
  }
  ordered_json j = envelope("classify", cfg);
  j["input"] = input;
  j["points"] = out;
  write_json(cfg, "classify.json", j);
  return 0;
}

ordered_json effective_json(const EffectiveParams& e) {
  return {{"alpha", num(e.alpha)},
          {"j_over_n", num(e.j_over_n)},
          {"coherent_prefactor", num(e.coherent_prefactor)},
          {"gamma_collective", num(e.gamma_collective)},
          {"unitarity_ratio", num(e.unitarity_ratio)},
          {"bad_cavity_ratio", num(e.bad_cavity_ratio)},
          {"diagonal_terms", e.diagonal_terms}};
}

std::string trajectory_csv(const Trajectory& t) {
  std::string out = "t";
  for (const auto& n : t.names) out += "," + n;
  out += "\n";
  char buf[32];
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.12g", t.times[k]);
    out += buf;
    for (const auto& col : t.columns) {
      std::snprintf(buf, sizeof buf, ",%.12g", col[k]);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

int run_cavity(const Flags& f, const std::string& action) {
  const RunConfig cfg = load(f);
  const EffectiveParams e = effective_params(cfg.cavity);
  if (action == "map") {
    ordered_json j = envelope("cavity-map", cfg);
    j["effective"] = effective_json(e);
    std::cout << j.dump(2) << "\n";
    write_json(cfg, "cavity_map.json", j);
    return 0;
  }
  if (action == "simulate") {
    const Trajectory t = cfg.cavity_model == "full" ? simulate_full(cfg.cavity, cfg.simulation)
                                                    : simulate_effective(cfg.cavity, cfg.simulation, cfg.include_dissipator);
    const fs::path path = fs::path(cfg.output_dir) / ("trajectory_" + cfg.cavity_model + ".csv");
    write_text(path, trajectory_csv(t));
    std::cout << "wrote " << path.string() << "\n";
    ordered_json j = envelope("cavity-simulate", cfg);
    j["model"] = cfg.cavity_model;
    j["integrator"] = t.integrator;
    j["dt_used"] = num(t.dt_used);
    j["max_trace_error"] = num(t.max_trace_error);
    j["max_hermiticity_error"] = num(t.max_hermiticity_error);
    j["min_eigenvalue"] = num(t.min_eigenvalue);
    j["effective"] = effective_json(e);
    write_json(cfg, "trajectory_" + cfg.cavity_model + ".meta.json", j);
    return 0;
  }
  // compare
  const Trajectory full = simulate_full(cfg.cavity, cfg.simulation);
  const Trajectory eff = simulate_effective(cfg.cavity, cfg.simulation, cfg.include_dissipator);
  const TrajectoryDeviation d = compare_trajectories(full, eff);
  ordered_json j = envelope("cavity-compare", cfg);
  ordered_json dev = ordered_json::object();
  for (std::size_t k = 0; k < d.names.size(); ++k)
    dev[d.names[k]] = {{"max_abs_deviation", num(d.max_abs_deviation[k])}, {"at_time", num(d.at_time[k])}};
  j["deviation"] = dev;
  j["max_sz_deviation"] = num(d.max_sz_deviation);
  j["effective"] = effective_json(e);
  std::cout << "max sz deviation " << d.max_sz_deviation << "\n";
  write_json(cfg, "cavity_compare.json", j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"XXZ chain with an infinite-range XX coupling: ED, spin waves, DMRG, cavity mapping"};
  app.require_subcommand(1);
  Flags flags;
  auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--config", flags.config, "Config file (INI-like, see docs/config.md)");
    sub->add_option("--out", flags.out, "Output directory (overrides [run] output_dir)");
    sub->add_option("--seed", flags.seed, "Run seed (overrides [run] seed)")->each([&flags](const std::string&) {
      flags.seed_set = true;
    });
    sub->add_option("--workers", flags.workers, "Worker threads for sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--format", flags.format, "Record format")->check(CLI::IsMember({"csv", "json", "both"}));
  };

  auto* ed = app.add_subcommand("ed", "Exact diagonalization ground state");
  auto* sw = app.add_subcommand("spinwave", "Spin-wave stability and excitation density");
  auto* dm = app.add_subcommand("dmrg", "Two-site DMRG ground state");
  auto* sweep = app.add_subcommand("sweep", "Phase-diagram sweep over (alpha, J)");
  auto* fit = app.add_subcommand("fit-c", "Fit the central charge to an L,S CSV");
  auto* cls = app.add_subcommand("classify", "Classify phase points from JSON");
  auto* cav = app.add_subcommand("cavity", "Cavity mapping and master-equation runs");
  std::string input;
  std::string action;
  fit->add_option("input", input, "CSV with columns L,S")->required();
  cls->add_option("input", input, "JSON record(s)")->required();
  cav->add_option("action", action, "map | simulate | compare")
      ->required()
      ->check(CLI::IsMember({"map", "simulate", "compare"}));
  for (auto* sub : {ed, sw, dm, sweep, fit, cls, cav}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (ed->parsed()) return run_ed(flags);
    if (sw->parsed()) return run_spinwave(flags);
    if (dm->parsed()) return run_dmrg(flags);
    if (sweep->parsed()) return run_sweep_cmd(flags);
    if (fit->parsed()) return run_fit(flags, input);
    if (cls->parsed()) return run_classify(flags, input);
    if (cav->parsed()) return run_cavity(flags, action);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
