#include "rlogit/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

#include <nlohmann/json.hpp>

#include "rlogit/calibration.hpp"
#include "rlogit/csv_format.hpp"
#include "rlogit/dataio.hpp"
#include "rlogit/dynamics.hpp"
#include "rlogit/errors.hpp"

namespace rlogit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Everything a subcommand reports back besides its data files.
struct RunManifest {
  std::string subcommand;
  json config;
  json inputs = json::object();
  std::vector<std::string> outputs;
  std::string status = "ok";
  std::string termination;
  std::string error;
  json details = json::object();
};

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_manifest(const fs::path& out, const RunManifest& m, double seconds) {
  json doc = {{"subcommand", m.subcommand},
              {"config", m.config},
              {"inputs", m.inputs},
              {"outputs", m.outputs},
              {"wall_seconds", seconds},
              {"status", m.status},
              {"termination", m.termination}};
  if (!m.error.empty()) doc["error"] = m.error;
  if (!m.details.empty()) doc["details"] = m.details;
  write_text(out / "manifest.json", doc.dump(2) + "\n");
}

// Runs `body`, maps exceptions to exit codes and always writes a manifest.
int execute(const std::string& name, const CommandOptions& opt,
            const std::function<void(RunManifest&)>& body) {
  const auto start = std::chrono::steady_clock::now();
  RunManifest manifest;
  manifest.subcommand = name;
  manifest.inputs["config"] = opt.config.string();
  if (opt.data) manifest.inputs["data"] = opt.data->string();
  int code = kExitOk;

  try {
    fs::create_directories(opt.out);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: cannot create output directory: " << e.what() << '\n';
    return kExitIo;
  }

  try {
    body(manifest);
  } catch (const ConfigError& e) {
    manifest.status = "config_error";
    manifest.error = e.what();
    code = kExitConfig;
  } catch (const IoError& e) {
    manifest.status = "io_error";
    manifest.error = e.what();
    code = kExitIo;
  } catch (const DegenerateWeights& e) {
    manifest.status = "solver_error";
    manifest.termination = "degenerate_weights";
    manifest.error = e.what();
    code = kExitSolver;
  } catch (const SolverFailure& e) {
    manifest.status = "solver_error";
    manifest.error = e.what();
    code = kExitSolver;
  } catch (const FitFailed& e) {
    manifest.status = "solver_error";
    manifest.error = e.what();
    code = kExitSolver;
  } catch (const DomainError& e) {
    // Invalid values that slipped past structural validation.
    manifest.status = "config_error";
    manifest.error = e.what();
    code = kExitConfig;
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  try {
    write_manifest(opt.out, manifest, seconds);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  if (code != kExitOk) std::cerr << "error: " << manifest.error << '\n';
  return code;
}

RunConfig load_config(const CommandOptions& opt, RunManifest& m) {
  RunConfig cfg = load_run_config(opt.config);
  m.config = cfg.to_json();
  return cfg;
}

// Throws ConfigError when the config cannot drive a solver.
DynamicConfig dynamic_of(const RunConfig& cfg) {
  try {
    return cfg.dynamic();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

CompetitionUtility model_of(const RunConfig& cfg) {
  try {
    return CompetitionUtility(cfg.utility, cfg.grid());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

void add_output(RunManifest& m, const fs::path& p) { m.outputs.push_back(p.string()); }

// Stationary solve shared by `stationary` and `sweep-kappa`.
Trajectory stationary_run(const RunConfig& cfg, const DynamicConfig& dyn) {
  const auto model = model_of(cfg);
  return run_to_stationary(dyn, model, GridMeasure::uniform(dyn.grid), cfg.max_steps);
}

}  // namespace

int cmd_simulate(const CommandOptions& opt) {
  return execute("simulate", opt, [&](RunManifest& m) {
    const RunConfig cfg = load_config(opt, m);
    const DynamicConfig dyn = dynamic_of(cfg);
    if (cfg.record_times.empty()) throw ConfigError("record_times: simulate needs at least one time");
    const double t_final = *std::max_element(cfg.record_times.begin(), cfg.record_times.end());
    if (!(t_final >= dyn.dt)) throw ConfigError("record_times: largest time must be >= dt");
    const auto model = model_of(cfg);

    const auto traj = run_until(dyn, model, GridMeasure::uniform(dyn.grid), t_final, cfg.record_times);
    const fs::path csv = opt.out / "trajectory.csv";
    write_trajectory_csv(csv, traj);
    add_output(m, csv);
    m.termination = to_string(traj.termination);
    m.details["snapshots"] = traj.snapshots.size();
    m.details["steps"] = traj.steps;
  });
}

int cmd_stationary(const CommandOptions& opt) {
  return execute("stationary", opt, [&](RunManifest& m) {
    const RunConfig cfg = load_config(opt, m);
    const DynamicConfig dyn = dynamic_of(cfg);
    const auto traj = stationary_run(cfg, dyn);
    const GridMeasure& mu = traj.final_measure();
    const Moments mom = mean_and_std(mu);

    const fs::path csv = opt.out / "stationary_pdf.csv";
    write_pdf_table(csv, dyn.grid.midpoints(), mu.pdf());
    add_output(m, csv);

    json doc = {{"mean", mom.mean},
                {"std", mom.std},
                {"steps", traj.steps},
                {"termination", to_string(traj.termination)},
                {"rightmost_pdf", mu.pdf().back()}};
    if (traj.stationary_k) doc["stationary_k"] = *traj.stationary_k;
    const fs::path moments = opt.out / "moments.json";
    write_text(moments, doc.dump(2) + "\n");
    add_output(m, moments);

    m.termination = to_string(traj.termination);
    if (traj.termination != Termination::Stationary) {
      throw SolverFailure("no stationary state within " + std::to_string(cfg.max_steps) + " steps");
    }
  });
}

namespace {

FitSpec fit_spec_of(const RunConfig& cfg) {
  FitSpec spec;
  spec.start.utility = cfg.utility;
  spec.start.kappa = cfg.kappa;
  spec.start.eta = cfg.eta;
  spec.solver = {cfg.grid(), cfg.dt, cfg.delta, cfg.max_steps};

  const json& f = cfg.fit;
  std::vector<std::string> issues;
  if (!f.is_null() && !f.is_object()) throw ConfigError("fit: must be an object");
  if (f.is_object()) {
    if (f.contains("free")) {
      if (!f["free"].is_object()) {
        issues.emplace_back("fit.free: must map parameter names to [lo, hi]");
      } else {
        for (const auto& [name, b] : f["free"].items()) {
          try {
            const FitParam p = fit_param_from_string(name);
            if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
              issues.push_back("fit.free." + name + ": must be [lo, hi]");
              continue;
            }
            spec.free.push_back({p, {b[0].get<double>(), b[1].get<double>()}});
          } catch (const DomainError& e) {
            issues.push_back(std::string("fit.free: ") + e.what());
          }
        }
      }
    }
    auto count = [&](const char* key, std::size_t& out) {
      if (!f.contains(key)) return;
      if (f[key].is_number_integer() && f[key].get<long long>() >= 0) out = f[key].get<std::size_t>();
      else issues.push_back(std::string("fit.") + key + ": must be a nonnegative integer");
    };
    count("points_per_axis", spec.points_per_axis);
    count("refinement_levels", spec.refinement_levels);
    if (f.contains("shrink")) {
      if (f["shrink"].is_number()) spec.shrink = f["shrink"].get<double>();
      else issues.emplace_back("fit.shrink: must be a number");
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  try {
    spec.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

std::size_t fit_bins(const RunConfig& cfg) {
  if (cfg.fit.is_object() && cfg.fit.contains("bins")) {
    const auto& b = cfg.fit["bins"];
    if (!b.is_number_integer() || b.get<long long>() < 2) throw ConfigError("fit.bins: must be an integer >= 2");
    return b.get<std::size_t>();
  }
  return 20;
}

json point_json(const ModelPoint& p, const Grid& grid) {
  return {{"a", p.utility.a},
          {"b", p.utility.b},
          {"c", p.utility.c},
          {"d", p.utility.d},
          {"alpha", p.utility.alpha},
          {"epsilon", p.utility.epsilon_for(grid)},
          {"eta", p.eta ? json(*p.eta) : json("limit")},
          {"kappa", p.kappa}};
}

}  // namespace

int cmd_fit(const CommandOptions& opt) {
  return execute("fit", opt, [&](RunManifest& m) {
    const RunConfig cfg = load_config(opt, m);
    dynamic_of(cfg);
    const FitSpec spec = fit_spec_of(cfg);
    const std::size_t bins = fit_bins(cfg);
    if (!opt.data) throw ConfigError("--data: fit needs the catch dataset");

    const EmpiricalSample sample = normalize(load_catches(*opt.data));
    const Moments target = empirical_stats(sample);
    const FitResult fit = fit_search(spec, target);

    const Grid grid = cfg.grid();
    json log = json::array();
    for (const auto& e : fit.log) {
      json row = {{"level", e.level}, {"point", point_json(e.point, grid)}};
      if (e.value) row["objective"] = e.value->objective;
      else row["failure"] = e.failure;
      log.push_back(row);
    }
    const json doc = {
        {"parameters", point_json(fit.best, grid)},
        {"objective", fit.value.objective},
        {"model", {{"mean", fit.value.model.mean}, {"std", fit.value.model.std}}},
        {"target", {{"mean", target.mean}, {"std", target.std}}},
        {"relative_error",
         {{"mean", (fit.value.model.mean - target.mean) / target.mean},
          {"std", (fit.value.model.std - target.std) / target.std}}},
        {"evaluations", fit.log.size()},
        {"level_best", fit.level_best},
        {"log", log}};
    const fs::path fit_path = opt.out / "fit.json";
    write_text(fit_path, doc.dump(2) + "\n");
    add_output(m, fit_path);

    // Empirical histogram next to the fitted stationary PDF on the same bins.
    DynamicConfig dyn{Kappa(fit.best.kappa),
                      fit.best.eta ? NoiseMode::positive(*fit.best.eta) : NoiseMode::vanishing_limit(),
                      cfg.dt, cfg.delta, grid};
    const CompetitionUtility model(fit.best.utility, grid);
    const auto traj = run_to_stationary(dyn, model, GridMeasure::uniform(grid), cfg.max_steps);
    const Grid hist(bins);
    std::vector<double> binned(bins, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      binned[hist.cell_of(grid.midpoint(i))] += traj.final_measure()[i];
    }
    for (double& v : binned) v *= static_cast<double>(bins);
    const fs::path pdf_path = opt.out / "fit_pdf.csv";
    write_pdf_table(pdf_path, hist.midpoints(), empirical_pdf(sample, bins), binned);
    add_output(m, pdf_path);
    m.termination = to_string(traj.termination);
  });
}

int cmd_convergence_eta(const CommandOptions& opt) {
  return execute("convergence-eta", opt, [&](RunManifest& m) {
    RunConfig cfg = load_config(opt, m);
    if (cfg.kappa == 0.0) throw ConfigError("dynamic.kappa: convergence-eta requires kappa > 0");
    const std::vector<double> etas = opt.etas.empty() ? std::vector<double>{1e-4, 1e-3, 1e-2, 1e-1} : opt.etas;
    const std::vector<double> times = opt.times.empty() ? std::vector<double>{1.0, 10.0} : opt.times;
    for (double e : etas) {
      if (!(e > 0.0)) throw ConfigError("--etas: every eta must be > 0");
    }
    for (double t : times) {
      if (!(t > 0.0)) throw ConfigError("--times: every time must be > 0");
    }
    const DynamicConfig dyn = dynamic_of(cfg);
    const auto model = model_of(cfg);
    const auto rows = eta_convergence_table(dyn, model, GridMeasure::uniform(dyn.grid), etas, times);
    const fs::path csv = opt.out / "convergence_eta.csv";
    write_convergence_csv(csv, rows);
    add_output(m, csv);
    m.details["etas"] = etas;
    m.details["times"] = times;
    m.termination = to_string(Termination::ReachedFinalTime);
  });
}

int cmd_sweep_kappa(const CommandOptions& opt) {
  return execute("sweep-kappa", opt, [&](RunManifest& m) {
    const RunConfig cfg = load_config(opt, m);
    dynamic_of(cfg);
    const std::vector<double> kappas = opt.kappas.empty() ? std::vector<double>{0.0, 0.1, 0.5, 1.0} : opt.kappas;
    for (double k : kappas) {
      if (!(k >= 0.0 && k <= 1.0)) throw ConfigError("--kappas: every kappa must lie in [0, 1]");
    }
    const Grid grid = cfg.grid();
    std::vector<Column> columns{{"x_mid", grid.midpoints()}};
    json per_kappa = json::array();
    std::vector<std::string> failures;
    for (double k : kappas) {
      json entry = {{"kappa", k}};
      RunConfig local = cfg;
      local.kappa = k;
      try {
        const DynamicConfig dyn = local.dynamic();
        const auto traj = stationary_run(local, dyn);
        entry["termination"] = to_string(traj.termination);
        entry["steps"] = traj.steps;
        if (traj.termination != Termination::Stationary) {
          failures.push_back("kappa=" + label(k) + ": not stationary");
        }
        columns.push_back({"pdf_kappa_" + label(k), traj.final_measure().pdf()});
      } catch (const std::exception& e) {
        // ConfigError (limit mode at kappa 0) and DegenerateWeights land here.
        entry["error"] = e.what();
        failures.push_back("kappa=" + label(k) + ": " + e.what());
      }
      per_kappa.push_back(entry);
    }
    m.details["runs"] = per_kappa;
    if (columns.size() > 1) {
      const fs::path csv = opt.out / "sweep_kappa.csv";
      write_columns(csv, columns);
      add_output(m, csv);
    }
    if (!failures.empty()) {
      std::string msg = "sweep failures:";
      for (const auto& f : failures) msg += " [" + f + "]";
      throw SolverFailure(msg);
    }
    m.termination = to_string(Termination::Stationary);
  });
}

int run_command(const std::string& name, const CommandOptions& options) {
  if (name == "simulate") return cmd_simulate(options);
  if (name == "stationary") return cmd_stationary(options);
  if (name == "fit") return cmd_fit(options);
  if (name == "convergence-eta") return cmd_convergence_eta(options);
  if (name == "sweep-kappa") return cmd_sweep_kappa(options);
  std::cerr << "error: unknown subcommand `" << name << "`\n";
  return kExitConfig;
}

}  // namespace rlogit
