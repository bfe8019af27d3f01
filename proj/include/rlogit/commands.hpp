#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rlogit {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitSolver = 2, kExitIo = 3 };

struct CommandOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::filesystem::path> data;  // fit
  std::vector<double> kappas;                 // sweep-kappa; empty = {0, 0.1, 0.5, 1}
  std::vector<double> etas;                   // convergence-eta; empty = {1e-4, 1e-3, 1e-2, 1e-1}
  std::vector<double> times;                  // convergence-eta; empty = {1, 10}
};

// Subcommands. Each writes its outputs plus `manifest.json` into options.out
// (the manifest is written on failure too) and returns the process exit code.
int cmd_simulate(const CommandOptions& options);
int cmd_stationary(const CommandOptions& options);
int cmd_fit(const CommandOptions& options);
int cmd_convergence_eta(const CommandOptions& options);
int cmd_sweep_kappa(const CommandOptions& options);

// Dispatches on the subcommand name; unknown names return kExitConfig.
int run_command(const std::string& name, const CommandOptions& options);

}  // namespace rlogit
