#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlogit/calibration.hpp"
#include "rlogit/dynamics.hpp"
#include "rlogit/utility.hpp"

namespace rlogit {

// Catch counts of one competition year.
struct YearCatches {
  std::string year;
  std::vector<long> catches;

  long max() const;
};

// Long-format catch table (`year,catch`), years in order of first appearance.
struct CatchDataset {
  std::vector<YearCatches> years;

  std::size_t record_count() const;
  const YearCatches* find(const std::string& year) const;
};

// Parse `year,catch` CSV. Rejects malformed or negative rows (the message names
// the 1-based line) and years whose maximum is 0. Throws IoError.
CatchDataset parse_catches(std::istream& in, const std::string& source = "<stream>");
CatchDataset load_catches(const std::filesystem::path& path);
void write_catches(std::ostream& os, const CatchDataset& data);

// Divides each catch by its own year's maximum.
EmpiricalSample normalize(const CatchDataset& data);

// A named column of a CSV table.
struct Column {
  std::string name;
  std::vector<double> values;
};

// Writes `header...` then rows of 17-significant-digit values, LF endings.
// Columns must have equal length. Throws DomainError / IoError.
void write_columns(std::ostream& os, std::span<const Column> columns);
void write_columns(const std::filesystem::path& path, std::span<const Column> columns);

// `x_mid,pdf[,pdf2]`.
void write_pdf_table(const std::filesystem::path& path, std::span<const double> x_mid,
                     std::span<const double> pdf,
                     std::optional<std::span<const double>> pdf2 = std::nullopt);

// `time,x_mid,pdf`, one row per (snapshot, cell).
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

// `eta,time,error,rate`, rate left empty when absent.
void write_convergence_csv(std::ostream& os, std::span<const ConvergenceRow> rows);
void write_convergence_csv(const std::filesystem::path& path,
                           std::span<const ConvergenceRow> rows);

void write_text(const std::filesystem::path& path, const std::string& text);

// Parsed and validated run configuration.
struct RunConfig {
  std::size_t n = 500;
  double kappa = 1.0;
  std::optional<double> eta = 0.01;  // empty means the vanishing-noise limit
  double dt = 1e-3;
  double delta = 1e-11;
  std::size_t max_steps = 1'000'000;
  CompetitionParams utility;
  std::string init = "uniform";
  std::vector<double> record_times;
  nlohmann::json fit;  // raw `fit` section, interpreted by the fit command

  Grid grid() const { return Grid(n); }
  DynamicConfig dynamic() const;
  nlohmann::json to_json() const;
};

// Validates every field and throws ConfigError listing all problems at once.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace rlogit
