#include "rlogit/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rlogit/csv_format.hpp"
#include "rlogit/errors.hpp"

namespace rlogit {

long YearCatches::max() const {
  return catches.empty() ? 0 : *std::max_element(catches.begin(), catches.end());
}

std::size_t CatchDataset::record_count() const {
  std::size_t n = 0;
  for (const auto& y : years) n += y.catches.size();
  return n;
}

const YearCatches* CatchDataset::find(const std::string& year) const {
  auto it = std::find_if(years.begin(), years.end(),
                         [&](const YearCatches& y) { return y.year == year; });
  return it == years.end() ? nullptr : &*it;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  return os;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw IoError("write failed: " + path.string());
}

}  // namespace

CatchDataset parse_catches(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw IoError(source + ":" + std::to_string(lineno) + ": " + why);
  };

  if (!std::getline(in, line)) {
    lineno = 1;
    fail("empty file, expected header `year,catch`");
  }
  ++lineno;
  if (trim(line) != "year,catch") fail("expected header `year,catch`");

  CatchDataset data;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string::npos || row.find(',', comma + 1) != std::string::npos) {
      fail("expected two fields `year,catch`");
    }
    const std::string year = trim(std::string_view(row).substr(0, comma));
    const std::string value = trim(std::string_view(row).substr(comma + 1));
    if (year.empty()) fail("empty year label");
    long catch_count = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), catch_count);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
      fail("catch is not an integer: `" + value + "`");
    }
    if (catch_count < 0) fail("negative catch " + value);

    auto it = std::find_if(data.years.begin(), data.years.end(),
                           [&](const YearCatches& y) { return y.year == year; });
    if (it == data.years.end()) {
      data.years.push_back({year, {}});
      it = std::prev(data.years.end());
    }
    it->catches.push_back(catch_count);
  }
  if (data.years.empty()) throw IoError(source + ": no data rows");
  for (const auto& y : data.years) {
    if (y.max() <= 0) throw IoError(source + ": year " + y.year + " has maximum catch 0");
  }
  return data;
}

CatchDataset load_catches(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return parse_catches(in, path.string());
}

void write_catches(std::ostream& os, const CatchDataset& data) {
  os << "year,catch\n";
  for (const auto& y : data.years) {
    for (long c : y.catches) os << y.year << ',' << c << '\n';
  }
}

EmpiricalSample normalize(const CatchDataset& data) {
  EmpiricalSample sample;
  for (const auto& y : data.years) {
    const long top = y.max();
    if (top <= 0) throw DomainError("normalize: year " + y.year + " has maximum 0");
    sample.per_year_max.emplace_back(y.year, top);
    for (long c : y.catches) {
      sample.values.push_back(static_cast<double>(c) / static_cast<double>(top));
    }
  }
  return sample;
}

void write_columns(std::ostream& os, std::span<const Column> columns) {
  if (columns.empty()) throw DomainError("write_columns: no columns");
  const std::size_t rows = columns.front().values.size();
  for (const auto& c : columns) {
    if (c.values.size() != rows) {
      throw DomainError("write_columns: column `" + c.name + "` has " +
                        std::to_string(c.values.size()) + " rows, expected " +
                        std::to_string(rows));
    }
  }
  for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << columns[j].name;
  os << '\n';
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      os << (j ? "," : "") << format_real(columns[j].values[i]);
    }
    os << '\n';
  }
}

void write_columns(const std::filesystem::path& path, std::span<const Column> columns) {
  std::ostringstream buf;
  write_columns(buf, columns);
  write_text(path, buf.str());
}

void write_pdf_table(const std::filesystem::path& path, std::span<const double> x_mid,
                     std::span<const double> pdf,
                     std::optional<std::span<const double>> pdf2) {
  std::vector<Column> cols{{"x_mid", {x_mid.begin(), x_mid.end()}},
                           {"pdf", {pdf.begin(), pdf.end()}}};
  if (pdf2) cols.push_back({"pdf2", {pdf2->begin(), pdf2->end()}});
  write_columns(path, cols);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "time,x_mid,pdf\n";
  for (const auto& snap : traj.snapshots) {
    const auto pdf = snap.measure.pdf();
    const std::string t = format_real(snap.time);
    for (std::size_t i = 0; i < pdf.size(); ++i) {
      os << t << ',' << format_real(snap.measure.grid().midpoint(i)) << ','
         << format_real(pdf[i]) << '\n';
    }
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ostringstream buf;
  write_trajectory_csv(buf, traj);
  write_text(path, buf.str());
}

void write_convergence_csv(std::ostream& os, std::span<const ConvergenceRow> rows) {
  os << "eta,time,error,rate\n";
  for (const auto& r : rows) {
    os << format_real(r.eta) << ',' << format_real(r.time) << ',' << format_real(r.error)
       << ',' << (r.rate ? format_real(*r.rate) : std::string()) << '\n';
  }
}

void write_convergence_csv(const std::filesystem::path& path,
                           std::span<const ConvergenceRow> rows) {
  std::ostringstream buf;
  write_convergence_csv(buf, rows);
  write_text(path, buf.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
  finish(os, path);
}

DynamicConfig RunConfig::dynamic() const {
  DynamicConfig cfg{Kappa(kappa),
                    eta ? NoiseMode::positive(*eta) : NoiseMode::vanishing_limit(),
                    dt, delta, Grid(n)};
  cfg.validate();
  return cfg;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json utility_json = {{"a", utility.a}, {"b", utility.b}, {"c", utility.c},
                                 {"d", utility.d}, {"alpha", utility.alpha},
                                 {"epsilon", utility.epsilon_for(Grid(n))}};
  nlohmann::json doc = {
      {"grid", {{"n", n}}},
      {"dynamic",
       {{"kappa", kappa},
        {"eta", eta ? nlohmann::json(*eta) : nlohmann::json("limit")},
        {"dt", dt},
        {"delta", delta},
        {"max_steps", max_steps}}},
      {"utility", utility_json},
      {"init", init},
      {"record_times", record_times},
  };
  if (!fit.is_null()) doc["fit"] = fit;
  return doc;
}

namespace {

// Collects every validation problem before reporting.
class FieldReader {
 public:
  explicit FieldReader(const nlohmann::json& doc) : doc_(doc) {}

  const nlohmann::json* lookup(const std::string& section, const std::string& key) {
    if (!doc_.contains(section)) return nullptr;
    const auto& s = doc_[section];
    if (!s.is_object()) {
      issue(section, "must be an object");
      return nullptr;
    }
    return s.contains(key) ? &s[key] : nullptr;
  }

  void number(const std::string& section, const std::string& key, double& out) {
    if (const auto* v = lookup(section, key)) {
      if (v->is_number()) out = v->get<double>();
      else issue(section + "." + key, "must be a number");
    }
  }

  void count(const std::string& section, const std::string& key, std::size_t& out) {
    if (const auto* v = lookup(section, key)) {
      if (v->is_number_integer() && v->get<long long>() >= 0) out = v->get<std::size_t>();
      else issue(section + "." + key, "must be a nonnegative integer");
    }
  }

  void issue(const std::string& field, const std::string& what) {
    issues.push_back(field + ": " + what);
  }

  std::vector<std::string> issues;

 private:
  const nlohmann::json& doc_;
};

}  // namespace

RunConfig parse_run_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw ConfigError("configuration root must be an object");
  RunConfig cfg;
  FieldReader r(doc);

  static const std::vector<std::string> known = {"grid", "dynamic", "utility", "init",
                                                 "record_times", "fit"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      r.issue(key, "unknown key");
    }
  }

  r.count("grid", "n", cfg.n);
  r.number("dynamic", "kappa", cfg.kappa);
  if (const auto* v = r.lookup("dynamic", "eta")) {
    if (v->is_string() && v->get<std::string>() == "limit") cfg.eta.reset();
    else if (v->is_number()) cfg.eta = v->get<double>();
    else r.issue("dynamic.eta", "must be a number or the string \"limit\"");
  }
  r.number("dynamic", "dt", cfg.dt);
  r.number("dynamic", "delta", cfg.delta);
  r.count("dynamic", "max_steps", cfg.max_steps);
  r.number("utility", "a", cfg.utility.a);
  r.number("utility", "b", cfg.utility.b);
  r.number("utility", "c", cfg.utility.c);
  r.number("utility", "d", cfg.utility.d);
  r.number("utility", "alpha", cfg.utility.alpha);
  if (r.lookup("utility", "epsilon")) {
    double eps = 0.0;
    r.number("utility", "epsilon", eps);
    cfg.utility.epsilon = eps;
  }
  if (doc.contains("init")) {
    if (doc["init"] == "uniform") cfg.init = "uniform";
    else r.issue("init", "only \"uniform\" is supported");
  }
  if (doc.contains("record_times")) {
    const auto& rt = doc["record_times"];
    if (!rt.is_array()) {
      r.issue("record_times", "must be a list of numbers");
    } else {
      for (const auto& t : rt) {
        if (t.is_number() && t.get<double>() >= 0.0) cfg.record_times.push_back(t.get<double>());
        else r.issue("record_times", "entries must be nonnegative numbers");
      }
    }
  }
  if (doc.contains("fit")) cfg.fit = doc["fit"];

  if (cfg.n < 2) r.issue("grid.n", "must be >= 2");
  if (!(cfg.kappa >= 0.0 && cfg.kappa <= 1.0)) r.issue("dynamic.kappa", "must lie in [0, 1]");
  if (cfg.eta && !(*cfg.eta > 0.0)) r.issue("dynamic.eta", "must be > 0 or \"limit\"");
  if (!cfg.eta && cfg.kappa == 0.0) {
    r.issue("dynamic.eta", "\"limit\" requires kappa > 0");
  }
  if (!(cfg.dt > 0.0 && cfg.dt <= 1.0)) r.issue("dynamic.dt", "must lie in (0, 1]");
  if (!(cfg.delta > 0.0)) r.issue("dynamic.delta", "must be > 0");
  if (cfg.max_steps < 1) r.issue("dynamic.max_steps", "must be >= 1");
  if (!(cfg.utility.a >= 0.0)) r.issue("utility.a", "must be >= 0");
  if (!(cfg.utility.b >= 0.0)) r.issue("utility.b", "must be >= 0");
  if (!(cfg.utility.c >= 0.0)) r.issue("utility.c", "must be >= 0");
  if (!(cfg.utility.d >= 0.0)) r.issue("utility.d", "must be >= 0");
  if (!(cfg.utility.alpha > 0.0 && cfg.utility.alpha < 1.0)) {
    r.issue("utility.alpha", "must lie in (0, 1)");
  }
  if (cfg.utility.epsilon && !(*cfg.utility.epsilon > 0.0)) {
    r.issue("utility.epsilon", "must be > 0");
  }

  if (!r.issues.empty()) throw ConfigError(std::move(r.issues));
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_run_config(doc);
}

}  // namespace rlogit
