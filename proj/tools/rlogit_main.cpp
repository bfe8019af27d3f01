// Command-line front end: rlogit <subcommand> --config <path> --out <dir> [...]

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rlogit/commands.hpp"

namespace {

// "0,0.1,0.5" -> {0, 0.1, 0.5}
std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational (kappa-exponential) logit dynamic on [0,1]"};
  app.require_subcommand(1);

  rlogit::CommandOptions opt;
  std::string data, kappas, etas, times;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON run configuration")->required();
    sub->add_option("--out", opt.out, "output directory")->required();
  };

  auto* simulate = app.add_subcommand("simulate", "integrate to the recorded times");
  common(simulate);
  auto* stationary = app.add_subcommand("stationary", "integrate until the PDF stops changing");
  common(stationary);
  auto* fit = app.add_subcommand("fit", "calibrate against the catch dataset");
  common(fit);
  fit->add_option("--data", data, "catch CSV (year,catch)")->required();
  auto* conv = app.add_subcommand("convergence-eta", "errors against the vanishing-noise limit");
  common(conv);
  conv->add_option("--etas", etas, "comma-separated noise intensities");
  conv->add_option("--times", times, "comma-separated times");
  auto* sweep = app.add_subcommand("sweep-kappa", "stationary PDFs for several kappa");
  common(sweep);
  sweep->add_option("--kappas", kappas, "comma-separated kappa values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : rlogit::kExitConfig;
  }

  try {
    if (!data.empty()) opt.data = data;
    if (!kappas.empty()) opt.kappas = parse_list(kappas);
    if (!etas.empty()) opt.etas = parse_list(etas);
    if (!times.empty()) opt.times = parse_list(times);
  } catch (const std::exception&) {
    std::cerr << "error: lists must be comma-separated numbers\n";
    return rlogit::kExitConfig;
  }

  return rlogit::run_command(app.get_subcommands().front()->get_name(), opt);
}
