#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "fdpr/runner.hpp"

namespace {

struct Overrides {
  std::string config;
  std::map<std::string, std::string> values;
};

void add_flags(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config, "Config file with key = value lines");
  auto flag = [&](const std::string& name, const std::string& key, const std::string& help) {
    cmd.add_option_function<std::string>(name, [&o, key](const std::string& v) { o.values[key] = v; }, help);
  };
  flag("--engine", "engine", "mls | shepard | l1-cold | l1-warm | l1-colgen");
  flag("--degree", "degree", "Polynomial degree m");
  flag("--weight", "weight", "Weight profile, e.g. gaussian:nu=1 or algebraic:k=6.2");
  flag("--delta-factor", "delta_factor", "Multiplier c in delta = c * (h, q or 2h)");
  flag("--delta-mode", "delta_mode", "fill | separation | diameter");
  flag("--nodes", "nodes", "Nodes per axis, comma separated refinement levels");
  flag("--seed", "seed", "Perturbation seed");
  flag("--perturb", "perturb", "Perturbation fraction in [0, 0.5)");
  flag("--grid", "grid", "Evaluation points per axis (0 = default)");
  flag("--out", "out", "Output CSV path (default stdout)");
  flag("--domain", "domain", "Box as lo:hi per axis, e.g. 0:1,0:1");
  flag("--family", "family", "monomial | chebyshev");
  flag("--target", "target", "sin-pi | franke | polynomial:c0;c1;...");
  flag("--theta", "theta", "Cone angle (theory)");
  flag("--radius", "radius", "Cone radius (theory)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fast-decaying polynomial reproduction experiments"};
  app.require_subcommand(1);
  Overrides o;
  std::vector<std::pair<CLI::App*, std::string>> commands = {
      {app.add_subcommand("basis", "Dump basis functions on the evaluation grid"), "basis"},
      {app.add_subcommand("converge", "Sup-norm errors over a node refinement sequence"), "converge"},
      {app.add_subcommand("lebesgue", "Lebesgue constants over a node refinement sequence"), "lebesgue"},
      {app.add_subcommand("theory", "Theoretical constants and stability bounds"), "theory"},
  };
  for (auto& [cmd, name] : commands) add_flags(*cmd, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fdpr::exit_config;
  }

  try {
    fdpr::ExperimentConfig config = o.config.empty() ? fdpr::ExperimentConfig{} : fdpr::load_config(o.config);
    for (auto& [cmd, name] : commands)
      if (cmd->parsed()) config.command = name;
    for (const auto& [key, value] : o.values) fdpr::set_config_value(config, key, value);

    const std::string text = fdpr::run(config);
    if (config.out.empty() || config.out == "-") {
      std::cout << text;
    } else {
      std::ofstream out(config.out);
      if (!out) throw fdpr::ConfigError("cannot write '" + config.out + "'");
      out << text;
    }
    return fdpr::exit_ok;
  } catch (const std::exception& e) {
    std::cerr << "fdpr: " << e.what() << '\n';
    return fdpr::exit_code_for(e);
  }
}
