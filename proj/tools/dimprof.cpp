// dimprof: run one verification experiment and write its report.
//
//   dimprof <experiment> [--config FILE] [--override key=value]... [--format json|csv|both]
//   dimprof list
//   dimprof defaults <experiment>

#include "dimprof/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Dimension profiles of point clouds through kernel packing games"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::string format;
  std::string experiment;

  app.add_subcommand("list", "Print experiment names");
  auto* defaults = app.add_subcommand("defaults", "Print the default config of an experiment");
  defaults->add_option("experiment", experiment)->required();

  for (const auto& name : dimprof::experiment_names()) {
    auto* sub = app.add_subcommand(name, "Run " + name);
    sub->add_option("--config", config_path, "Flat key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--override", overrides, "key=value, applied after the config file");
    sub->add_option("--format", format, "json, csv or both (default from config)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "list") {
      for (const auto& n : dimprof::experiment_names()) std::cout << n << '\n';
      return 0;
    }
    if (name == "defaults") {
      std::cout << dimprof::default_config(experiment).canonical();
      return 0;
    }

    dimprof::Config config;
    if (!config_path.empty()) config = dimprof::Config::load(config_path);
    for (const auto& o : overrides) config.apply_override(o);
    if (!format.empty()) config.set("format", format);

    const dimprof::ExperimentReport report = dimprof::run_experiment(name, config);
    const auto fmt = dimprof::parse_report_format(report.config.get("format"));
    for (const auto& path : dimprof::emit_report(report, fmt)) std::cout << "wrote " << path << '\n';
    for (const auto& c : report.checks) {
      std::cout << (c.pass() ? "PASS " : "FAIL ") << c.name << ": " << c.value
                << (c.relation == dimprof::Check::Relation::at_most ? " <= " : " >= ") << c.limit;
      if (!c.detail.empty()) std::cout << "  (" << c.detail << ")";
      std::cout << '\n';
    }
    for (const auto& e : report.errors) std::cout << "error: " << e << '\n';
    std::cout << report.experiment << ": " << (report.passed() ? "passed" : "failed") << " in "
              << report.wall_seconds << " s\n";
    return report.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "dimprof: " << e.what() << '\n';
    return 2;
  }
}
