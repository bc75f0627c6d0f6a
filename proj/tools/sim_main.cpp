#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

int main(int argc, char** argv) {
  namespace cli = redmon::cli;
  CLI::App app{"Redundant LoRa monitoring simulator"};
  app.require_subcommand(1);

  cli::RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run a scenario and print its metrics report");
  run_cmd->add_option("scenario", run.scenario, "config file or preset name")->required();
  run_cmd->add_option("--seeds", run.seeds, "comma separated master seeds")->delimiter(',');
  run_cmd->add_option("--out", run.out, "write the report here instead of stdout");
  run_cmd->add_option("--format", run.format, "json or csv")->capture_default_str();

  auto* presets_cmd = app.add_subcommand("presets", "list preset scenario names");

  cli::AvailOptions av;
  auto* avail_cmd = app.add_subcommand("avail", "steady-state failure probability table");
  avail_cmd->add_option("--lambda", av.lambda, "failure rate of one board (per hour)")->required();
  avail_cmd->add_option("--mu", av.mu, "repair rate (per hour)")->required();
  avail_cmd->add_option("--n-max", av.n_max, "largest number of redundant boards")->required();
  avail_cmd->add_option("--format", av.format, "table, csv or json")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::config_error;
  }

  if (*run_cmd) return cli::run(run, std::cout, std::cerr);
  if (*presets_cmd) return cli::presets(std::cout);
  if (*avail_cmd) return cli::avail(av, std::cout, std::cerr);
  return cli::config_error;
}
