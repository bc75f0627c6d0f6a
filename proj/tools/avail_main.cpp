#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

void add_avail_options(CLI::App& app, redmon::cli::AvailOptions& opt) {
  app.add_option("--lambda", opt.lambda, "failure rate of one board (per hour)")->required();
  app.add_option("--mu", opt.mu, "repair rate (per hour)")->required();
  app.add_option("--n-max", opt.n_max, "largest number of redundant boards")->required();
  app.add_option("--format", opt.format, "table, csv or json")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state failure probability of N redundant boards"};
  redmon::cli::AvailOptions opt;
  add_avail_options(app, opt);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : redmon::cli::config_error;
  }
  return redmon::cli::avail(opt, std::cout, std::cerr);
}
