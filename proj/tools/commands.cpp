#include "commands.hpp"

#include <fstream>
#include <iostream>

#include "redmon/availability.hpp"
#include "redmon/network.hpp"

namespace redmon::cli {

int run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  try {
    if (opt.format != "json" && opt.format != "csv") throw ConfigError("--format", "expected json or csv");
    cfg = load_scenario(opt.scenario);
    if (!opt.seeds.empty()) {
      cfg.seeds = opt.seeds;
      cfg.iterations = static_cast<int>(opt.seeds.size());
    }
    cfg.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  }

  try {
    const MetricsReport report = run_scenario(cfg);
    const std::string text = opt.format == "csv" ? to_csv(report) : to_json(report);
    if (opt.out) {
      std::ofstream f(*opt.out, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + *opt.out);
      f << text;
      if (!f) throw std::runtime_error("write failed: " + *opt.out);
    } else {
      out << text;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return runtime_error;
  }
  return ok;
}

int presets(std::ostream& out) {
  for (const auto& name : preset_names()) out << name << '\n';
  return ok;
}

int avail(const AvailOptions& opt, std::ostream& out, std::ostream& err) {
  availability::TableFormat format;
  if (opt.format == "table") {
    format = availability::TableFormat::table;
  } else if (opt.format == "csv") {
    format = availability::TableFormat::csv;
  } else if (opt.format == "json") {
    format = availability::TableFormat::json;
  } else {
    err << "config error: --format: expected table, csv or json\n";
    return config_error;
  }
  std::vector<availability::FailureRow> rows;
  try {
    rows = availability::failure_probability_table(opt.lambda, opt.mu, opt.n_max);
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return config_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return runtime_error;
  }
  out << availability::render_table(rows, format);
  return ok;
}

}  // namespace redmon::cli
