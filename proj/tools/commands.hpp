#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace redmon::cli {

enum ExitCode : int { ok = 0, config_error = 1, runtime_error = 2 };

struct RunOptions {
  std::string scenario;  // config path or preset name
  std::vector<std::uint64_t> seeds;
  std::optional<std::string> out;
  std::string format = "json";
};

struct AvailOptions {
  double lambda = 1e-4;
  double mu = 20.83e-3;
  int n_max = 4;
  std::string format = "table";
};

int run(const RunOptions& opt, std::ostream& out, std::ostream& err);
int presets(std::ostream& out);
int avail(const AvailOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace redmon::cli
