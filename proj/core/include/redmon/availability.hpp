#pragma once

#include <functional>
#include <string>
#include <vector>

namespace redmon::availability {

/// Birth-death availability model of a component with N redundant boards.
/// State i is the number of working boards; rates are per hour.
struct BirthDeathModel {
  int n_boards = 1;
  double lambda = 1e-4;
  double mu = 20.83e-3;
  // State i -> failure rate out of i (i >= 1) and repair rate out of i (i < N).
  // Empty functions select the defaults lambda_i = i*lambda and mu_i = mu.
  std::function<double(int)> failure_rate_policy;
  std::function<double(int)> repair_rate_policy;

  double failure_rate(int state) const;
  double repair_rate(int state) const;

  /// Throws std::invalid_argument for N < 1 or non-positive rates.
  void validate() const;
};

/// Dense row-major (N+1)x(N+1) generator.
class GeneratorMatrix {
 public:
  explicit GeneratorMatrix(std::size_t n) : n_(n), q_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return q_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return q_[r * n_ + c]; }

 private:
  std::size_t n_;
  std::vector<double> q_;
};

using SteadyStateVector = std::vector<double>;

GeneratorMatrix build_generator(const BirthDeathModel& model);

/// Product-form solution: pi_k = pi_0 * prod_{i=1..k} mu_{i-1} / lambda_i,
/// evaluated in log space.
SteadyStateVector steady_state_closed_form(const BirthDeathModel& model);

/// Solves pi Q = 0, sum(pi) = 1 for an arbitrary dense generator by
/// subtraction-free Gaussian state reduction. Throws std::domain_error when
/// the chain is reducible (a state cannot be eliminated).
SteadyStateVector steady_state_linear_solve(const GeneratorMatrix& q);

/// Largest |(pi Q)_j|.
double balance_residual(const SteadyStateVector& pi, const GeneratorMatrix& q);

/// MTTF of the pure-death chain (no repair) starting with N working boards:
/// sum_{k=1..N} 1/(k*lambda).
double mttf_without_repair(int n_boards, double lambda);

struct FailureRow {
  int n_boards;
  double pi0;
};

std::vector<FailureRow> failure_probability_table(double lambda, double mu, int n_max);

/// Mantissa/exponent text with `digits` significant digits, truncated toward
/// zero (4.7778e-03 -> "4.777e-03").
std::string format_truncated(double value, int digits);

enum class TableFormat { table, csv, json };
std::string render_table(const std::vector<FailureRow>& rows, TableFormat format);

}  // namespace redmon::availability
