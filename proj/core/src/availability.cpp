#include "redmon/availability.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace redmon::availability {

double BirthDeathModel::failure_rate(int state) const {
  return failure_rate_policy ? failure_rate_policy(state) : state * lambda;
}

double BirthDeathModel::repair_rate(int state) const {
  return repair_rate_policy ? repair_rate_policy(state) : mu;
}

void BirthDeathModel::validate() const {
  if (n_boards < 1) throw std::invalid_argument("n_boards must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be positive");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("mu must be positive");
  for (int i = 1; i <= n_boards; ++i) {
    if (!(failure_rate(i) > 0.0)) throw std::invalid_argument("failure rate policy must be positive");
  }
  for (int i = 0; i < n_boards; ++i) {
    if (!(repair_rate(i) > 0.0)) throw std::invalid_argument("repair rate policy must be positive");
  }
}

GeneratorMatrix build_generator(const BirthDeathModel& model) {
  model.validate();
  const auto n = static_cast<std::size_t>(model.n_boards) + 1;
  GeneratorMatrix q(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int state = static_cast<int>(i);
    const double down = i > 0 ? model.failure_rate(state) : 0.0;
    const double up = i + 1 < n ? model.repair_rate(state) : 0.0;
    if (i > 0) q(i, i - 1) = down;
    if (i + 1 < n) q(i, i + 1) = up;
    q(i, i) = -(down + up);
  }
  return q;
}

SteadyStateVector steady_state_closed_form(const BirthDeathModel& model) {
  model.validate();
  const int n = model.n_boards;
  std::vector<double> log_w(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 1; k <= n; ++k) {
    log_w[k] = log_w[k - 1] + std::log(model.repair_rate(k - 1)) - std::log(model.failure_rate(k));
  }
  const double peak = *std::max_element(log_w.begin(), log_w.end());
  SteadyStateVector pi(log_w.size());
  double total = 0.0;
  for (std::size_t k = 0; k < pi.size(); ++k) {
    pi[k] = std::exp(log_w[k] - peak);
    total += pi[k];
  }
  for (double& p : pi) p /= total;
  return pi;
}

SteadyStateVector steady_state_linear_solve(const GeneratorMatrix& q) {
  const std::size_t n = q.size();
  if (n == 0) throw std::invalid_argument("empty generator");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && q(i, j) < 0.0) throw std::invalid_argument("negative off-diagonal rate");
    }
  }
  // Eliminate states n-1..1; only off-diagonal rates are read, so no
  // cancellation occurs and small probabilities keep full relative accuracy.
  GeneratorMatrix a = q;
  for (std::size_t k = n - 1; k >= 1; --k) {
    double exit = 0.0;
    for (std::size_t j = 0; j < k; ++j) exit += a(k, j);
    if (!(exit > 0.0)) throw std::domain_error("generator is reducible: state cannot be eliminated");
    for (std::size_t i = 0; i < k; ++i) a(i, k) /= exit;
    for (std::size_t i = 0; i < k; ++i) {
      const double via = a(i, k);
      if (via == 0.0) continue;
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j) a(i, j) += via * a(k, j);
      }
    }
  }
  SteadyStateVector pi(n, 0.0);
  pi[0] = 1.0;
  for (std::size_t j = 1; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < j; ++i) s += pi[i] * a(i, j);
    pi[j] = s;
  }
  double total = 0.0;
  for (double p : pi) total += p;
  for (double& p : pi) p /= total;
  return pi;
}

double balance_residual(const SteadyStateVector& pi, const GeneratorMatrix& q) {
  double worst = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += pi[i] * q(i, j);
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

double mttf_without_repair(int n_boards, double lambda) {
  if (n_boards < 1 || !(lambda > 0.0)) throw std::invalid_argument("mttf: need N >= 1 and lambda > 0");
  double mttf = 0.0;
  for (int k = 1; k <= n_boards; ++k) mttf += 1.0 / (k * lambda);
  return mttf;
}

std::vector<FailureRow> failure_probability_table(double lambda, double mu, int n_max) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  std::vector<FailureRow> rows;
  for (int n = 1; n <= n_max; ++n) {
    BirthDeathModel m;
    m.n_boards = n;
    m.lambda = lambda;
    m.mu = mu;
    rows.push_back({n, steady_state_closed_form(m)[0]});
  }
  return rows;
}

std::string format_truncated(double value, int digits) {
  if (digits < 1) throw std::invalid_argument("digits must be >= 1");
  if (value == 0.0 || !std::isfinite(value)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits - 1, value);
    return buf;
  }
  const bool negative = value < 0.0;
  const double v = std::abs(value);
  int exponent = static_cast<int>(std::floor(std::log10(v)));
  double mantissa = v / std::pow(10.0, exponent);
  if (mantissa >= 10.0) {
    mantissa /= 10.0;
    ++exponent;
  } else if (mantissa < 1.0) {
    mantissa *= 10.0;
    --exponent;
  }
  const double scale = std::pow(10.0, digits - 1);
  // The guard keeps values such as 1.25e-8 computed as 1.2499999999e-8 from
  // dropping a digit.
  const auto kept = static_cast<long long>(std::floor(mantissa * scale * (1.0 + 1e-12)));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%.*fe%+03d", negative ? "-" : "", digits - 1,
                static_cast<double>(kept) / scale, exponent);
  return buf;
}

std::string render_table(const std::vector<FailureRow>& rows, TableFormat format) {
  std::ostringstream os;
  switch (format) {
    case TableFormat::table:
      os << "N  pi0\n";
      for (const auto& r : rows) os << r.n_boards << "  " << format_truncated(r.pi0, 4) << '\n';
      break;
    case TableFormat::csv: {
      os << "n_boards,pi0\n";
      char buf[64];
      for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g", r.pi0);
        os << r.n_boards << ',' << buf << '\n';
      }
      break;
    }
    case TableFormat::json: {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& r : rows) j.push_back({{"n_boards", r.n_boards}, {"pi0", r.pi0}});
      os << j.dump(2) << '\n';
      break;
    }
  }
  return os.str();
}

}  // namespace redmon::availability
