#include "redmon/report.hpp"

#include <sstream>

#include "json.hpp"

namespace redmon {

namespace {

using Json = nlohmann::json;

Json stats_json(const RssiStats& s) {
  return Json{{"count", s.count}, {"min", s.min}, {"q1", s.q1}, {"median", s.median}, {"q3", s.q3}, {"max", s.max}};
}

std::vector<std::pair<std::string, double>> stats_rows(const RssiStats& s) {
  return {{"count", static_cast<double>(s.count)}, {"min", s.min}, {"q1", s.q1}, {"median", s.median},
          {"q3", s.q3},                            {"max", s.max}};
}

// Same number rendering as the JSON writer, so both exports carry identical values.
std::string num(double v) { return Json(v).dump(); }

}  // namespace

bool is_ratio_metric(const std::string& name) {
  return name == metric::prr_redundant || name == metric::prr_primary_only || name == metric::detection_rate;
}

double IterationMetrics::at(const std::string& name) const {
  const auto it = values.find(name);
  if (it == values.end()) throw MetricError("metric '" + name + "' is undefined for seed " + std::to_string(seed));
  return it->second;
}

std::map<std::string, double> MetricsReport::summary() const {
  std::map<std::string, double> out;
  if (iterations.empty()) return out;
  for (const auto& [name, value] : iterations.front().values) {
    bool everywhere = true;
    double sum = 0.0;
    for (const auto& it : iterations) {
      const auto f = it.values.find(name);
      if (f == it.values.end()) {
        everywhere = false;
        break;
      }
      sum += f->second;
    }
    if (everywhere) out[name] = sum / static_cast<double>(iterations.size());
  }
  return out;
}

double MetricsReport::mean(const std::string& name) const {
  if (iterations.empty()) throw MetricError("report '" + scenario + "' has no iterations");
  double sum = 0.0;
  for (const auto& it : iterations) sum += it.at(name);
  return sum / static_cast<double>(iterations.size());
}

std::map<std::string, RssiStats> MetricsReport::rssi_summary() const {
  std::map<std::string, std::vector<double>> pooled;
  for (const auto& it : iterations)
    for (const auto& [gw, samples] : it.rssi) pooled[gw].insert(pooled[gw].end(), samples.begin(), samples.end());
  std::map<std::string, RssiStats> out;
  for (auto& [gw, samples] : pooled) out[gw] = summarize_rssi(std::move(samples));
  return out;
}

std::string to_json(const MetricsReport& report) {
  Json root;
  root["scenario"] = report.scenario;
  Json iters = Json::array();
  for (std::size_t i = 0; i < report.iterations.size(); ++i) {
    const auto& it = report.iterations[i];
    Json rssi = Json::object();
    for (const auto& [gw, samples] : it.rssi)
      rssi[gw] = Json{{"samples", samples}, {"stats", stats_json(summarize_rssi(samples))}};
    iters.push_back(Json{{"iteration", i},
                         {"seed", it.seed},
                         {"trace_digest", it.trace_digest},
                         {"metrics", it.values},
                         {"rssi", rssi}});
  }
  root["iterations"] = iters;
  Json rssi = Json::object();
  for (const auto& [gw, s] : report.rssi_summary()) rssi[gw] = stats_json(s);
  root["summary"] = Json{{"metrics", report.summary()}, {"rssi", rssi}};
  return root.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
  MetricsReport report;
  try {
    const Json root = Json::parse(text);
    report.scenario = root.at("scenario").get<std::string>();
    for (const auto& j : root.at("iterations")) {
      IterationMetrics it;
      it.seed = j.at("seed").get<std::uint64_t>();
      it.trace_digest = j.at("trace_digest").get<std::string>();
      it.values = j.at("metrics").get<std::map<std::string, double>>();
      for (const auto& [gw, r] : j.at("rssi").items()) it.rssi[gw] = r.at("samples").get<std::vector<double>>();
      report.iterations.push_back(std::move(it));
    }
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed metrics report: ") + e.what());
  }
  return report;
}

std::string to_csv(const MetricsReport& report) {
  std::ostringstream out;
  out << "scenario,iteration,metric,value\n";
  const auto cell = [&](const std::string& iter, const std::string& name, const std::string& v) {
    out << report.scenario << ',' << iter << ',' << name << ',' << v << '\n';
  };
  const auto row = [&](const std::string& iter, const std::string& name, double v) { cell(iter, name, num(v)); };
  for (std::size_t i = 0; i < report.iterations.size(); ++i) {
    const auto& it = report.iterations[i];
    const std::string idx = std::to_string(i);
    cell(idx, "seed", Json(it.seed).dump());
    for (const auto& [name, v] : it.values) row(idx, name, v);
    for (const auto& [gw, samples] : it.rssi) {
      for (const auto& [stat, v] : stats_rows(summarize_rssi(samples))) row(idx, "rssi." + gw + "." + stat, v);
      for (double s : samples) row(idx, "rssi." + gw + ".sample", s);
    }
  }
  for (const auto& [name, v] : report.summary()) row("mean", name, v);
  for (const auto& [gw, s] : report.rssi_summary())
    for (const auto& [stat, v] : stats_rows(s)) row("mean", "rssi." + gw + "." + stat, v);
  return out.str();
}

double compare_scenarios(const MetricsReport& a, const MetricsReport& b, const std::string& metric) {
  const double d = a.mean(metric) - b.mean(metric);
  return is_ratio_metric(metric) ? d * 100.0 : d;
}

}  // namespace redmon
