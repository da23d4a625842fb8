#include "mau/workload/metrics.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "mau/types.hpp"

namespace mau::workload {

std::string_view to_string(CostMode mode) { return mode == CostMode::kExclude ? "exclude" : "include"; }

CostMode parse_cost_mode(std::string_view name) {
  if (name == "include") return CostMode::kInclude;
  if (name == "exclude") return CostMode::kExclude;
  throw ConfigError("unknown cost mode '" + std::string(name) + "'", "metrics.cost_mode");
}

RunReport make_report(std::string protocol, Duration ttl, std::uint64_t seed,
                      std::span<const routing::MessageSpec> messages, const routing::RoutingResult& result,
                      SimTime warm_up_end) {
  if (messages.size() != result.messages.size()) throw std::invalid_argument("result does not match message list");
  RunReport r;
  r.protocol = std::move(protocol);
  r.ttl = ttl;
  r.seed = seed;
  for (std::size_t i = 0; i < messages.size(); ++i) {
    if (classify_message(messages[i].created, warm_up_end) != Classification::kCounted) continue;
    const routing::MessageOutcome& o = result.messages[i];
    ++r.created;
    r.transmissions += o.transmissions;
    if (o.delivered_at) {
      ++r.delivered;
      r.latencies.push_back(*o.delivered_at - messages[i].created);
    }
  }
  return r;
}

std::optional<double> delivery_probability(const RunReport& report) {
  if (report.created == 0) return std::nullopt;
  return static_cast<double>(report.delivered) / static_cast<double>(report.created);
}

std::optional<double> cost(const RunReport& report, CostMode mode) {
  if (report.delivered == 0) return std::nullopt;
  double tx = static_cast<double>(report.transmissions);
  if (mode == CostMode::kExclude) tx -= static_cast<double>(report.delivered);
  return tx / static_cast<double>(report.delivered);
}

std::optional<double> latency_mean_seconds(const RunReport& report) {
  if (report.latencies.empty()) return std::nullopt;
  std::int64_t total = 0;
  for (Duration d : report.latencies) total += d.count();
  return static_cast<double>(total) / 1000.0 / static_cast<double>(report.latencies.size());
}

Estimate confidence_interval(std::span<const double> samples, double level) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("confidence interval needs at least two samples");
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("confidence level must be in (0, 1)");
  double sum = 0.0;
  for (double s : samples) sum += s;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  boost::math::students_t dist(static_cast<double>(n - 1));
  const double t = boost::math::quantile(dist, 0.5 + level / 2.0);
  return {mean, t * sd / std::sqrt(static_cast<double>(n))};
}

namespace {

MetricSummary summarize_metric(const std::vector<double>& values) {
  MetricSummary m;
  m.samples = values.size();
  if (values.empty()) return m;
  if (values.size() == 1) {
    m.mean = values.front();
    return m;
  }
  Estimate e = confidence_interval(values);
  m.mean = e.mean;
  m.half_width = e.half_width;
  return m;
}

}  // namespace

std::vector<CellSummary> summarize(std::span<const RunReport> reports, CostMode mode) {
  struct Acc {
    std::size_t runs = 0;
    std::vector<double> delivery, cost, latency;
  };
  std::vector<std::pair<std::string, Duration>> order;
  std::map<std::pair<std::string, Duration>, Acc> cells;
  for (const RunReport& r : reports) {
    auto key = std::make_pair(r.protocol, r.ttl);
    auto [it, fresh] = cells.try_emplace(key);
    if (fresh) order.push_back(key);
    Acc& acc = it->second;
    ++acc.runs;
    if (auto v = delivery_probability(r)) acc.delivery.push_back(*v);
    if (auto v = cost(r, mode)) acc.cost.push_back(*v);
    if (auto v = latency_mean_seconds(r)) acc.latency.push_back(*v);
  }
  std::vector<CellSummary> out;
  for (const auto& key : order) {
    const Acc& acc = cells.at(key);
    CellSummary s;
    s.protocol = key.first;
    s.ttl = key.second;
    s.runs = acc.runs;
    s.delivery = summarize_metric(acc.delivery);
    s.cost = summarize_metric(acc.cost);
    s.latency = summarize_metric(acc.latency);
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_number(std::optional<double> value, int decimals) {
  if (!value) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, *value);
  return buf;
}

std::string format_ttl_seconds(Duration ttl) {
  const auto ms = ttl.count();
  if (ms % 1000 == 0) return std::to_string(ms / 1000);
  return format_number(static_cast<double>(ms) / 1000.0, 3);
}

void write_report_csv(std::ostream& out, std::span<const RunReport> reports, CostMode mode,
                      std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "protocol,ttl_s,seed,created,delivered,delivery_prob,transmissions,cost,latency_mean_s\n";
  for (const RunReport& r : reports) {
    out << r.protocol << ',' << format_ttl_seconds(r.ttl) << ',' << r.seed << ',' << r.created << ','
        << r.delivered << ',' << format_number(delivery_probability(r)) << ',' << r.transmissions << ','
        << format_number(cost(r, mode)) << ',' << format_number(latency_mean_seconds(r), 3) << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const CellSummary> summaries,
                       std::span<const std::string> comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "protocol,ttl_s,runs,delivery_prob_mean,delivery_prob_ci_halfwidth,cost_mean,cost_ci_halfwidth,"
         "latency_mean_s_mean,latency_mean_s_ci_halfwidth\n";
  for (const CellSummary& s : summaries) {
    out << s.protocol << ',' << format_ttl_seconds(s.ttl) << ',' << s.runs << ','
        << format_number(s.delivery.mean) << ',' << format_number(s.delivery.half_width) << ','
        << format_number(s.cost.mean) << ',' << format_number(s.cost.half_width) << ','
        << format_number(s.latency.mean, 3) << ',' << format_number(s.latency.half_width, 3) << '\n';
  }
}

}  // namespace mau::workload
