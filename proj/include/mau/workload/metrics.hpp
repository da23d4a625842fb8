#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mau/routing/network.hpp"
#include "mau/sim/time.hpp"

namespace mau::workload {

/// Whether the delivering hop counts as a transmission in the cost metric.
enum class CostMode { kInclude, kExclude };

std::string_view to_string(CostMode mode);
CostMode parse_cost_mode(std::string_view name);

enum class Classification { kCounted, kWarmUpExcluded };

/// Messages created before the end of the warm-up still run but are not measured.
inline Classification classify_message(SimTime created, SimTime warm_up_end) {
  return created < warm_up_end ? Classification::kWarmUpExcluded : Classification::kCounted;
}

struct RunReport {
  std::string protocol;
  Duration ttl{};
  std::uint64_t seed = 0;
  std::uint64_t created = 0;
  std::uint64_t delivered = 0;
  std::uint64_t transmissions = 0;
  std::vector<Duration> latencies;  // one per delivered message, in id order
};

RunReport make_report(std::string protocol, Duration ttl, std::uint64_t seed,
                      std::span<const routing::MessageSpec> messages, const routing::RoutingResult& result,
                      SimTime warm_up_end);

std::optional<double> delivery_probability(const RunReport& report);
std::optional<double> cost(const RunReport& report, CostMode mode = CostMode::kInclude);
std::optional<double> latency_mean_seconds(const RunReport& report);

struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;
};

/// Student t interval. Throws std::invalid_argument for fewer than two samples.
Estimate confidence_interval(std::span<const double> samples, double level = 0.95);

struct MetricSummary {
  std::size_t samples = 0;   // runs where the metric was defined
  std::optional<double> mean;
  std::optional<double> half_width;  // needs two samples
};

struct CellSummary {
  std::string protocol;
  Duration ttl{};
  std::size_t runs = 0;
  MetricSummary delivery;
  MetricSummary cost;
  MetricSummary latency;  // seconds
};

/// One summary per (protocol, ttl), in order of first appearance.
std::vector<CellSummary> summarize(std::span<const RunReport> reports, CostMode mode = CostMode::kInclude);

/// `# ...` lines go first, then the CSV header and one row per report.
void write_report_csv(std::ostream& out, std::span<const RunReport> reports, CostMode mode,
                      std::span<const std::string> comments = {});
void write_summary_csv(std::ostream& out, std::span<const CellSummary> summaries,
                       std::span<const std::string> comments = {});

/// Absent values print as NA.
std::string format_number(std::optional<double> value, int decimals = 6);
std::string format_ttl_seconds(Duration ttl);

}  // namespace mau::workload
