#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>

#include "mau/workload/metrics.hpp"

namespace mau::bench {

enum class PlotMetric { kDelivery, kCost, kLatency };

std::string_view to_string(PlotMetric metric);

/// A gnuplot script drawing `metric` against TTL in hours, one series per
/// protocol, error bars at the CI half-width. The data is inline.
void write_plot_script(std::ostream& out, std::span<const workload::CellSummary> summaries, PlotMetric metric);

/// Writes delivery.gp, cost.gp and latency.gp into `dir`.
void emit_plots(const std::filesystem::path& dir, std::span<const workload::CellSummary> summaries);

}  // namespace mau::bench
