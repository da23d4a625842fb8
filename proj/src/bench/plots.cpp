#include "mau/bench/plots.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mau::bench {

std::string_view to_string(PlotMetric metric) {
  switch (metric) {
    case PlotMetric::kDelivery: return "delivery";
    case PlotMetric::kCost: return "cost";
    case PlotMetric::kLatency: return "latency";
  }
  return "?";
}

namespace {

const workload::MetricSummary& pick(const workload::CellSummary& s, PlotMetric metric) {
  switch (metric) {
    case PlotMetric::kDelivery: return s.delivery;
    case PlotMetric::kCost: return s.cost;
    case PlotMetric::kLatency: return s.latency;
  }
  return s.delivery;
}

std::string_view ylabel(PlotMetric metric) {
  switch (metric) {
    case PlotMetric::kDelivery: return "delivery probability";
    case PlotMetric::kCost: return "transmissions per delivered message";
    case PlotMetric::kLatency: return "mean latency (s)";
  }
  return "";
}

std::string block_name(const std::string& protocol) {
  std::string out = "$";
  for (char c : protocol) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return out;
}

}  // namespace

void write_plot_script(std::ostream& out, std::span<const workload::CellSummary> summaries, PlotMetric metric) {
  std::vector<std::string> protocols;
  for (const auto& s : summaries) {
    if (std::find(protocols.begin(), protocols.end(), s.protocol) == protocols.end()) protocols.push_back(s.protocol);
  }
  out << "set terminal pngcairo size 900,600\n";
  out << "set output '" << to_string(metric) << ".png'\n";
  out << "set xlabel 'TTL (h)'\n";
  out << "set ylabel '" << ylabel(metric) << "'\n";
  out << "set logscale x\n";
  out << "set key outside right\n";
  out << "set grid\n";
  if (metric == PlotMetric::kDelivery) out << "set yrange [0:1]\n";
  for (const auto& p : protocols) {
    out << block_name(p) << " << EOD\n";
    for (const auto& s : summaries) {
      if (s.protocol != p) continue;
      const auto& m = pick(s, metric);
      if (!m.mean) continue;
      out << workload::format_number(to_seconds(s.ttl) / 3600.0, 4) << ' ' << workload::format_number(m.mean) << ' '
          << workload::format_number(m.half_width.value_or(0.0)) << '\n';
    }
    out << "EOD\n";
  }
  if (protocols.empty()) {
    out << "set xrange [0.1:1000]\n";
    out << "plot NaN notitle\n";
    return;
  }
  out << "plot ";
  for (std::size_t i = 0; i < protocols.size(); ++i) {
    if (i > 0) out << ", \\\n     ";
    out << block_name(protocols[i]) << " using 1:2:3 with yerrorlines title '" << protocols[i] << "'";
  }
  out << '\n';
}

void emit_plots(const std::filesystem::path& dir, std::span<const workload::CellSummary> summaries) {
  for (auto metric : {PlotMetric::kDelivery, PlotMetric::kCost, PlotMetric::kLatency}) {
    std::ofstream out(dir / (std::string(to_string(metric)) + ".gp"));
    if (!out) throw std::runtime_error("cannot write plot script in " + dir.string());
    write_plot_script(out, summaries, metric);
  }
}

}  // namespace mau::bench
