#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mau/bench/scenario.hpp"
#include "mau/contact/generator.hpp"
#include "mau/routing/network.hpp"
#include "mau/workload/metrics.hpp"
#include "mau/workload/traffic.hpp"

namespace mau::bench {

/// Everything shared by the cells of one seed index.
struct SeedInputs {
  std::uint64_t seed = 0;
  contact::ContactTrace trace;
  workload::TrafficPlan plan;
  std::vector<routing::MessageSpec> messages;
};

/// Generates (or replays) the contact trace and draws the traffic plan.
SeedInputs prepare_seed(const Scenario& scenario, std::uint64_t seed,
                        const contact::GenerationOptions& options = {});

struct CellResult {
  routing::ProtocolKind protocol = routing::ProtocolKind::kEpidemic;
  Duration ttl{};
  std::uint64_t seed = 0;
  std::optional<workload::RunReport> report;
  routing::RunAudit audit;
  std::string error;  // set when the cell failed
};

CellResult run_cell(const Scenario& scenario, const SeedInputs& inputs, routing::ProtocolKind protocol,
                    Duration ttl, std::ostream* event_log = nullptr);

struct MatrixOptions {
  // Empty lists fall back to the scenario's.
  std::vector<routing::ProtocolKind> protocols;
  std::vector<Duration> ttls;
  std::vector<std::uint64_t> seeds;
  int jobs = 1;
  contact::ScanKernel kernel = contact::ScanKernel::kPruned;
  std::ostream* progress = nullptr;
  std::filesystem::path event_log_dir;  // one <protocol>_<ttl_s>_<seed>.log per cell when set
};

struct MatrixResult {
  std::vector<CellResult> cells;  // protocol-major, then TTL, then seed
  std::vector<workload::RunReport> reports;
  std::vector<workload::CellSummary> summaries;
  std::size_t failures = 0;
};

MatrixResult run_matrix(const Scenario& scenario, const MatrixOptions& options = {});

/// `# key=value` lines embedded in every report.
std::vector<std::string> report_comments(const Scenario& scenario);

/// Writes report.csv, summary.csv, the plot scripts and, when cells failed,
/// failures.txt into `dir`.
void write_outputs(const std::filesystem::path& dir, const Scenario& scenario, const MatrixResult& result);

}  // namespace mau::bench
