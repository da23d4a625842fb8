#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mau/contact/contact.hpp"
#include "mau/mobility/movement.hpp"
#include "mau/routing/config.hpp"
#include "mau/workload/metrics.hpp"
#include "mau/workload/traffic.hpp"

namespace mau::bench {

/// A fully resolved and validated scenario.
struct Scenario {
  std::string name;
  Duration duration{};
  Duration warm_up{};
  std::vector<std::uint64_t> seeds;
  std::vector<Duration> ttls;
  std::vector<routing::ProtocolKind> protocols;

  mobility::MobilityConfig mobility;
  contact::LinkConfig link;
  routing::RoutingConfig routing;
  workload::TrafficConfig traffic;
  workload::CostMode cost_mode = workload::CostMode::kInclude;
  std::string drop_policy = "fifo";
  std::string contact_trace;  // replayed instead of mobility when set
  std::optional<int> declared_nodes;
  int replay_nodes = 0;  // node count of contact_trace, filled by validate()

  std::vector<std::string> warnings;

  int node_count() const;
  SimTime warm_up_end() const { return SimTime{} + warm_up; }
  SimTime end() const { return SimTime{} + duration; }
};

/// Names of the bundled scenarios.
std::vector<std::string> preset_names();
/// Text of a bundled scenario, or nullopt.
std::optional<std::string_view> preset_text(std::string_view name);

/// Loads a scenario file, or a bundled preset when `source` names one and no
/// such file exists. Keys the file leaves out come from mau-default; the
/// default groups apply only if no file in the include chain declares groups.
/// Throws ConfigError (with the key path) or ParseError.
Scenario load_scenario(const std::string& source);
Scenario parse_scenario(std::string_view text, const std::filesystem::path& base_dir = {});

/// Re-runs the semantic checks and rebuilds the warning list, e.g. after
/// command-line overrides.
void validate(Scenario& scenario);

/// Canonical `key = value` lines: settings sorted by key, then groups in
/// declaration order. The output loads back to the same scenario.
void write_canonical(std::ostream& out, const Scenario& scenario);
/// FNV-1a of the canonical form.
std::uint64_t scenario_hash(const Scenario& scenario);
std::string hash_hex(std::uint64_t hash);

/// Parsers shared with the command line.
std::vector<std::uint64_t> parse_seed_list(std::string_view text, const std::string& key = "scenario.seeds");
std::vector<Duration> parse_ttl_list(std::string_view text, const std::string& key = "scenario.ttls");
std::vector<routing::ProtocolKind> parse_protocol_list(std::string_view text, const std::string& key = "protocol");

}  // namespace mau::bench
