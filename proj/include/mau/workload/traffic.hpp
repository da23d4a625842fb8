#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "mau/routing/network.hpp"
#include "mau/sim/time.hpp"
#include "mau/types.hpp"

namespace mau::workload {

enum class Arrival { kUniformJitter, kPoisson };

std::string_view to_string(Arrival arrival);
Arrival parse_arrival(std::string_view name);

struct TrafficConfig {
  double rate_per_day = 500.0;
  std::uint32_t size_min = 1000;
  std::uint32_t size_max = 100000;
  int pairs = 50;
  std::optional<std::uint64_t> seed = 1;  // nullopt: follow the run seed
  Arrival arrival = Arrival::kUniformJitter;
};

struct TrafficPair {
  NodeId src = 0;
  NodeId dst = 0;
};

struct PlannedMessage {
  int pair = 0;
  SimTime created{};
  std::uint32_t size = 0;
};

/// Who sends what, when. Carries no TTL: the same plan serves every TTL cell.
struct TrafficPlan {
  std::vector<TrafficPair> pairs;
  std::vector<PlannedMessage> messages;
};

/// Draws `config.pairs` distinct ordered pairs over `node_count` nodes, then
/// creation times in [0, duration) and sizes in [size_min, size_max].
TrafficPlan generate_plan(const TrafficConfig& config, int node_count, Duration duration, std::uint64_t run_seed);

std::vector<routing::MessageSpec> to_messages(const TrafficPlan& plan);

/// `PAIR index src dst` lines, then `MSG id time_ms src dst size` lines.
void write_plan(std::ostream& out, const TrafficPlan& plan);

}  // namespace mau::workload
