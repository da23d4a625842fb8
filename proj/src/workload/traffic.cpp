#include "mau/workload/traffic.hpp"

#include <cmath>
#include <ostream>
#include <set>
#include <string>
#include <utility>

#include "mau/sim/rng.hpp"

namespace mau::workload {

std::string_view to_string(Arrival arrival) {
  return arrival == Arrival::kPoisson ? "poisson" : "uniform";
}

Arrival parse_arrival(std::string_view name) {
  if (name == "uniform") return Arrival::kUniformJitter;
  if (name == "poisson") return Arrival::kPoisson;
  throw ConfigError("unknown arrival process '" + std::string(name) + "'", "traffic.arrival");
}

TrafficPlan generate_plan(const TrafficConfig& config, int node_count, Duration duration, std::uint64_t run_seed) {
  if (node_count < 2) throw ConfigError("traffic needs at least two nodes", "traffic.pairs");
  if (config.pairs < 1) throw ConfigError("pair count must be positive", "traffic.pairs");
  const auto possible = static_cast<std::int64_t>(node_count) * (node_count - 1);
  if (config.pairs > possible) {
    throw ConfigError("more pairs than ordered node pairs (" + std::to_string(possible) + ")", "traffic.pairs");
  }
  if (config.size_min == 0 || config.size_min > config.size_max) {
    throw ConfigError("size range must satisfy 0 < min <= max", "traffic.size_min");
  }
  if (!(config.rate_per_day > 0.0)) throw ConfigError("rate must be positive", "traffic.rate");

  const std::uint64_t seed = config.seed.value_or(run_seed);
  TrafficPlan plan;

  RngStream pair_rng = derive_stream(seed, "traffic.pairs");
  std::set<std::pair<NodeId, NodeId>> taken;
  while (static_cast<int>(plan.pairs.size()) < config.pairs) {
    const auto src = static_cast<NodeId>(pair_rng.uniform_int(0, node_count - 1));
    auto dst = static_cast<NodeId>(pair_rng.uniform_int(0, node_count - 2));
    if (dst >= src) ++dst;
    if (taken.insert({src, dst}).second) plan.pairs.push_back({src, dst});
  }

  RngStream msg_rng = derive_stream(seed, "traffic.messages");
  const double interval = static_cast<double>(kDay.count()) / config.rate_per_day;
  const double end = static_cast<double>(duration.count());
  double t = 0.0;
  while (true) {
    t += config.arrival == Arrival::kPoisson ? msg_rng.exponential(interval) : interval * msg_rng.uniform(0.5, 1.5);
    if (t >= end) break;
    PlannedMessage m;
    m.created = at_ms(static_cast<std::int64_t>(std::floor(t)));
    m.pair = static_cast<int>(msg_rng.uniform_int(0, config.pairs - 1));
    m.size = static_cast<std::uint32_t>(msg_rng.uniform_int(config.size_min, config.size_max));
    plan.messages.push_back(m);
  }
  return plan;
}

std::vector<routing::MessageSpec> to_messages(const TrafficPlan& plan) {
  std::vector<routing::MessageSpec> out;
  out.reserve(plan.messages.size());
  for (std::size_t i = 0; i < plan.messages.size(); ++i) {
    const PlannedMessage& m = plan.messages[i];
    const TrafficPair& p = plan.pairs.at(static_cast<std::size_t>(m.pair));
    out.push_back({static_cast<MessageId>(i), p.src, p.dst, m.size, m.created});
  }
  return out;
}

void write_plan(std::ostream& out, const TrafficPlan& plan) {
  for (std::size_t i = 0; i < plan.pairs.size(); ++i) {
    out << "PAIR " << i << ' ' << plan.pairs[i].src << ' ' << plan.pairs[i].dst << '\n';
  }
  for (std::size_t i = 0; i < plan.messages.size(); ++i) {
    const PlannedMessage& m = plan.messages[i];
    const TrafficPair& p = plan.pairs.at(static_cast<std::size_t>(m.pair));
    out << "MSG " << i << ' ' << to_ms(m.created) << ' ' << p.src << ' ' << p.dst << ' ' << m.size << '\n';
  }
}

}  // namespace mau::workload
