#include "mau/bench/journey.hpp"

#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace mau::bench {

namespace {

struct Interval {
  NodeId a, b;
  SimTime up, down;
};

std::vector<Interval> intervals(const contact::ContactTrace& trace) {
  constexpr SimTime kForever{Duration{std::numeric_limits<std::int64_t>::max()}};
  std::vector<Interval> out;
  std::map<std::pair<NodeId, NodeId>, SimTime> open;
  for (const auto& ev : trace.events) {
    const auto key = std::make_pair(ev.a, ev.b);
    if (ev.kind == contact::ContactKind::kUp) {
      open[key] = ev.time;
    } else if (auto it = open.find(key); it != open.end()) {
      out.push_back({ev.a, ev.b, it->second, ev.time});
      open.erase(it);
    }
  }
  for (const auto& [key, up] : open) out.push_back({key.first, key.second, up, kForever});
  return out;
}

}  // namespace

std::optional<SimTime> foremost_journey(const contact::ContactTrace& trace, const JourneyQuery& query, Duration ttl) {
  const auto n = static_cast<std::size_t>(trace.node_count);
  if (query.src < 0 || query.dst < 0 || static_cast<std::size_t>(query.src) >= n ||
      static_cast<std::size_t>(query.dst) >= n) {
    throw std::invalid_argument("journey endpoint outside the trace");
  }
  if (query.src == query.dst) throw std::invalid_argument("journey source equals destination");

  constexpr SimTime kUnreached = SimTime::max();
  std::vector<SimTime> arrival(n, kUnreached);
  arrival[static_cast<std::size_t>(query.src)] = query.depart;
  const auto links = intervals(trace);
  // Bellman-Ford style relaxation; each pass settles at least one more hop.
  for (std::size_t pass = 0; pass < n; ++pass) {
    bool changed = false;
    for (const auto& c : links) {
      for (int dir = 0; dir < 2; ++dir) {
        const auto u = static_cast<std::size_t>(dir == 0 ? c.a : c.b);
        const auto v = static_cast<std::size_t>(dir == 0 ? c.b : c.a);
        if (arrival[u] == kUnreached || arrival[u] >= c.down) continue;
        const SimTime t = std::max(arrival[u], c.up);
        if (t < arrival[v]) {
          arrival[v] = t;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  const SimTime at = arrival[static_cast<std::size_t>(query.dst)];
  if (at == kUnreached || at > query.depart + ttl) return std::nullopt;
  return at;
}

}  // namespace mau::bench
