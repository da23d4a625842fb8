#pragma once

// Hand-built traces and brute-force oracles shared by the unit and acceptance tests.

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "mau/contact/contact.hpp"
#include "mau/routing/network.hpp"
#include "mau/sim/rng.hpp"

namespace fixtures {

using namespace mau;

/// Contact (a, b) up during [up_ms, down_ms); down_ms < 0 leaves it open.
struct Span {
  NodeId a, b;
  std::int64_t up_ms, down_ms;
};

inline contact::ContactTrace make_trace(int nodes, const std::vector<Span>& spans) {
  std::vector<contact::ContactEvent> ev;
  for (const auto& s : spans) {
    const NodeId a = std::min(s.a, s.b), b = std::max(s.a, s.b);
    ev.push_back({at_ms(s.up_ms), a, b, contact::ContactKind::kUp});
    if (s.down_ms >= 0) ev.push_back({at_ms(s.down_ms), a, b, contact::ContactKind::kDown});
  }
  // Downs before ups at equal times keep back-to-back spans of one pair valid.
  std::stable_sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
    if (x.time != y.time) return x.time < y.time;
    return x.kind == contact::ContactKind::kDown && y.kind == contact::ContactKind::kUp;
  });
  return {nodes, ev};
}

inline routing::MessageSpec message(MessageId id, NodeId src, NodeId dst, std::int64_t created_ms,
                                    std::uint32_t size = 1) {
  return {id, src, dst, size, at_ms(created_ms)};
}

inline routing::SimulationConfig unlimited(Duration ttl, std::int64_t end_ms) {
  routing::SimulationConfig c;
  c.routing.buffer_capacity = routing::kUnlimitedBuffer;
  c.ttl = ttl;
  c.end = at_ms(end_ms);
  return c;
}

/// Random trace: `contacts` non-overlapping spans per pair, whole-second
/// times, each at least one second long.
inline std::vector<Span> random_spans(RngStream& rng, int nodes, int contacts, std::int64_t horizon_s) {
  std::map<std::pair<NodeId, NodeId>, std::vector<std::pair<std::int64_t, std::int64_t>>> used;
  std::vector<Span> out;
  while (static_cast<int>(out.size()) < contacts) {
    const auto a = static_cast<NodeId>(rng.uniform_int(0, nodes - 1));
    auto b = static_cast<NodeId>(rng.uniform_int(0, nodes - 2));
    if (b >= a) ++b;
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    const auto up = rng.uniform_int(0, horizon_s - 2);
    const auto down = rng.uniform_int(up + 1, std::min(horizon_s, up + 60));
    bool clash = false;
    for (auto [u, d] : used[key]) clash = clash || !(down < u || up > d);  // keep a gap between spans
    if (clash) continue;
    used[key].push_back({up, down});
    out.push_back({key.first, key.second, up * 1000, down * 1000});
  }
  return out;
}

/// Earliest arrival by enumerating every node-simple time-respecting path
/// (zero transfer time, contact usable during [up, down)).
inline std::optional<SimTime> brute_force_journey(int nodes, const std::vector<Span>& spans, NodeId src,
                                                  NodeId dst, SimTime depart, Duration ttl) {
  constexpr std::int64_t kOpen = std::numeric_limits<std::int64_t>::max();
  std::optional<SimTime> best;
  std::vector<char> visited(static_cast<std::size_t>(nodes), 0);
  std::function<void(NodeId, SimTime)> dfs = [&](NodeId u, SimTime t) {
    if (u == dst) {
      if (!best || t < *best) best = t;
      return;
    }
    visited[static_cast<std::size_t>(u)] = 1;
    for (const auto& s : spans) {
      NodeId v = -1;
      if (s.a == u) v = s.b;
      if (s.b == u) v = s.a;
      if (v < 0 || visited[static_cast<std::size_t>(v)]) continue;
      const SimTime down = at_ms(s.down_ms < 0 ? kOpen : s.down_ms);
      const SimTime go = std::max(t, at_ms(s.up_ms));
      if (go < down) dfs(v, go);
    }
    visited[static_cast<std::size_t>(u)] = 0;
  };
  dfs(src, depart);
  if (best && *best > depart + ttl) return std::nullopt;
  return best;
}

/// Epidemic: m0 goes A -> B -> D (delivered, 2 transfers) and also A -> C (dead
/// end); m1 from D to A reaches B and C but never A. 5 transfers, 1 of 2 delivered.
struct Fixture {
  contact::ContactTrace trace;
  std::vector<routing::MessageSpec> messages;
  routing::SimulationConfig config;
};

inline Fixture cost_fixture() {
  enum : NodeId { A, B, C, D };
  Fixture f;
  f.trace = make_trace(4, {{A, B, 10'000, 20'000}, {A, C, 30'000, 35'000}, {B, D, 40'000, 45'000},
                           {C, D, 50'000, 55'000}});
  f.messages = {message(0, A, D, 0), message(1, D, A, 0)};
  f.config = unlimited(kHour, 100'000);
  return f;
}

/// Three messages from A delivered directly 10 s, 20 s and 30 s after creation
/// (the contact comes up 1 ms early to cover the 1-byte transfer).
inline Fixture latency_fixture() {
  enum : NodeId { A, B, C, D };
  Fixture f;
  f.trace = make_trace(4, {{A, B, 9'999, 12'000}, {A, C, 19'999, 22'000}, {A, D, 29'999, 32'000}});
  f.messages = {message(0, A, B, 0), message(1, A, C, 0), message(2, A, D, 0)};
  f.config = unlimited(kHour, 100'000);
  return f;
}

}  // namespace fixtures
