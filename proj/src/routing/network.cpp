#include "mau/routing/network.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "mau/sim/engine.hpp"

namespace mau::routing {

namespace {

constexpr SimTime kNever{Duration{std::numeric_limits<std::int64_t>::max() / 4}};

std::int64_t link_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::int64_t>(a) << 32) | static_cast<std::int64_t>(b);
}

struct Transfer {
  MessageId id = -1;
  std::uint64_t token = 0;
  bool active = false;
};

struct Link {
  NodeId a = 0;
  NodeId b = 0;
  SimTime since{};
  Transfer dir[2];  // 0: a -> b, 1: b -> a
  int last_dir = 1;

  bool busy() const { return dir[0].active || dir[1].active; }
  NodeId sender(int d) const { return d == 0 ? a : b; }
  NodeId receiver(int d) const { return d == 0 ? b : a; }
};

struct NodeState {
  explicit NodeState(std::uint64_t capacity) : buffer(capacity) {}

  Buffer buffer;
  std::vector<NodeId> peers;
  std::vector<MessageId> sending;
  std::vector<MessageId> receiving;
};

void erase_value(std::vector<MessageId>& v, MessageId id) {
  auto it = std::find(v.begin(), v.end(), id);
  if (it != v.end()) v.erase(it);
}

bool has_value(const std::vector<MessageId>& v, MessageId id) {
  return std::find(v.begin(), v.end(), id) != v.end();
}

class Simulation {
 public:
  Simulation(const contact::ContactTrace& contacts, std::span<const MessageSpec> messages,
             const SimulationConfig& config, Protocol& protocol, std::ostream* log)
      : contacts_(contacts),
        messages_(messages),
        config_(config),
        protocol_(protocol),
        n_(static_cast<std::size_t>(contacts.node_count)),
        m_(messages.size()),
        seen_(n_ * m_, 0),
        copy_total_(m_, 0),
        replicas_(m_, 0) {
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& spec = messages_[i];
      if (spec.id != static_cast<MessageId>(i)) throw std::invalid_argument("message ids must equal their index");
      if (spec.src < 0 || spec.dst < 0 || static_cast<std::size_t>(spec.src) >= n_ ||
          static_cast<std::size_t>(spec.dst) >= n_ || spec.src == spec.dst) {
        throw std::invalid_argument("message " + std::to_string(i) + " has invalid endpoints");
      }
      if (spec.size == 0) throw std::invalid_argument("message " + std::to_string(i) + " has zero size");
    }
    nodes_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) nodes_.emplace_back(config_.routing.buffer_capacity);
    if (config_.routing.suppress_delivered) known_delivered_.assign(n_ * m_, 0);
    result_.messages.resize(m_);
    result_.contacts.node_count = contacts.node_count;
    protocol_.reset(n_);
    engine_.set_event_log(log);
    engine_.set_handler([this](const Event& ev) { dispatch(ev); });
  }

  RoutingResult run() {
    const SimTime end = config_.end;
    for (const auto& ev : contacts_.events) {
      if (ev.time > end) break;
      engine_.schedule(ev.time, ev.kind == contact::ContactKind::kUp ? EventKind::kContactUp : EventKind::kContactDown,
                       ev.a, ev.b);
    }
    for (const auto& spec : messages_) {
      if (spec.created <= end) engine_.schedule(spec.created, EventKind::kMessageCreation, spec.id);
    }
    if (config_.routing.sweep_period > Duration{0}) {
      for (SimTime t = SimTime{} + config_.routing.sweep_period; t <= end; t += config_.routing.sweep_period) {
        engine_.schedule(t, EventKind::kTtlExpiry);
      }
    }
    if (auto window = protocol_.window(); window && *window > Duration{0}) {
      for (SimTime t = SimTime{} + *window; t <= end; t += *window) engine_.schedule(t, EventKind::kCentralityWindow);
    }
    engine_.run_until(end);
    return std::move(result_);
  }

 private:
  std::size_t seen_slot(NodeId node, MessageId id) const {
    return static_cast<std::size_t>(node) * m_ + static_cast<std::size_t>(id);
  }
  bool seen(NodeId node, MessageId id) const { return seen_[seen_slot(node, id)] != 0; }
  const MessageSpec& spec(MessageId id) const { return messages_[static_cast<std::size_t>(id)]; }
  NodeState& node(NodeId id) { return nodes_[static_cast<std::size_t>(id)]; }

  void dispatch(const Event& ev) {
    const SimTime now = ev.fire_at;
    switch (ev.kind) {
      case EventKind::kContactUp: contact_up(static_cast<NodeId>(ev.a), static_cast<NodeId>(ev.b), now); break;
      case EventKind::kContactDown: contact_down(static_cast<NodeId>(ev.a), static_cast<NodeId>(ev.b), now); break;
      case EventKind::kMessageCreation: create(static_cast<MessageId>(ev.a), now); break;
      case EventKind::kTransferComplete: complete(ev.a, static_cast<int>(ev.b), static_cast<std::uint64_t>(ev.c), now); break;
      case EventKind::kTtlExpiry: sweep(now); break;
      case EventKind::kCentralityWindow: window(now); break;
      case EventKind::kMobilityUpdate: break;
    }
  }

  // --- bookkeeping ---------------------------------------------------------

  void track_added(const Replica& r) {
    const auto i = static_cast<std::size_t>(r.id);
    copy_total_[i] += r.copies;
    replicas_[i] += 1;
    check_copies(r.id);
  }

  void track_removed(const Replica& r) {
    const auto i = static_cast<std::size_t>(r.id);
    copy_total_[i] -= r.copies;
    replicas_[i] -= 1;
  }

  void check_copies(MessageId id) {
    const auto i = static_cast<std::size_t>(id);
    RunAudit& audit = result_.audit;
    audit.max_copy_total = std::max(audit.max_copy_total, copy_total_[i]);
    audit.max_replicas = std::max(audit.max_replicas, replicas_[i]);
    if (auto bound = protocol_.copy_bound()) {
      if (copy_total_[i] > *bound || replicas_[i] > *bound) ++audit.copy_violations;
    }
  }

  void check_buffer(const NodeState& st) {
    RunAudit& audit = result_.audit;
    audit.max_buffer_used = std::max(audit.max_buffer_used, st.buffer.used());
    if (st.buffer.used() > st.buffer.capacity()) ++audit.buffer_overflows;
  }

  void removed(const std::vector<Replica>& gone, SimTime now, bool evicted) {
    for (const Replica& r : gone) {
      track_removed(r);
      if (evicted && r.alive(now)) {
        ++result_.audit.drops;
      } else {
        ++result_.audit.expirations;
      }
    }
  }

  void expire(NodeId id, SimTime now) { removed(node(id).buffer.expire(now), now, false); }

  /// Returns false when the buffer rejected the replica.
  bool store(NodeId id, const Replica& replica, SimTime now) {
    if (replica.id < 0 || static_cast<std::size_t>(replica.id) >= m_) ++result_.audit.phantom_messages;
    NodeState& st = node(id);
    InsertResult res = st.buffer.insert(replica, now);
    removed(res.dropped, now, true);
    if (res.accepted) track_added(replica);
    check_buffer(st);
    return res.accepted;
  }

  void drop_replica(NodeId id, MessageId msg) {
    NodeState& st = node(id);
    if (const Replica* r = st.buffer.find(msg)) {
      track_removed(*r);
      st.buffer.remove(msg);
    }
  }

  // --- events --------------------------------------------------------------

  void create(MessageId id, SimTime now) {
    const MessageSpec& s = spec(id);
    Replica r;
    r.id = id;
    r.size = s.size;
    r.hops = 0;
    r.copies = protocol_.initial_copies();
    r.expires_at = config_.routing.ttl_mode == TtlMode::kTime ? s.created + config_.ttl : kNever;
    seen_[seen_slot(s.src, id)] = 1;
    expire(s.src, now);
    store(s.src, r, now);
    kick(s.src, now);
  }

  void contact_up(NodeId a, NodeId b, SimTime now) {
    result_.contacts.events.push_back({now, a, b, contact::ContactKind::kUp});
    Link link;
    link.a = a;
    link.b = b;
    link.since = now;
    links_.insert_or_assign(link_key(a, b), link);
    node(a).peers.push_back(b);
    node(b).peers.push_back(a);
    protocol_.on_contact_up(a, b, now);
    if (!known_delivered_.empty()) share_delivered(a, b);
    kick(a, now);
    kick(b, now);
  }

  void contact_down(NodeId a, NodeId b, SimTime now) {
    result_.contacts.events.push_back({now, a, b, contact::ContactKind::kDown});
    auto it = links_.find(link_key(a, b));
    if (it == links_.end()) throw std::logic_error("contact down for a pair that is not up");
    const Link link = it->second;
    links_.erase(it);
    for (int d = 0; d < 2; ++d) {
      if (!link.dir[d].active) continue;
      ++result_.audit.transfers_aborted;
      erase_value(node(link.sender(d)).sending, link.dir[d].id);
      erase_value(node(link.receiver(d)).receiving, link.dir[d].id);
    }
    auto& pa = node(a).peers;
    pa.erase(std::find(pa.begin(), pa.end(), b));
    auto& pb = node(b).peers;
    pb.erase(std::find(pb.begin(), pb.end(), a));
    protocol_.on_contact_down(a, b, now, now - link.since);
    kick(a, now);
    kick(b, now);
  }

  void sweep(SimTime now) {
    for (std::size_t i = 0; i < n_; ++i) expire(static_cast<NodeId>(i), now);
  }

  void window(SimTime now) {
    std::vector<std::vector<NodeId>> ongoing(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      ongoing[i] = nodes_[i].peers;
      std::sort(ongoing[i].begin(), ongoing[i].end());
    }
    protocol_.on_window(now, ongoing);
    for (std::size_t i = 0; i < n_; ++i) kick(static_cast<NodeId>(i), now);
  }

  // --- transfers -----------------------------------------------------------

  void kick(NodeId id, SimTime now) {
    // Copy: starting a transfer never changes peer lists, but keep iteration safe.
    const std::vector<NodeId> peers = node(id).peers;
    for (NodeId p : peers) {
      auto it = links_.find(link_key(id, p));
      if (it != links_.end()) try_start(it->second, now);
    }
  }

  void try_start(Link& link, SimTime now) {
    const bool half = config_.link.duplex == contact::Duplex::kHalf;
    if (half && link.busy()) return;
    const int first = 1 - link.last_dir;
    for (int k = 0; k < 2; ++k) {
      const int d = (first + k) % 2;
      if (link.dir[d].active) continue;
      if (start(link, d, now) && half) return;
    }
  }

  bool eligible(NodeId from, NodeId to, const Replica& r, SimTime now) {
    if (config_.routing.refusal == Refusal::kSeen) {
      if (seen(to, r.id)) return false;
    } else if (node(to).buffer.contains(r.id) ||
               (spec(r.id).dst == to && result_.messages[static_cast<std::size_t>(r.id)].delivered_at)) {
      return false;
    }
    if (has_value(node(from).sending, r.id) || has_value(node(to).receiving, r.id)) return false;
    if (config_.routing.ttl_mode == TtlMode::kHops && r.hops >= config_.routing.hop_limit) return false;
    const Duration d = contact::transfer_duration(r.size, config_.link);
    return now + d <= r.expires_at;
  }

  bool start(Link& link, int d, SimTime now) {
    const NodeId from = link.sender(d);
    const NodeId to = link.receiver(d);
    expire(from, now);
    const Replica* pick = nullptr;
    for (const Replica& r : node(from).buffer) {
      if (spec(r.id).dst == to && eligible(from, to, r, now)) {
        pick = &r;
        break;
      }
    }
    if (pick == nullptr) {
      for (const Replica& r : node(from).buffer) {
        const NodeId dst = spec(r.id).dst;
        if (dst != to && eligible(from, to, r, now) && protocol_.should_forward(from, to, dst, r, now)) {
          pick = &r;
          break;
        }
      }
    }
    if (pick == nullptr) return false;

    if (!pick->alive(now)) ++result_.audit.expired_transfers;
    const SimTime done = now + contact::transfer_duration(pick->size, config_.link);
    Transfer& t = link.dir[d];
    t.id = pick->id;
    t.token = ++next_token_;
    t.active = true;
    link.last_dir = d;
    node(from).sending.push_back(pick->id);
    node(to).receiving.push_back(pick->id);
    ++result_.audit.transfers_started;
    engine_.schedule(done, EventKind::kTransferComplete, link_key(link.a, link.b), d,
                     static_cast<std::int64_t>(t.token));
    return true;
  }

  void complete(std::int64_t key, int d, std::uint64_t token, SimTime now) {
    auto it = links_.find(key);
    if (it == links_.end() || !it->second.dir[d].active || it->second.dir[d].token != token) return;  // aborted
    Link& link = it->second;
    const NodeId from = link.sender(d);
    const NodeId to = link.receiver(d);
    const MessageId id = link.dir[d].id;
    link.dir[d].active = false;
    erase_value(node(from).sending, id);
    erase_value(node(to).receiving, id);

    Replica* sender = node(from).buffer.find(id);
    if (sender == nullptr) {
      ++result_.audit.transfers_voided;
    } else {
      deliver_or_relay(from, to, *sender, now);
    }
    kick(from, now);
    kick(to, now);
  }

  void deliver_or_relay(NodeId from, NodeId to, Replica& sender, SimTime now) {
    const MessageId id = sender.id;
    MessageOutcome& outcome = result_.messages[static_cast<std::size_t>(id)];
    ++outcome.transmissions;
    if (!sender.alive(now)) ++result_.audit.expired_transfers;
    seen_[seen_slot(to, id)] = 1;

    if (spec(id).dst == to) {
      if (!outcome.delivered_at) {
        outcome.delivered_at = now;
        outcome.hops = sender.hops + 1;
      }
      if (!known_delivered_.empty()) {
        known_delivered_[seen_slot(from, id)] = 1;
        known_delivered_[seen_slot(to, id)] = 1;
      }
      drop_replica(from, id);
      return;
    }

    Replica copy = sender;
    const int before = sender.copies;
    copy.copies = protocol_.hand_over(sender);
    const auto i = static_cast<std::size_t>(id);
    copy_total_[i] += sender.copies - before;
    copy.hops = sender.hops + 1;
    expire(to, now);
    store(to, copy, now);
  }

  void share_delivered(NodeId a, NodeId b) {
    for (std::size_t i = 0; i < m_; ++i) {
      const auto id = static_cast<MessageId>(i);
      if (known_delivered_[seen_slot(a, id)] || known_delivered_[seen_slot(b, id)]) {
        known_delivered_[seen_slot(a, id)] = known_delivered_[seen_slot(b, id)] = 1;
        drop_replica(a, id);
        drop_replica(b, id);
      }
    }
  }

  const contact::ContactTrace& contacts_;
  std::span<const MessageSpec> messages_;
  const SimulationConfig& config_;
  Protocol& protocol_;
  std::size_t n_;
  std::size_t m_;
  std::vector<NodeState> nodes_;
  std::unordered_map<std::int64_t, Link> links_;
  std::vector<std::uint8_t> seen_;
  std::vector<std::uint8_t> known_delivered_;
  std::vector<int> copy_total_;
  std::vector<int> replicas_;
  std::uint64_t next_token_ = 0;
  Engine engine_;
  RoutingResult result_;
};

}  // namespace

RoutingResult simulate(const contact::ContactTrace& contacts, std::span<const MessageSpec> messages,
                       const SimulationConfig& config, Protocol& protocol, std::ostream* event_log) {
  Simulation sim(contacts, messages, config, protocol, event_log);
  return sim.run();
}

}  // namespace mau::routing
