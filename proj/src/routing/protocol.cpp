#include "mau/routing/protocol.hpp"

#include <stdexcept>
#include <string>

#include "mau/types.hpp"

namespace mau::routing {

std::string_view to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::kEpidemic: return "epidemic";
    case ProtocolKind::kProphet: return "prophet";
    case ProtocolKind::kSprayAndWait: return "snw";
    case ProtocolKind::kBubbleRap: return "bubble";
  }
  return "unknown";
}

ProtocolKind parse_protocol(std::string_view text) {
  for (auto k : {ProtocolKind::kEpidemic, ProtocolKind::kProphet, ProtocolKind::kSprayAndWait,
                 ProtocolKind::kBubbleRap}) {
    if (text == to_string(k)) return k;
  }
  throw ConfigError("unknown protocol '" + std::string(text) + "' (expected epidemic|prophet|snw|bubble)",
                    "protocol");
}

std::vector<MessageId> epidemic_exchange(const Buffer& self, const std::unordered_set<MessageId>& peer_summary) {
  std::vector<MessageId> offer;
  for (const Replica& r : self) {
    if (!peer_summary.contains(r.id)) offer.push_back(r.id);
  }
  return offer;
}

SprayShare snw_split(int copies_left) {
  if (copies_left <= 1) return {copies_left, 0};
  const int give = copies_left / 2;
  return {copies_left - give, give};
}

void ProphetProtocol::reset(std::size_t node_count) {
  tables_.assign(node_count, ProphetTable(node_count, params_));
}

void ProphetProtocol::on_contact_up(NodeId a, NodeId b, SimTime now) {
  prophet_encounter(tables_[static_cast<std::size_t>(a)], a, tables_[static_cast<std::size_t>(b)], b, now);
}

bool ProphetProtocol::should_forward(NodeId from, NodeId to, NodeId dst, const Replica&, SimTime now) {
  ProphetTable& self = tables_[static_cast<std::size_t>(from)];
  ProphetTable& peer = tables_[static_cast<std::size_t>(to)];
  self.age(now);
  peer.age(now);
  return prophet_forward_decision(self.get(dst), peer.get(dst));
}

int SprayAndWaitProtocol::hand_over(Replica& sender) {
  const SprayShare share = snw_split(sender.copies);
  sender.copies = share.keep;
  return share.give;
}

void BubbleRapProtocol::reset(std::size_t node_count) {
  states_.clear();
  states_.reserve(node_count);
  for (std::size_t n = 0; n < node_count; ++n) states_.emplace_back(static_cast<NodeId>(n), node_count, params_);
}

void BubbleRapProtocol::on_contact_up(NodeId a, NodeId b, SimTime) {
  states_[static_cast<std::size_t>(a)].note_encounter(b);
  states_[static_cast<std::size_t>(b)].note_encounter(a);
}

void BubbleRapProtocol::on_contact_down(NodeId a, NodeId b, SimTime, Duration length) {
  BubbleState& sa = states_[static_cast<std::size_t>(a)];
  BubbleState& sb = states_[static_cast<std::size_t>(b)];
  // Both sides decide on the familiar sets exchanged during the contact.
  const BubbleState sa_before = sa;
  sa.record_contact(b, length, sb);
  sb.record_contact(a, length, sa_before);
}

void BubbleRapProtocol::on_window(SimTime, std::span<const std::vector<NodeId>> ongoing) {
  for (std::size_t n = 0; n < states_.size(); ++n) states_[n].close_window(ongoing[n]);
}

bool BubbleRapProtocol::should_forward(NodeId from, NodeId to, NodeId dst, const Replica&, SimTime) {
  return bubble_forward_decision(states_[static_cast<std::size_t>(from)], states_[static_cast<std::size_t>(to)], dst);
}

std::unique_ptr<Protocol> make_protocol(ProtocolKind kind, const RoutingConfig& config) {
  switch (kind) {
    case ProtocolKind::kEpidemic: return std::make_unique<EpidemicProtocol>();
    case ProtocolKind::kProphet: return std::make_unique<ProphetProtocol>(config.prophet);
    case ProtocolKind::kSprayAndWait: return std::make_unique<SprayAndWaitProtocol>(config.snw);
    case ProtocolKind::kBubbleRap: return std::make_unique<BubbleRapProtocol>(config.bubble);
  }
  throw std::logic_error("unhandled protocol kind");
}

}  // namespace mau::routing
