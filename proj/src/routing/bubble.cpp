#include "mau/routing/bubble.hpp"

#include <algorithm>

namespace mau::routing {

BubbleState::BubbleState(NodeId self, std::size_t node_count, const BubbleParams& params)
    : self_(self),
      params_(&params),
      cumulative_(node_count, Duration{0}),
      familiar_(node_count, 0),
      community_(node_count, 0),
      met_(node_count, 0) {
  community_[idx(self)] = 1;
}

std::size_t BubbleState::community_size() const {
  return static_cast<std::size_t>(std::count(community_.begin(), community_.end(), std::uint8_t{1}));
}

double BubbleState::global_centrality() const {
  return windows_ == 0 ? 0.0 : global_sum_ / static_cast<double>(windows_);
}

double BubbleState::local_centrality() const {
  return windows_ == 0 ? 0.0 : local_sum_ / static_cast<double>(windows_);
}

void BubbleState::record_contact(NodeId peer, Duration length, const BubbleState& peer_state) {
  cumulative_[idx(peer)] += length;
  if (cumulative_[idx(peer)] >= params_->familiar_threshold) familiar_[idx(peer)] = 1;
  if (in_community(peer)) return;
  if (familiar(peer)) {
    community_[idx(peer)] = 1;
    return;
  }
  std::size_t overlap = 0;
  for (std::size_t n = 0; n < community_.size(); ++n) {
    if (community_[n] && peer_state.familiar_[n]) ++overlap;
  }
  if (static_cast<int>(overlap) >= params_->k - 1) community_[idx(peer)] = 1;
}

void BubbleState::close_window(std::span<const NodeId> ongoing) {
  for (NodeId p : ongoing) met_[idx(p)] = 1;
  std::size_t global = 0, local = 0;
  for (std::size_t n = 0; n < met_.size(); ++n) {
    if (!met_[n] || static_cast<NodeId>(n) == self_) continue;
    ++global;
    if (community_[n]) ++local;
  }
  global_sum_ += static_cast<double>(global);
  local_sum_ += static_cast<double>(local);
  ++windows_;
  std::fill(met_.begin(), met_.end(), std::uint8_t{0});
  for (NodeId p : ongoing) met_[idx(p)] = 1;
}

bool bubble_forward_decision(const BubbleState& self, const BubbleState& peer, NodeId dst) {
  const bool self_in = self.in_community(dst);
  const bool peer_in = peer.in_community(dst);
  if (peer_in && !self_in) return true;
  if (self_in && !peer_in) return false;
  if (self_in) return peer.local_centrality() > self.local_centrality();
  return peer.global_centrality() > self.global_centrality();
}

}  // namespace mau::routing
