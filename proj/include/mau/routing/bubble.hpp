#pragma once

#include <span>
#include <vector>

#include "mau/routing/config.hpp"
#include "mau/types.hpp"

namespace mau::routing {

/// Online community and centrality estimate of one node.
///
/// Familiar set: peers whose cumulative contact time reached the threshold.
/// Community: self, familiar peers, and peers whose familiar set overlaps the
/// community in at least k - 1 members. Centrality: mean number of unique
/// peers met per completed window, over all peers (global) or community
/// members only (local).
class BubbleState {
 public:
  BubbleState(NodeId self, std::size_t node_count, const BubbleParams& params);

  NodeId self() const { return self_; }
  bool familiar(NodeId peer) const { return familiar_[idx(peer)] != 0; }
  bool in_community(NodeId node) const { return community_[idx(node)] != 0; }
  std::size_t community_size() const;
  Duration contact_time(NodeId peer) const { return cumulative_[idx(peer)]; }
  double global_centrality() const;
  double local_centrality() const;
  std::size_t completed_windows() const { return windows_; }

  /// Counts `peer` as met in the current window.
  void note_encounter(NodeId peer) { met_[idx(peer)] = 1; }
  /// Contact with `peer` ended after `length`; updates familiarity and
  /// community admission using the peer's current familiar set.
  void record_contact(NodeId peer, Duration length, const BubbleState& peer_state);
  /// Closes the current window. Peers still in contact count toward the next
  /// window as well.
  void close_window(std::span<const NodeId> ongoing);

 private:
  std::size_t idx(NodeId n) const { return static_cast<std::size_t>(n); }

  NodeId self_;
  const BubbleParams* params_;
  std::vector<Duration> cumulative_;
  std::vector<std::uint8_t> familiar_;
  std::vector<std::uint8_t> community_;
  std::vector<std::uint8_t> met_;
  double global_sum_ = 0.0;
  double local_sum_ = 0.0;
  std::size_t windows_ = 0;
};

/// Replicate to the peer when it is in the destination's community and self
/// is not; when both or neither are, compare local (both) or global (neither)
/// centrality, strictly.
bool bubble_forward_decision(const BubbleState& self, const BubbleState& peer, NodeId dst);

}  // namespace mau::routing
