#pragma once

#include <memory>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "mau/routing/bubble.hpp"
#include "mau/routing/buffer.hpp"
#include "mau/routing/config.hpp"
#include "mau/routing/prophet.hpp"

namespace mau::routing {

/// Ids in `self` absent from the peer's summary vector, oldest arrival first.
std::vector<MessageId> epidemic_exchange(const Buffer& self, const std::unordered_set<MessageId>& peer_summary);

struct SprayShare {
  int keep = 0;
  int give = 0;
};

/// Binary spray: hand over floor(c / 2) copies while c > 1; with one copy
/// left the carrier only waits for the destination.
SprayShare snw_split(int copies_left);

/// Per-protocol routing memory for every node. Implementations are pure state
/// machines driven by the network; they never touch buffers or the clock.
class Protocol {
 public:
  virtual ~Protocol() = default;

  virtual ProtocolKind kind() const = 0;
  virtual void reset(std::size_t node_count) = 0;

  virtual int initial_copies() const { return 1; }
  /// Upper bound on the copy budget summed over all replicas, if any.
  virtual std::optional<int> copy_bound() const { return std::nullopt; }

  virtual void on_contact_up(NodeId, NodeId, SimTime) {}
  virtual void on_contact_down(NodeId, NodeId, SimTime, Duration) {}

  /// Period of on_window calls, if the protocol needs them.
  virtual std::optional<Duration> window() const { return std::nullopt; }
  /// `ongoing[n]` lists the peers node n is in contact with.
  virtual void on_window(SimTime, std::span<const std::vector<NodeId>>) {}

  /// Relay decision for a message `from` holds, `to` lacks, and `to` is not
  /// the destination of.
  virtual bool should_forward(NodeId from, NodeId to, NodeId dst, const Replica& replica, SimTime now) = 0;

  /// Copies the receiver gets for a completed relay; updates the sender's
  /// replica in place.
  virtual int hand_over(Replica& sender) { return sender.copies; }
};

class EpidemicProtocol final : public Protocol {
 public:
  ProtocolKind kind() const override { return ProtocolKind::kEpidemic; }
  void reset(std::size_t) override {}
  bool should_forward(NodeId, NodeId, NodeId, const Replica&, SimTime) override { return true; }
};

class ProphetProtocol final : public Protocol {
 public:
  explicit ProphetProtocol(ProphetParams params) : params_(params) {}

  ProtocolKind kind() const override { return ProtocolKind::kProphet; }
  void reset(std::size_t node_count) override;
  void on_contact_up(NodeId a, NodeId b, SimTime now) override;
  bool should_forward(NodeId from, NodeId to, NodeId dst, const Replica& replica, SimTime now) override;

  const ProphetTable& table(NodeId n) const { return tables_.at(static_cast<std::size_t>(n)); }

 private:
  ProphetParams params_;
  std::vector<ProphetTable> tables_;
};

class SprayAndWaitProtocol final : public Protocol {
 public:
  explicit SprayAndWaitProtocol(SprayParams params) : params_(params) {}

  ProtocolKind kind() const override { return ProtocolKind::kSprayAndWait; }
  void reset(std::size_t) override {}
  int initial_copies() const override { return params_.copies; }
  std::optional<int> copy_bound() const override { return params_.copies; }
  bool should_forward(NodeId, NodeId, NodeId, const Replica& replica, SimTime) override {
    return replica.copies > 1;
  }
  int hand_over(Replica& sender) override;

 private:
  SprayParams params_;
};

class BubbleRapProtocol final : public Protocol {
 public:
  explicit BubbleRapProtocol(BubbleParams params) : params_(params) {}

  ProtocolKind kind() const override { return ProtocolKind::kBubbleRap; }
  void reset(std::size_t node_count) override;
  void on_contact_up(NodeId a, NodeId b, SimTime now) override;
  void on_contact_down(NodeId a, NodeId b, SimTime now, Duration length) override;
  std::optional<Duration> window() const override { return params_.window; }
  void on_window(SimTime now, std::span<const std::vector<NodeId>> ongoing) override;
  bool should_forward(NodeId from, NodeId to, NodeId dst, const Replica& replica, SimTime now) override;

  const BubbleState& state(NodeId n) const { return states_.at(static_cast<std::size_t>(n)); }

 private:
  BubbleParams params_;
  std::vector<BubbleState> states_;
};

std::unique_ptr<Protocol> make_protocol(ProtocolKind kind, const RoutingConfig& config);

}  // namespace mau::routing
