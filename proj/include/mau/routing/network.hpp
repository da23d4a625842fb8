#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "mau/contact/contact.hpp"
#include "mau/routing/config.hpp"
#include "mau/routing/protocol.hpp"

namespace mau::routing {

/// A message injected at its source at `created`.
struct MessageSpec {
  MessageId id = 0;  // must equal its index in the injected list
  NodeId src = 0;
  NodeId dst = 0;
  std::uint32_t size = 0;
  SimTime created{};
};

struct SimulationConfig {
  RoutingConfig routing;
  contact::LinkConfig link;
  Duration ttl = Duration{3'600'000};
  SimTime end{};
};

/// What happened to one message.
struct MessageOutcome {
  std::optional<SimTime> delivered_at;  // first arrival at the destination
  int hops = 0;                         // transfers on the first delivery path
  std::uint64_t transmissions = 0;      // completed transfers of this message
};

/// Safety counters, checked after every state change.
struct RunAudit {
  std::uint64_t buffer_overflows = 0;   // resident bytes above capacity
  std::uint64_t expired_transfers = 0;  // transfer started or completed after TTL
  std::uint64_t copy_violations = 0;    // copy budget or replica count above bound
  std::uint64_t phantom_messages = 0;   // replica of an id never injected
  std::uint64_t transfers_started = 0;
  std::uint64_t transfers_aborted = 0;  // contact went down first
  std::uint64_t transfers_voided = 0;   // sender dropped the message in flight
  std::uint64_t drops = 0;              // evicted to make room
  std::uint64_t expirations = 0;
  std::uint64_t max_buffer_used = 0;
  int max_copy_total = 0;
  int max_replicas = 0;

  bool clean() const {
    return buffer_overflows == 0 && expired_transfers == 0 && copy_violations == 0 && phantom_messages == 0;
  }
};

struct RoutingResult {
  std::vector<MessageOutcome> messages;
  RunAudit audit;
  contact::ContactTrace contacts;  // contact events the run consumed, in order
};

/// Runs store-carry-forward routing over a contact trace.
///
/// Direct delivery to the peer always comes first; the protocol decides the
/// relays. Transfers are serial per node pair (or per direction with a
/// full-duplex link), parallel across peers, take transfer_duration(size),
/// and deliver nothing if the contact goes down first. A transfer is only
/// started if it completes before the message expires. A node never accepts
/// a message id it has held or received before.
RoutingResult simulate(const contact::ContactTrace& contacts, std::span<const MessageSpec> messages,
                       const SimulationConfig& config, Protocol& protocol, std::ostream* event_log = nullptr);

}  // namespace mau::routing
