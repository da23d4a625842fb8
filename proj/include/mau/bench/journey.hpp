#pragma once

#include <optional>

#include "mau/contact/contact.hpp"

namespace mau::bench {

struct JourneyQuery {
  NodeId src = 0;
  NodeId dst = 0;
  SimTime depart{};
};

/// Earliest arrival at `dst` over time-respecting contact sequences that leave
/// `src` no earlier than `depart`, with zero transfer time and unlimited
/// buffers. A contact is usable during [up, down); one still up at the end of
/// the trace never goes down. nullopt when nothing arrives by depart + ttl.
std::optional<SimTime> foremost_journey(const contact::ContactTrace& trace, const JourneyQuery& query, Duration ttl);

}  // namespace mau::bench
