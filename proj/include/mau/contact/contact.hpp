#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "mau/sim/time.hpp"
#include "mau/types.hpp"

namespace mau::contact {

enum class ContactKind : std::uint8_t { kUp, kDown };

std::string_view to_string(ContactKind kind);

/// Link-up or link-down between two nodes. Canonical form has a < b.
struct ContactEvent {
  SimTime time;
  NodeId a = 0;
  NodeId b = 0;
  ContactKind kind = ContactKind::kUp;

  friend bool operator==(const ContactEvent&, const ContactEvent&) = default;
};

/// Time-ordered contact events for `node_count` nodes. A pair left up at the
/// end stays in contact until the run ends.
struct ContactTrace {
  int node_count = 0;
  std::vector<ContactEvent> events;

  friend bool operator==(const ContactTrace&, const ContactTrace&) = default;
};

enum class Duplex : std::uint8_t {
  kHalf,  // one transfer at a time per pair
  kFull,  // one transfer at a time per direction
};

struct LinkConfig {
  double range = 100.0;                  // m, inclusive
  std::int64_t bitrate = 11'000'000;     // bit/s
  Duration beacon_period = Duration{100};
  Duplex duplex = Duplex::kHalf;
};

/// ceil(size * 8 / bitrate) at millisecond resolution. Throws
/// std::invalid_argument for size 0.
Duration transfer_duration(std::uint64_t size_bytes, const LinkConfig& link);

/// Checks ids, canonical order, time order and per-pair up/down alternation.
/// Throws ParseError whose line is the 1-based event index plus one (the
/// header occupies line 1).
void validate_trace(const ContactTrace& trace);

/// "NODES n" then one "CONN time_ms idA idB up|down" per event; ASCII, LF.
void write_trace(std::ostream& out, const ContactTrace& trace);
/// Parses and validates; throws ParseError with the line number.
ContactTrace read_trace(std::istream& in);

}  // namespace mau::contact
