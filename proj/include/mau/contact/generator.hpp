#pragma once

#include <iosfwd>
#include <memory>

#include "mau/contact/beacon.hpp"
#include "mau/contact/contact.hpp"
#include "mau/mobility/movement.hpp"

namespace mau::contact {

struct GenerationOptions {
  ScanKernel kernel = ScanKernel::kPruned;
  int rebuild_every = 10;
  std::ostream* event_log = nullptr;        // engine events, "time_ms kind a b c"
  std::ostream* mobility_trace = nullptr;   // "time_ms node_id x y"
  Duration mobility_trace_period = Duration{60'000};
};

/// Runs mobility and beaconing from 0 to `duration` and returns the contacts.
/// Consumes only mobility-labelled streams of `master_seed`.
ContactTrace generate_contacts(const mobility::MobilityConfig& mobility, std::shared_ptr<const mobility::Map> map,
                               const LinkConfig& link, Duration duration, std::uint64_t master_seed,
                               const GenerationOptions& options = {});

/// Builds the map from the configuration first.
ContactTrace generate_contacts(const mobility::MobilityConfig& mobility, const LinkConfig& link, Duration duration,
                               std::uint64_t master_seed, const GenerationOptions& options = {});

}  // namespace mau::contact
