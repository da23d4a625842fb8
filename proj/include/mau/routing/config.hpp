#pragma once

#include <cstdint>
#include <limits>
#include <string_view>

#include "mau/sim/time.hpp"

namespace mau::routing {

enum class ProtocolKind : std::uint8_t { kEpidemic, kProphet, kSprayAndWait, kBubbleRap };

/// Scenario-file names: "epidemic", "prophet", "snw", "bubble".
std::string_view to_string(ProtocolKind kind);
ProtocolKind parse_protocol(std::string_view text);

struct ProphetParams {
  double p_init = 0.75;
  double beta = 0.25;
  double gamma = 0.98;
  Duration time_unit = Duration{30'000};
};

struct BubbleParams {
  Duration familiar_threshold = Duration{15 * 60'000};
  int k = 5;
  Duration window = Duration{6 * 3'600'000};
};

struct SprayParams {
  int copies = 10;  // L
};

enum class TtlMode : std::uint8_t { kTime, kHops };

/// What a node refuses to receive again.
enum class Refusal : std::uint8_t {
  kSeen,      // any id it has ever held
  kResident,  // ids in its buffer, plus ids addressed to it and already delivered
};

inline constexpr std::uint64_t kUnlimitedBuffer = std::numeric_limits<std::uint64_t>::max();

struct RoutingConfig {
  std::uint64_t buffer_capacity = 2'000'000;  // bytes
  TtlMode ttl_mode = TtlMode::kTime;
  int hop_limit = 10;
  bool suppress_delivered = false;
  Refusal refusal = Refusal::kSeen;
  Duration sweep_period = Duration{3'600'000};  // periodic TTL purge
  ProphetParams prophet;
  BubbleParams bubble;
  SprayParams snw;
};

}  // namespace mau::routing
