#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace mau {

/// Simulated duration at millisecond resolution.
using Duration = std::chrono::duration<std::int64_t, std::milli>;

struct SimClock {
  using rep = std::int64_t;
  using period = std::milli;
  using duration = Duration;
  using time_point = std::chrono::time_point<SimClock, Duration>;
  static constexpr bool is_steady = true;
};

/// Milliseconds since simulation start.
using SimTime = SimClock::time_point;

constexpr SimTime at_ms(std::int64_t ms) { return SimTime{Duration{ms}}; }
constexpr std::int64_t to_ms(SimTime t) { return t.time_since_epoch().count(); }
constexpr std::int64_t to_ms(Duration d) { return d.count(); }
constexpr double to_seconds(Duration d) { return static_cast<double>(d.count()) / 1000.0; }
constexpr double to_seconds(SimTime t) { return to_seconds(t.time_since_epoch()); }

inline constexpr Duration kSecond{1000};
inline constexpr Duration kMinute{60 * 1000};
inline constexpr Duration kHour{3600 * 1000};
inline constexpr Duration kDay{24 * 3600 * 1000};
inline constexpr Duration kWeek{7 * 24 * 3600 * 1000};

/// Parses "250", "100ms", "30s", "15min", "6h", "2d", "1w" and decimal forms such
/// as "1.5h". A bare number is milliseconds. Throws std::invalid_argument.
Duration parse_duration(std::string_view text);

/// Shortest exact rendering: 3600000 -> "1h", 90000 -> "90s", 150 -> "150ms".
std::string format_duration(Duration d);

}  // namespace mau
