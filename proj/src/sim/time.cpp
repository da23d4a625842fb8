#include "mau/sim/time.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mau {

namespace {

struct Unit {
  std::string_view suffix;
  std::int64_t ms;
};

// Longest suffixes first so "min" and "ms" win over "m"-less matches.
constexpr std::array<Unit, 6> kUnits{{{"min", 60'000},
                                      {"ms", 1},
                                      {"s", 1'000},
                                      {"h", 3'600'000},
                                      {"d", 86'400'000},
                                      {"w", 604'800'000}}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Duration parse_duration(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty duration");

  std::int64_t scale = 1;
  for (const auto& unit : kUnits) {
    if (s.size() > unit.suffix.size() && s.ends_with(unit.suffix)) {
      scale = unit.ms;
      s.remove_suffix(unit.suffix.size());
      s = trim(s);
      break;
    }
  }

  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw std::invalid_argument("malformed duration '" + std::string(text) + "'");
  }
  const double ms = value * static_cast<double>(scale);
  if (std::abs(ms - std::round(ms)) > 1e-6) {
    throw std::invalid_argument("duration '" + std::string(text) + "' is not a whole number of milliseconds");
  }
  return Duration{static_cast<std::int64_t>(std::llround(ms))};
}

std::string format_duration(Duration d) {
  const std::int64_t ms = d.count();
  if (ms == 0) return "0ms";
  constexpr std::array<Unit, 5> kLargestFirst{
      {{"w", 604'800'000}, {"d", 86'400'000}, {"h", 3'600'000}, {"min", 60'000}, {"s", 1'000}}};
  for (const auto& unit : kLargestFirst) {
    if (ms % unit.ms == 0) return std::to_string(ms / unit.ms) + std::string(unit.suffix);
  }
  return std::to_string(ms) + "ms";
}

}  // namespace mau
