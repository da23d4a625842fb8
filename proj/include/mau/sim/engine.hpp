#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <queue>
#include <string_view>
#include <vector>

#include "mau/sim/time.hpp"

namespace mau {

enum class EventKind : std::uint8_t {
  kMobilityUpdate,
  kContactUp,
  kContactDown,
  kMessageCreation,
  kTransferComplete,
  kTtlExpiry,
  kCentralityWindow,
};

std::string_view to_string(EventKind kind);

/// A scheduled event. The three integer slots carry kind-specific payload
/// (node ids, message ids, link tokens) so events stay trivially copyable and
/// the log format is uniform.
struct Event {
  SimTime fire_at;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::kMobilityUpdate;
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
};

using EventHandle = std::uint64_t;

/// Single-threaded discrete-event engine. Events fire in (fire_at, seq)
/// order; seq is the insertion counter, so simultaneous events are FIFO.
class Engine {
 public:
  using Handler = std::function<void(const Event&)>;

  explicit Engine(Handler handler = {}) : handler_(std::move(handler)) {}

  void set_handler(Handler handler) { handler_ = std::move(handler); }
  /// Each processed event is written as "time_ms kind a b c".
  void set_event_log(std::ostream* log) { log_ = log; }

  SimTime now() const { return now_; }
  std::size_t pending() const { return queue_.size(); }

  /// Throws std::logic_error when `at` is earlier than now().
  EventHandle schedule(SimTime at, EventKind kind, std::int64_t a = 0, std::int64_t b = 0,
                       std::int64_t c = 0);

  /// Processes every event with fire_at <= t_end, then sets now() to t_end.
  /// Returns the number of events processed.
  std::size_t run_until(SimTime t_end);

 private:
  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      if (x.fire_at != y.fire_at) return x.fire_at > y.fire_at;
      return x.seq > y.seq;
    }
  };

  Handler handler_;
  std::ostream* log_ = nullptr;
  SimTime now_{};
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
};

}  // namespace mau
