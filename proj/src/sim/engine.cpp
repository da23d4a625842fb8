#include "mau/sim/engine.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

namespace mau {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kMobilityUpdate: return "mobility-update";
    case EventKind::kContactUp: return "contact-up";
    case EventKind::kContactDown: return "contact-down";
    case EventKind::kMessageCreation: return "message-creation";
    case EventKind::kTransferComplete: return "transfer-complete";
    case EventKind::kTtlExpiry: return "ttl-expiry";
    case EventKind::kCentralityWindow: return "centrality-window";
  }
  return "unknown";
}

EventHandle Engine::schedule(SimTime at, EventKind kind, std::int64_t a, std::int64_t b,
                             std::int64_t c) {
  if (at < now_) {
    throw std::logic_error("event scheduled in the past: " + std::to_string(to_ms(at)) +
                           " < " + std::to_string(to_ms(now_)));
  }
  const EventHandle seq = next_seq_++;
  queue_.push(Event{at, seq, kind, a, b, c});
  return seq;
}

std::size_t Engine::run_until(SimTime t_end) {
  if (t_end < now_) throw std::logic_error("run_until: end time precedes current time");
  std::size_t processed = 0;
  while (!queue_.empty() && queue_.top().fire_at <= t_end) {
    const Event ev = queue_.top();
    queue_.pop();
    now_ = ev.fire_at;
    if (log_ != nullptr) {
      *log_ << to_ms(ev.fire_at) << ' ' << to_string(ev.kind) << ' ' << ev.a << ' ' << ev.b
            << ' ' << ev.c << '\n';
    }
    if (handler_) handler_(ev);
    ++processed;
  }
  now_ = t_end;
  return processed;
}

}  // namespace mau
