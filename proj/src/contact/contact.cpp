#include "mau/contact/contact.hpp"

#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace mau::contact {

std::string_view to_string(ContactKind kind) { return kind == ContactKind::kUp ? "up" : "down"; }

Duration transfer_duration(std::uint64_t size_bytes, const LinkConfig& link) {
  if (size_bytes == 0) throw std::invalid_argument("transfer_duration: size must be positive");
  if (link.bitrate <= 0) throw std::invalid_argument("transfer_duration: bitrate must be positive");
  const auto bitrate = static_cast<std::uint64_t>(link.bitrate);
  const std::uint64_t bit_ms = size_bytes * 8ULL * 1000ULL;
  return Duration{static_cast<std::int64_t>((bit_ms + bitrate - 1) / bitrate)};
}

namespace {

class TraceChecker {
 public:
  explicit TraceChecker(int node_count) : node_count_(node_count) {}

  void check(const ContactEvent& ev, std::size_t line) {
    if (ev.a < 0 || ev.b < 0 || ev.a >= node_count_ || ev.b >= node_count_) {
      throw ParseError("node id out of range", line);
    }
    if (ev.a >= ev.b) throw ParseError("pair not in canonical order (need idA < idB)", line);
    if (ev.time < SimTime{}) throw ParseError("negative time", line);
    if (ev.time < last_) throw ParseError("events out of time order", line);
    last_ = ev.time;
    const auto key = (static_cast<std::uint64_t>(ev.a) << 32) | static_cast<std::uint32_t>(ev.b);
    bool& up = up_[key];
    if ((ev.kind == ContactKind::kUp) == up) {
      throw ParseError(ev.kind == ContactKind::kUp ? "'up' for a pair already up" : "'down' for a pair not up", line);
    }
    up = ev.kind == ContactKind::kUp;
  }

 private:
  int node_count_;
  SimTime last_{};
  std::unordered_map<std::uint64_t, bool> up_;
};

}  // namespace

void validate_trace(const ContactTrace& trace) {
  if (trace.node_count < 0) throw ParseError("negative node count", 1);
  TraceChecker checker(trace.node_count);
  for (std::size_t i = 0; i < trace.events.size(); ++i) checker.check(trace.events[i], i + 2);
}

void write_trace(std::ostream& out, const ContactTrace& trace) {
  out << "NODES " << trace.node_count << '\n';
  for (const auto& ev : trace.events) {
    out << "CONN " << to_ms(ev.time) << ' ' << ev.a << ' ' << ev.b << ' ' << to_string(ev.kind) << '\n';
  }
}

ContactTrace read_trace(std::istream& in) {
  ContactTrace trace;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  std::unique_ptr<TraceChecker> checker;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') throw ParseError("CR line ending", lineno);
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    if (!have_header) {
      long long n;
      if (tag != "NODES" || !(fields >> n) || n < 0) throw ParseError("expected header 'NODES n'", lineno);
      trace.node_count = static_cast<int>(n);
      checker = std::make_unique<TraceChecker>(trace.node_count);
      have_header = true;
    } else {
      long long t, a, b;
      std::string kind;
      if (tag != "CONN" || !(fields >> t >> a >> b >> kind)) {
        throw ParseError("expected 'CONN time_ms idA idB up|down'", lineno);
      }
      ContactEvent ev{at_ms(t), static_cast<NodeId>(a), static_cast<NodeId>(b), ContactKind::kUp};
      if (kind == "down") {
        ev.kind = ContactKind::kDown;
      } else if (kind != "up") {
        throw ParseError("contact kind must be 'up' or 'down'", lineno);
      }
      checker->check(ev, lineno);
      trace.events.push_back(ev);
    }
    std::string extra;
    if (fields >> extra) throw ParseError("trailing field '" + extra + "'", lineno);
  }
  if (!have_header) throw ParseError("missing 'NODES n' header", lineno == 0 ? 1 : lineno);
  return trace;
}

}  // namespace mau::contact
