#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "mau/bench/scenario.hpp"
#include "mau/contact/beacon.hpp"
#include "mau/contact/contact.hpp"
#include "mau/contact/generator.hpp"
#include "mau/sim/rng.hpp"

using namespace mau;
using namespace mau::contact;

namespace {

std::vector<Vec2> random_positions(RngStream& rng, std::size_t n, double side) {
  std::vector<Vec2> out(n);
  for (auto& p : out) p = {rng.uniform(0.0, side), rng.uniform(0.0, side)};
  return out;
}

}  // namespace

TEST_CASE("transfer time rounds up to whole milliseconds") {
  LinkConfig link;
  CHECK(transfer_duration(1, link) == Duration{1});
  CHECK(transfer_duration(1375, link) == Duration{1});       // exactly 1 ms at 11 Mbps
  CHECK(transfer_duration(1376, link) == Duration{2});
  CHECK(transfer_duration(100000, link) == Duration{73});    // 72.7 ms
  CHECK_THROWS_AS(transfer_duration(0, link), std::invalid_argument);
}

TEST_CASE("range is inclusive") {
  CHECK(within_range({0, 0}, {100, 0}, 100.0));
  CHECK_FALSE(within_range({0, 0}, {100.000001, 0}, 100.0));
}

TEST_CASE("traces round-trip and reject malformed input with the line number") {
  ContactTrace t{4, {{at_ms(0), 0, 1, ContactKind::kUp},
                     {at_ms(500), 2, 3, ContactKind::kUp},
                     {at_ms(900), 0, 1, ContactKind::kDown}}};
  std::ostringstream out;
  write_trace(out, t);
  CHECK(out.str() == "NODES 4\nCONN 0 0 1 up\nCONN 500 2 3 up\nCONN 900 0 1 down\n");
  std::istringstream in(out.str());
  CHECK(read_trace(in) == t);

  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream s(text);
    try {
      read_trace(s);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("NODES 2\nCONN 5 0 1 up\nCONN 4 0 1 down\n") == 3);   // time goes backwards
  CHECK(line_of("NODES 2\nCONN 5 0 1 up\nCONN 6 0 1 up\n") == 3);     // double up
  CHECK(line_of("NODES 2\nCONN 5 0 2 up\n") == 2);                    // unknown node
  CHECK(line_of("NODES 2\nCONN 5 1 0 up\n") == 2);                    // not canonical
  CHECK(line_of("NODES 2\nCONN 5 0 1 sideways\n") == 2);
  CHECK(line_of("NODES 2\r\nCONN 5 0 1 up\n") == 1);
  CHECK(line_of("CONN 5 0 1 up\n") == 1);
}

TEST_CASE("candidate lists agree with a brute-force radius search") {
  RngStream rng(5, "test.candidates");
  for (int trial = 0; trial < 20; ++trial) {
    const auto pos = random_positions(rng, 120, 1000.0);
    const double radius = rng.uniform(20.0, 200.0);
    std::vector<NodePair> expected;
    for (NodeId i = 0; i < 120; ++i) {
      for (NodeId j = i + 1; j < 120; ++j) {
        if (within_range(pos[static_cast<std::size_t>(i)], pos[static_cast<std::size_t>(j)], radius)) {
          expected.emplace_back(i, j);
        }
      }
    }
    CHECK(candidate_pairs_serial(pos, radius) == expected);
    CHECK(candidate_pairs_parallel(pos, radius) == expected);
  }
}

TEST_CASE("substep masks agree with direct interpolation") {
  RngStream rng(6, "test.masks");
  const auto from = random_positions(rng, 80, 500.0);
  auto to = from;
  for (auto& p : to) p = p + Vec2{rng.uniform(-10, 10), rng.uniform(-10, 10)};
  const auto cands = candidate_pairs_serial(from, 150.0);
  std::vector<std::uint64_t> serial, parallel;
  substep_masks_serial(from, to, cands, 100.0, 10, serial);
  substep_masks_parallel(from, to, cands, 100.0, 10, parallel);
  CHECK(serial == parallel);
  for (std::size_t c = 0; c < cands.size(); ++c) {
    const auto [i, j] = cands[c];
    std::uint64_t mask = 0;
    for (int k = 0; k < 10; ++k) {
      const double s = static_cast<double>(k + 1) / 10.0;
      const auto a = interpolate(from[static_cast<std::size_t>(i)], to[static_cast<std::size_t>(i)], s);
      const auto b = interpolate(from[static_cast<std::size_t>(j)], to[static_cast<std::size_t>(j)], s);
      if (within_range(a, b, 100.0)) mask |= std::uint64_t{1} << k;
    }
    REQUIRE(serial[c] == mask);
  }
}

TEST_CASE("two nodes closing in meet at the first beacon within range") {
  ContactDetector det(2, 100.0, 20.0, ScanKernel::kPruned);
  std::vector<ContactEvent> ev;
  std::vector<Vec2> a{{0, 0}, {115, 0}}, b{{0, 0}, {95, 0}};
  det.initial(a, at_ms(0), ev);
  CHECK(ev.empty());
  // The gap shrinks 2 m per 100 ms beacon: 113, 111, ..., 97; 99 is the first within range.
  det.interval(a, b, at_ms(0), Duration{100}, 10, ev);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0] == ContactEvent{at_ms(800), 0, 1, ContactKind::kUp});
}

TEST_CASE("pruned kernels reproduce the all-pairs reference on random walks") {
  RngStream rng(8, "test.walk");
  const std::size_t n = 60;
  auto pos = random_positions(rng, n, 600.0);
  ContactDetector ref(n, 100.0, 10.0, ScanKernel::kReference);
  ContactDetector pruned(n, 100.0, 10.0, ScanKernel::kPruned, 5);
  ContactDetector par(n, 100.0, 10.0, ScanKernel::kPrunedParallel, 5);
  std::vector<ContactEvent> er, ep, eq;
  ref.initial(pos, at_ms(0), er);
  pruned.initial(pos, at_ms(0), ep);
  par.initial(pos, at_ms(0), eq);
  for (int tick = 0; tick < 600; ++tick) {
    auto next = pos;
    for (auto& p : next) {
      const double ang = rng.uniform(0.0, 6.283185307179586);
      const double step = rng.uniform(0.0, 10.0);
      p = p + Vec2{std::cos(ang) * step, std::sin(ang) * step};
    }
    const SimTime t0 = at_ms(tick * 1000LL);
    ref.interval(pos, next, t0, Duration{100}, 10, er);
    pruned.interval(pos, next, t0, Duration{100}, 10, ep);
    par.interval(pos, next, t0, Duration{100}, 10, eq);
    pos = next;
  }
  CHECK(er.size() > 100);
  CHECK(ep == er);
  CHECK(eq == er);
  auto too_fast = pos;
  too_fast[0] = too_fast[0] + Vec2{50, 0};
  CHECK_THROWS(pruned.interval(pos, too_fast, at_ms(600000), Duration{100}, 10, ep));
}

TEST_CASE("generated traces are identical across kernels and valid") {
  auto s = bench::load_scenario("mau-mini");
  const Duration span = kHour * 10;
  GenerationOptions reference;
  reference.kernel = ScanKernel::kReference;
  GenerationOptions parallel;
  parallel.kernel = ScanKernel::kPrunedParallel;
  const auto a = generate_contacts(s.mobility, s.link, span, 3, reference);
  const auto b = generate_contacts(s.mobility, s.link, span, 3);
  const auto c = generate_contacts(s.mobility, s.link, span, 3, parallel);
  CHECK(a.events.size() > 50);
  CHECK(a == b);
  CHECK(a == c);
  CHECK_NOTHROW(validate_trace(a));
  for (const auto& ev : a.events) {
    REQUIRE(to_ms(ev.time) % 100 == 0);
    REQUIRE(ev.time <= SimTime{} + span);
  }
  const auto other_seed = generate_contacts(s.mobility, s.link, span, 4);
  CHECK_FALSE(other_seed == a);
}
