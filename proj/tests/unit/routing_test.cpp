#include <doctest.h>

#include <unordered_set>

#include "mau/routing/bubble.hpp"
#include "mau/routing/buffer.hpp"
#include "mau/routing/prophet.hpp"
#include "mau/routing/protocol.hpp"
#include "mau/sim/rng.hpp"

using namespace mau;
using namespace mau::routing;

namespace {

Replica replica(MessageId id, std::uint32_t size, SimTime expires = at_ms(1'000'000'000)) {
  Replica r;
  r.id = id;
  r.size = size;
  r.expires_at = expires;
  return r;
}

std::vector<MessageId> ids(const Buffer& b) {
  std::vector<MessageId> out;
  for (const auto& r : b) out.push_back(r.id);
  return out;
}

}  // namespace

TEST_CASE("buffer evicts expired replicas first, then the oldest arrivals") {
  Buffer b(2'000'000);
  CHECK(b.insert(replica(0, 10'000), at_ms(0)).accepted);
  CHECK(b.insert(replica(1, 10'000), at_ms(0)).dropped.empty());

  Buffer full(2'000'000);
  for (MessageId i = 0; i < 200; ++i) REQUIRE(full.insert(replica(i, 10'000), at_ms(0)).accepted);
  CHECK(full.used() == 2'000'000);
  auto r = full.insert(replica(200, 10'000), at_ms(1));
  CHECK(r.accepted);
  REQUIRE(r.dropped.size() == 1);
  CHECK(r.dropped[0].id == 0);
  CHECK(full.used() == 2'000'000);

  Buffer mixed(30);
  mixed.insert(replica(0, 10), at_ms(0));
  mixed.insert(replica(1, 10, at_ms(50)), at_ms(0));
  mixed.insert(replica(2, 10), at_ms(0));
  r = mixed.insert(replica(3, 10), at_ms(60));
  REQUIRE(r.dropped.size() == 1);
  CHECK(r.dropped[0].id == 1);  // expired, although 0 is older
  CHECK(ids(mixed) == std::vector<MessageId>{0, 2, 3});

  Buffer small(2'000'000);
  CHECK_FALSE(small.insert(replica(9, 3'000'000), at_ms(0)).accepted);
  CHECK_FALSE(small.insert(replica(9, 10, at_ms(5)), at_ms(6)).accepted);
  CHECK(small.empty());
  small.insert(replica(1, 10), at_ms(0));
  CHECK_THROWS_AS(small.insert(replica(1, 10), at_ms(0)), std::logic_error);
}

TEST_CASE("buffer contents never exceed capacity under random churn") {
  RngStream rng(4, "test.buffer");
  Buffer b(100'000);
  std::uint64_t total = 0;
  for (MessageId i = 0; i < 5000; ++i) {
    const auto now = at_ms(i * 10);
    auto r = b.insert(replica(i, static_cast<std::uint32_t>(rng.uniform_int(1, 60'000)), now + Duration{rng.uniform_int(0, 3000)}), now);
    total = 0;
    for (const auto& x : b) total += x.size;
    REQUIRE(total == b.used());
    REQUIRE(b.used() <= b.capacity());
    (void)r;
  }
}

TEST_CASE("expiry is inclusive of the TTL instant") {
  Buffer b(100);
  b.insert(replica(0, 10, at_ms(3'600'000)), at_ms(0));
  CHECK(b.expire(at_ms(59 * 60'000)).empty());
  CHECK(b.expire(at_ms(3'600'000)).empty());
  CHECK(b.expire(at_ms(61 * 60'000)).size() == 1);
}

TEST_CASE("PROPHET worked examples") {
  CHECK(prophet_direct_update(0.0, 0.75) == 0.75);
  CHECK(prophet_direct_update(0.75, 0.75) == 0.9375);
  CHECK(prophet_direct_update(1.0, 0.75) == 1.0);
  CHECK(prophet_age(0.5, 0.98, 1) == 0.49);
  CHECK(prophet_age(0.5, 0.98, 0) == 0.5);
  CHECK(prophet_age(0.0, 0.98, 7) == 0.0);
  CHECK(prophet_transitive(0.0, 1.0, 1.0, 0.25) == 0.25);
  CHECK(prophet_transitive(0.3, 0.0, 0.9, 0.25) == 0.3);
  CHECK(prophet_transitive(1.0, 0.7, 0.9, 0.25) == 1.0);
  CHECK(prophet_forward_decision(0.2, 0.5));
  CHECK_FALSE(prophet_forward_decision(0.5, 0.5));
  CHECK_FALSE(prophet_forward_decision(0.5, 0.2));
}

TEST_CASE("PROPHET aging counts whole units and carries the remainder") {
  ProphetParams params;
  ProphetTable t(3, params);
  t.meet(1);
  t.age(at_ms(45'000));  // one unit of 30 s
  CHECK(t.get(1) == doctest::Approx(0.75 * 0.98));
  CHECK(t.last_aged() == at_ms(30'000));
  t.age(at_ms(60'000));  // the 15 s remainder plus 15 s make the second unit
  CHECK(t.get(1) == doctest::Approx(0.75 * 0.98 * 0.98));
}

TEST_CASE("PROPHET predictabilities stay in [0, 1] under random rule interleavings") {
  ProphetParams params;
  const std::size_t n = 6;
  std::vector<ProphetTable> tables(n, ProphetTable(n, params));
  RngStream rng(9, "test.prophet");
  SimTime now{};
  int violations = 0;
  for (int step = 0; step < 100000; ++step) {
    now += Duration{rng.uniform_int(0, 120'000)};
    const auto a = static_cast<NodeId>(rng.uniform_int(0, n - 1));
    auto b = static_cast<NodeId>(rng.uniform_int(0, n - 2));
    if (b >= a) ++b;
    auto& ta = tables[static_cast<std::size_t>(a)];
    const auto before = ta.values();
    switch (rng.uniform_int(0, 3)) {
      case 0:
        prophet_encounter(ta, a, tables[static_cast<std::size_t>(b)], b, now);
        break;
      case 1:
        ta.age(now);
        for (std::size_t c = 0; c < n; ++c) violations += ta.values()[c] > before[c];
        break;
      case 2:
        ta.meet(b);
        violations += ta.get(b) < before[static_cast<std::size_t>(b)];
        break;
      default:
        ta.absorb(a, b, tables[static_cast<std::size_t>(b)].values());
        for (std::size_t c = 0; c < n; ++c) violations += ta.values()[c] < before[c];
        break;
    }
    for (const auto& t : tables) {
      for (double p : t.values()) violations += !(p >= 0.0 && p <= 1.0);
    }
  }
  CHECK(violations == 0);
}

TEST_CASE("binary spray splits") {
  CHECK(snw_split(10).keep == 5);
  CHECK(snw_split(10).give == 5);
  CHECK(snw_split(3).keep == 2);
  CHECK(snw_split(3).give == 1);
  CHECK(snw_split(1).keep == 1);
  CHECK(snw_split(1).give == 0);
  // Budget is conserved along any chain of splits.
  for (int c = 1; c <= 64; ++c) CHECK(snw_split(c).keep + snw_split(c).give == c);
}

TEST_CASE("epidemic exchange offers the set difference, oldest first") {
  Buffer self(1000);
  for (MessageId i : {4, 1, 7, 3, 9}) self.insert(replica(i, 10), at_ms(0));
  CHECK(epidemic_exchange(self, {1, 9}) == std::vector<MessageId>{4, 7, 3});
  CHECK(epidemic_exchange(self, {1, 3, 4, 7, 9}).empty());
  Buffer two(1000);
  two.insert(replica(20, 10), at_ms(0));
  two.insert(replica(21, 10), at_ms(0));
  CHECK(epidemic_exchange(two, {30, 31, 32}).size() == 2);
}

TEST_CASE("Bubble Rap community and centrality bookkeeping") {
  BubbleParams params;
  params.k = 3;
  std::vector<BubbleState> s;
  for (NodeId i = 0; i < 6; ++i) s.emplace_back(i, 6, params);
  CHECK(s[0].community_size() == 1);
  CHECK(s[0].in_community(0));
  CHECK(s[0].global_centrality() == 0.0);

  s[0].record_contact(1, kMinute * 10, s[1]);
  CHECK_FALSE(s[0].familiar(1));
  s[0].record_contact(1, kMinute * 5, s[1]);  // cumulative 15 min reaches the threshold
  CHECK(s[0].familiar(1));
  CHECK(s[0].in_community(1));

  // Node 2 is not familiar to 0 but knows 0 and 1: overlap 2 >= k - 1.
  s[2].record_contact(0, kMinute * 20, s[0]);
  s[2].record_contact(1, kMinute * 20, s[1]);
  s[0].record_contact(2, kMinute, s[2]);
  CHECK(s[0].in_community(2));
  // Node 3 knows only node 0: overlap 1.
  s[3].record_contact(0, kMinute * 20, s[0]);
  s[0].record_contact(3, kMinute, s[3]);
  CHECK_FALSE(s[0].in_community(3));

  BubbleState c(0, 6, params);
  for (NodeId p : {1, 2}) c.note_encounter(p);
  c.close_window({});
  for (NodeId p : {1, 2, 3, 4}) c.note_encounter(p);
  c.close_window({});
  CHECK(c.global_centrality() == 3.0);
  BubbleState w(0, 6, params);
  for (NodeId p : {1, 2, 3}) w.note_encounter(p);
  w.close_window(std::vector<NodeId>{3});
  w.close_window({});
  CHECK(w.global_centrality() == 2.0);  // windows scored 3, then 1 for the ongoing contact
}

TEST_CASE("Bubble Rap forwarding rule table") {
  BubbleParams params;
  params.k = 50;  // only familiarity admits
  auto make = [&](NodeId self, std::vector<NodeId> members, int centrality) {
    BubbleState s(self, 8, params);
    for (NodeId m : members) s.record_contact(m, kHour, BubbleState(m, 8, params));
    for (int i = 0; i < centrality; ++i) s.note_encounter(static_cast<NodeId>((self + 1 + i) % 8));
    s.close_window({});
    return s;
  };
  const NodeId dst = 7;
  // peer shares the destination's community, self does not
  CHECK(bubble_forward_decision(make(0, {}, 5), make(1, {dst}, 1), dst));
  CHECK_FALSE(bubble_forward_decision(make(0, {dst}, 1), make(1, {}, 5), dst));
  // neither: global centrality decides, strictly
  CHECK(bubble_forward_decision(make(0, {}, 2), make(1, {}, 5), dst));
  CHECK_FALSE(bubble_forward_decision(make(0, {}, 5), make(1, {}, 2), dst));
  CHECK_FALSE(bubble_forward_decision(make(0, {}, 3), make(1, {}, 3), dst));
  // both: local centrality decides
  const auto self = make(0, {dst, 2}, 0);
  auto peer = make(1, {dst}, 0);
  CHECK_FALSE(bubble_forward_decision(self, peer, dst));
  const auto busy_peer = make(1, {dst, 2, 3}, 3);  // meets 2, 3, 4: local 2
  CHECK(busy_peer.local_centrality() == 2.0);
  CHECK(bubble_forward_decision(make(0, {dst}, 0), busy_peer, dst));
}
