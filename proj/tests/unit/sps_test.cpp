#include <doctest.h>

#include <set>

#include "cv2x/errors.hpp"
#include "cv2x/sps.hpp"

using namespace cv2x;
using namespace cv2x::sps;

namespace {

SpsParams params(int rri, double p_rk = 1.0, bool decrement = false) {
  return {rri, rri, 5, p_rk, decrement};
}

SpsState held(int rc, std::int64_t next, Resource r = {3, 2}) { return {rc, r, next}; }

}  // namespace

TEST_CASE("initial reselection counter ranges") {
  struct Case {
    int rri, lo, hi;
  };
  for (auto [rri, lo, hi] : {Case{100, 5, 14}, Case{20, 25, 74}, Case{50, 10, 29}}) {
    RandomStream rng(1, static_cast<std::uint64_t>(rri), StreamTag::Scheduling);
    std::set<int> seen;
    for (int k = 0; k < 20000; ++k) {
      const int rc = init_rc(rri, rng);
      REQUIRE(rc >= lo);
      REQUIRE(rc <= hi);
      seen.insert(rc);
    }
    CHECK(static_cast<int>(seen.size()) == hi - lo + 1);
  }
}

TEST_CASE("candidate set is window x subchannels") {
  RandomStream rng(2, 0, StreamTag::Scheduling);
  std::set<std::pair<int, int>> seen;
  for (int k = 0; k < 20000; ++k) {
    const auto r = select_resource(20, 5, rng);
    REQUIRE(r.subframe_offset >= 0);
    REQUIRE(r.subframe_offset < 20);
    REQUIRE(r.subchannel >= 0);
    REQUIRE(r.subchannel < 5);
    seen.insert({r.subframe_offset, r.subchannel});
  }
  CHECK(seen.size() == 100);
}

TEST_CASE("a singleton candidate set is deterministic") {
  RandomStream rng(3, 0, StreamTag::Scheduling);
  for (int k = 0; k < 10; ++k) CHECK(select_resource(1, 1, rng) == Resource{0, 0});
  CHECK_THROWS_AS(select_resource(0, 5, rng), InternalFault);
}

TEST_CASE("two independent draws collide with probability 1/CSR") {
  // Exhaustive over the joint draw: count matching pairs among CSR^2 outcomes.
  const int csr = 100;
  int matches = 0;
  for (int a = 0; a < csr; ++a)
    for (int b = 0; b < csr; ++b) matches += a == b;
  CHECK(static_cast<double>(matches) / (csr * csr) == doctest::Approx(1.0 / csr));

  // Empirical check of the sampler against it.
  int hits = 0;
  const int trials = 200000;
  RandomStream u(4, 0, StreamTag::Scheduling), v(4, 1, StreamTag::Scheduling);
  for (int k = 0; k < trials; ++k) hits += select_resource(20, 5, u) == select_resource(20, 5, v);
  CHECK(static_cast<double>(hits) / trials == doctest::Approx(0.01).epsilon(0.1));
}

TEST_CASE("countdown step at the reserved slot") {
  RandomStream rng(5, 0, StreamTag::Scheduling);
  const auto out = on_transmit_opportunity(held(3, 40), 40, true, rng, params(100));
  CHECK(out.transmit_now);
  CHECK(out.opportunity);
  CHECK(out.state.rc == 2);
  CHECK(out.state.next_tx_slot == 140);
  CHECK(out.state.reserved == Resource{3, 2});
  CHECK_FALSE(out.rc_expired);
}

TEST_CASE("no transmission away from the reserved slot") {
  RandomStream rng(5, 0, StreamTag::Scheduling);
  const auto out = on_transmit_opportunity(held(3, 40), 39, true, rng, params(100));
  CHECK_FALSE(out.transmit_now);
  CHECK_FALSE(out.opportunity);
  CHECK(out.state.rc == 3);
  CHECK(out.state.next_tx_slot == 40);
}

TEST_CASE("last use triggers reselection with p_rk = 1") {
  RandomStream rng(6, 0, StreamTag::Scheduling);
  const auto out = on_transmit_opportunity(held(1, 40), 40, true, rng, params(100, 1.0));
  CHECK(out.transmit_now);
  CHECK(out.rc_expired);
  CHECK(out.reselected);
  CHECK(out.state.rc >= 5);
  CHECK(out.state.rc <= 14);
  CHECK(out.state.next_tx_slot >= 41);
  CHECK(out.state.next_tx_slot <= 140);
  CHECK(out.state.next_tx_slot == 41 + out.state.reserved->subframe_offset);
}

TEST_CASE("last use keeps the resource with p_rk = 0") {
  RandomStream rng(6, 0, StreamTag::Scheduling);
  const auto out = on_transmit_opportunity(held(1, 40), 40, true, rng, params(100, 0.0));
  CHECK(out.rc_expired);
  CHECK_FALSE(out.reselected);
  CHECK(out.state.reserved == Resource{3, 2});
  CHECK(out.state.next_tx_slot == 140);
  CHECK(out.state.rc >= 5);
}

TEST_CASE("an empty queue does not burn the grant") {
  RandomStream rng(7, 0, StreamTag::Scheduling);
  const auto out = on_transmit_opportunity(held(1, 40), 40, false, rng, params(50));
  CHECK_FALSE(out.transmit_now);
  CHECK(out.opportunity);
  CHECK(out.state.rc == 1);
  CHECK(out.state.next_tx_slot == 90);
  CHECK_FALSE(out.rc_expired);

  const auto burned = on_transmit_opportunity(held(1, 40), 40, false, rng, params(50, 1.0, true));
  CHECK_FALSE(burned.transmit_now);
  CHECK(burned.rc_expired);
}

TEST_CASE("a skipped reserved slot is an internal fault") {
  RandomStream rng(8, 0, StreamTag::Scheduling);
  CHECK_THROWS_AS(on_transmit_opportunity(held(2, 40), 41, true, rng, params(100)), InternalFault);
  CHECK_THROWS_AS(on_transmit_opportunity(SpsState{}, 0, true, rng, params(100)), InternalFault);
}
