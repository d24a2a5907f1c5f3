#include <doctest.h>

#include <vector>

#include "cv2x/errors.hpp"
#include "cv2x/traffic.hpp"

using namespace cv2x;
using namespace cv2x::traffic;

namespace {

Packet pkt(MessageType t, std::int64_t birth, int retrans = 0) { return {t, birth, retrans}; }

/// Advances an idle queue set to slot `now`.
void idle_until(PriorityQueueSet& q, std::int64_t now) {
  while (q.now() < now) q.age_and_dequeue(TransmitAction::none());
}

}  // namespace

TEST_CASE("arrival probability is lambda e^-lambda") {
  CHECK(arrival_probability(1e-4) == doctest::Approx(9.999000049998333e-05).epsilon(1e-14));
  CHECK(arrival_probability(0.0) == 0.0);
}

TEST_CASE("zero rates never produce event packets") {
  ScenarioConfig c;
  c.lambda_hpd = c.lambda_denm = c.lambda_mhd = 0.0;
  const auto v = ValidatedConfig::validate(c);
  RandomStream rng(5, 0, StreamTag::Arrivals);
  for (std::int64_t t = 0; t < 20000; ++t)
    for (const auto& p : generate_arrivals(rng, t, v, 7)) CHECK(p.type == MessageType::Cam);
}

TEST_CASE("periodic CAM follows the phase") {
  ScenarioConfig c;
  c.lambda_hpd = c.lambda_denm = c.lambda_mhd = 0.0;
  const auto v = ValidatedConfig::validate(c);
  RandomStream rng(5, 0, StreamTag::Arrivals);
  std::vector<std::int64_t> cam_slots;
  for (std::int64_t t = 0; t < 300; ++t)
    for (const auto& p : generate_arrivals(rng, t, v, 7)) {
      CHECK(p.birth_slot == t);
      CHECK(p.retrans_remaining == 0);
      cam_slots.push_back(t);
    }
  CHECK(cam_slots == std::vector<std::int64_t>{7, 107, 207});
}

TEST_CASE("fresh packets carry the configured retransmissions") {
  ScenarioConfig c;
  c.lambda_hpd = c.lambda_denm = c.lambda_mhd = 1.0;  // arrival probability e^-1
  const auto v = ValidatedConfig::validate(c);
  RandomStream rng(9, 3, StreamTag::Arrivals);
  int seen[4] = {};
  for (std::int64_t t = 0; t < 200; ++t) {
    const auto arrivals = generate_arrivals(rng, t, v, 0);
    for (std::size_t k = 1; k < arrivals.size(); ++k)
      CHECK(higher_priority(arrivals[k - 1].type, arrivals[k].type));
    for (const auto& p : arrivals) {
      ++seen[index_of(p.type)];
      switch (p.type) {
        case MessageType::Hpd: CHECK(p.retrans_remaining == 7); break;
        case MessageType::Denm: CHECK(p.retrans_remaining == 4); break;
        default: CHECK(p.retrans_remaining == 0);
      }
    }
  }
  for (int n : seen) CHECK(n > 0);
}

TEST_CASE("enqueue and drop at capacity") {
  PriorityQueueSet q({5});
  CHECK(q.enqueue(pkt(MessageType::Cam, 0)));
  CHECK(q.length(MessageType::Cam) == 1);
  for (int k = 1; k < 5; ++k) CHECK(q.enqueue(pkt(MessageType::Cam, 0)));
  CHECK_FALSE(q.enqueue(pkt(MessageType::Cam, 0)));
  CHECK(q.length(MessageType::Cam) == 5);
  CHECK(q.enqueue(pkt(MessageType::Mhd, 0)));  // capacity is per type
}

TEST_CASE("same-slot packets keep FIFO order") {
  PriorityQueueSet q;
  q.enqueue(pkt(MessageType::Denm, 4, 1));
  q.enqueue(pkt(MessageType::Denm, 4, 2));
  idle_until(q, 6);
  auto first = q.age_and_dequeue(TransmitAction::of(MessageType::Denm));
  REQUIRE(first);
  CHECK(first->retrans_remaining == 1);
  CHECK(q.births(MessageType::Denm) == std::vector<std::int64_t>{4});
}

TEST_CASE("select_action serves the highest nonempty queue") {
  PriorityQueueSet q;
  CHECK_FALSE(q.select_action().any());
  q.enqueue(pkt(MessageType::Cam, 0));
  q.enqueue(pkt(MessageType::Cam, 0));
  q.enqueue(pkt(MessageType::Mhd, 0));
  CHECK(q.select_action().selected() == MessageType::Cam);
  q.enqueue(pkt(MessageType::Hpd, 0));
  const auto a = q.select_action();
  CHECK(a.selected() == MessageType::Hpd);
  int set = 0;
  for (bool s : a.serve) set += s;
  CHECK(set == 1);
}

TEST_CASE("aging without service") {
  PriorityQueueSet q({5}, 0);
  q.enqueue(pkt(MessageType::Cam, 0));
  idle_until(q, 2);
  q.enqueue(pkt(MessageType::Cam, 2));
  idle_until(q, 4);
  q.enqueue(pkt(MessageType::Cam, 4));
  idle_until(q, 5);
  CHECK(q.ages(MessageType::Cam) == std::vector<std::int64_t>{5, 3, 1});
  q.age_and_dequeue(TransmitAction::none());
  CHECK(q.ages(MessageType::Cam) == std::vector<std::int64_t>{6, 4, 2});
}

TEST_CASE("service departs the head and shifts the rest") {
  PriorityQueueSet q({5}, 0);
  q.enqueue(pkt(MessageType::Cam, 0));
  idle_until(q, 2);
  q.enqueue(pkt(MessageType::Cam, 2));
  idle_until(q, 4);
  q.enqueue(pkt(MessageType::Cam, 4));
  idle_until(q, 5);
  const auto d = q.age_and_dequeue(TransmitAction::of(MessageType::Cam));
  REQUIRE(d);
  CHECK(5 - d->birth_slot == 5);
  CHECK(q.ages(MessageType::Cam) == std::vector<std::int64_t>{4, 2});
}

TEST_CASE("empty queue stays empty") {
  PriorityQueueSet q;
  CHECK_FALSE(q.age_and_dequeue(TransmitAction::none()));
  CHECK(q.empty());
  CHECK(q.total_age_sum() == 0);
}

TEST_CASE("serving an empty queue is an internal fault") {
  PriorityQueueSet q;
  q.enqueue(pkt(MessageType::Mhd, 0));
  CHECK_THROWS_AS(q.age_and_dequeue(TransmitAction::of(MessageType::Hpd)), InternalFault);
}

TEST_CASE("retransmission copies inherit the birth slot") {
  PriorityQueueSet q({5, QueueDiscipline::Priority, 100, 500}, 10);
  q.enqueue(pkt(MessageType::Hpd, 10, 2));
  auto d = q.age_and_dequeue(TransmitAction::of(MessageType::Hpd));
  REQUIRE(d);
  CHECK(q.pending_retransmissions() == 1);
  CHECK(q.release_due(109).empty());
  auto due = q.release_due(110);
  REQUIRE(due.size() == 1);
  CHECK(due[0] == pkt(MessageType::Hpd, 10, 1));

  PriorityQueueSet r({5, QueueDiscipline::Priority, 100, 500}, 3);
  r.enqueue(pkt(MessageType::Denm, 3, 1));
  r.age_and_dequeue(TransmitAction::of(MessageType::Denm));
  CHECK(r.release_due(503).size() == 1);
}

TEST_CASE("a copy is placed by birth among newer packets") {
  PriorityQueueSet q({5}, 200);
  q.enqueue(pkt(MessageType::Hpd, 150));
  q.enqueue(pkt(MessageType::Hpd, 100, 3));
  q.enqueue(pkt(MessageType::Hpd, 180));
  CHECK(q.births(MessageType::Hpd) == std::vector<std::int64_t>{100, 150, 180});
}

TEST_CASE("single FIFO serves in arrival order regardless of type") {
  PriorityQueueSet q({2, QueueDiscipline::SingleFifo}, 0);
  q.enqueue(pkt(MessageType::Mhd, 0));
  q.enqueue(pkt(MessageType::Hpd, 0));
  CHECK(q.select_action().selected() == MessageType::Mhd);
  q.age_and_dequeue(q.select_action());
  CHECK(q.select_action().selected() == MessageType::Hpd);
  // Shared capacity is four times the per-type capacity.
  PriorityQueueSet f({2, QueueDiscipline::SingleFifo}, 0);
  int accepted = 0;
  for (int k = 0; k < 10; ++k) accepted += f.enqueue(pkt(MessageType::Cam, 0));
  CHECK(accepted == 8);
}
