#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "cv2x/config.hpp"
#include "cv2x/rng.hpp"

namespace cv2x::traffic {

struct Packet {
  MessageType type = MessageType::Cam;
  std::int64_t birth_slot = 0;
  int retrans_remaining = 0;

  friend bool operator==(const Packet&, const Packet&) = default;
};

/// s_n per message type; at most one entry is set.
struct TransmitAction {
  std::array<bool, kNumMessageTypes> serve{};

  std::optional<MessageType> selected() const;
  bool any() const { return selected().has_value(); }
  static TransmitAction none() { return {}; }
  static TransmitAction of(MessageType t);
};

struct QueuePolicy {
  int capacity = 5;
  QueueDiscipline discipline = QueueDiscipline::Priority;
  int retrans_period_hpd = 100;
  int retrans_period_denm = 500;

  static QueuePolicy from(const ScenarioConfig& cfg);
};

/// Per-vehicle transmit buffer: four strict-priority FIFO queues (or one
/// shared FIFO in the baseline discipline), plus the schedule of pending
/// retransmission copies.
///
/// Packets store their birth slot; the in-queue age is `now() - birth_slot`.
/// Each call to age_and_dequeue advances `now()` by one slot, which is the
/// per-slot +1 of the age recursion.
class PriorityQueueSet {
 public:
  explicit PriorityQueueSet(QueuePolicy policy = {}, std::int64_t now = 0);

  std::int64_t now() const { return now_; }
  const QueuePolicy& policy() const { return policy_; }

  /// Accepts the packet if its queue holds fewer than `capacity` packets.
  /// Returns false (dropped, state unchanged) otherwise. Packets are kept
  /// ordered by birth slot; equal births keep arrival order.
  bool enqueue(const Packet& pkt);

  /// Highest-priority nonempty queue is served; all zero when empty.
  TransmitAction select_action() const;

  /// Departs the head of the served queue (if any) and advances one slot.
  /// A departing packet with retrans_remaining > 0 schedules a copy with one
  /// fewer remaining, due `retrans_period` slots after this slot.
  /// Throws InternalFault if the action names an empty queue.
  std::optional<Packet> age_and_dequeue(const TransmitAction& action);

  /// Removes and returns the copies due at `slot` (or earlier), oldest first.
  std::vector<Packet> release_due(std::int64_t slot);

  std::size_t length(MessageType t) const;
  std::size_t total_length() const;
  bool empty() const { return total_length() == 0; }

  /// Ages of queued packets of type `t`, head to tail.
  std::vector<std::int64_t> ages(MessageType t) const;
  /// Sum of ages of queued packets of type `t`.
  std::int64_t age_sum(MessageType t) const;
  std::int64_t total_age_sum() const;
  /// Births of type `t` packets, head to tail.
  std::vector<std::int64_t> births(MessageType t) const;

  std::size_t pending_retransmissions() const { return pending_.size(); }

 private:
  std::deque<Packet>& lane_for(MessageType t);
  const std::deque<Packet>& lane_for(MessageType t) const;
  int retrans_period(MessageType t) const;

  QueuePolicy policy_;
  std::int64_t now_;
  std::vector<std::deque<Packet>> lanes_;
  std::array<std::size_t, kNumMessageTypes> counts_{};
  std::array<std::int64_t, kNumMessageTypes> birth_sums_{};
  struct Pending {
    std::int64_t due;
    Packet packet;
  };
  std::vector<Pending> pending_;
};

/// P(exactly one arrival in a slot) for a Poisson rate: lambda * e^-lambda.
double arrival_probability(double lambda);

/// Draws the new packets of one vehicle for one slot, in priority order.
/// HPD/DENM/MHD arrive by Bernoulli(lambda e^-lambda); CAM arrives when
/// (slot - cam_phase) mod T_c == 0 (or Bernoulli(1/T_c) in that mode).
/// Consumes a fixed number of draws per call.
std::vector<Packet> generate_arrivals(RandomStream& rng, std::int64_t slot,
                                      const ValidatedConfig& cfg, int cam_phase);

/// Retransmissions carried by a fresh packet of type `t`.
int initial_retransmissions(MessageType t, const ScenarioConfig& cfg);

}  // namespace cv2x::traffic
