#include "cv2x/traffic.hpp"

#include <algorithm>
#include <cmath>

#include "cv2x/errors.hpp"

namespace cv2x::traffic {

std::optional<MessageType> TransmitAction::selected() const {
  for (auto t : kPriorityOrder)
    if (serve[index_of(t)]) return t;
  return std::nullopt;
}

TransmitAction TransmitAction::of(MessageType t) {
  TransmitAction a;
  a.serve[index_of(t)] = true;
  return a;
}

QueuePolicy QueuePolicy::from(const ScenarioConfig& cfg) {
  return {cfg.queue_capacity, cfg.queue_discipline, cfg.retrans_period_hpd,
          cfg.retrans_period_denm};
}

PriorityQueueSet::PriorityQueueSet(QueuePolicy policy, std::int64_t now)
    : policy_(policy),
      now_(now),
      lanes_(policy.discipline == QueueDiscipline::Priority ? kNumMessageTypes : 1) {}

std::deque<Packet>& PriorityQueueSet::lane_for(MessageType t) {
  return lanes_.size() == 1 ? lanes_.front() : lanes_[index_of(t)];
}

const std::deque<Packet>& PriorityQueueSet::lane_for(MessageType t) const {
  return lanes_.size() == 1 ? lanes_.front() : lanes_[index_of(t)];
}

int PriorityQueueSet::retrans_period(MessageType t) const {
  return t == MessageType::Hpd ? policy_.retrans_period_hpd : policy_.retrans_period_denm;
}

bool PriorityQueueSet::enqueue(const Packet& pkt) {
  auto& lane = lane_for(pkt.type);
  // The shared FIFO holds as many packets as the four priority queues together.
  const std::size_t capacity = static_cast<std::size_t>(policy_.capacity) * (lanes_.size() == 1 ? kNumMessageTypes : 1);
  if (lane.size() >= capacity) return false;
  // Retransmission copies carry an older birth slot; keep births non-decreasing.
  auto pos = std::upper_bound(lane.begin(), lane.end(), pkt.birth_slot,
                              [](std::int64_t b, const Packet& p) { return b < p.birth_slot; });
  lane.insert(pos, pkt);
  counts_[index_of(pkt.type)] += 1;
  birth_sums_[index_of(pkt.type)] += pkt.birth_slot;
  return true;
}

TransmitAction PriorityQueueSet::select_action() const {
  if (lanes_.size() == 1) {
    if (lanes_.front().empty()) return TransmitAction::none();
    return TransmitAction::of(lanes_.front().front().type);
  }
  for (auto t : kPriorityOrder)
    if (!lanes_[index_of(t)].empty()) return TransmitAction::of(t);
  return TransmitAction::none();
}

std::optional<Packet> PriorityQueueSet::age_and_dequeue(const TransmitAction& action) {
  std::optional<Packet> departed;
  if (const auto t = action.selected()) {
    auto& lane = lane_for(*t);
    CV2X_CHECK(!lane.empty() && lane.front().type == *t,
               "transmit action names an empty queue (" + std::string(to_string(*t)) + ")");
    departed = lane.front();
    lane.pop_front();
    counts_[index_of(*t)] -= 1;
    birth_sums_[index_of(*t)] -= departed->birth_slot;
    if (departed->retrans_remaining > 0) {
      Packet copy = *departed;
      copy.retrans_remaining -= 1;
      pending_.push_back({now_ + retrans_period(*t), copy});
    }
  }
  ++now_;
  return departed;
}

std::vector<Packet> PriorityQueueSet::release_due(std::int64_t slot) {
  std::vector<Packet> due;
  auto split = std::stable_partition(pending_.begin(), pending_.end(),
                                     [slot](const Pending& p) { return p.due > slot; });
  for (auto it = split; it != pending_.end(); ++it) due.push_back(it->packet);
  pending_.erase(split, pending_.end());
  std::stable_sort(due.begin(), due.end(),
                   [](const Packet& a, const Packet& b) { return a.birth_slot < b.birth_slot; });
  return due;
}

std::size_t PriorityQueueSet::length(MessageType t) const { return counts_[index_of(t)]; }

std::size_t PriorityQueueSet::total_length() const {
  std::size_t n = 0;
  for (auto c : counts_) n += c;
  return n;
}

std::vector<std::int64_t> PriorityQueueSet::births(MessageType t) const {
  std::vector<std::int64_t> out;
  for (const auto& p : lane_for(t))
    if (p.type == t) out.push_back(p.birth_slot);
  return out;
}

std::vector<std::int64_t> PriorityQueueSet::ages(MessageType t) const {
  auto out = births(t);
  for (auto& b : out) b = now_ - b;
  return out;
}

std::int64_t PriorityQueueSet::age_sum(MessageType t) const {
  return static_cast<std::int64_t>(counts_[index_of(t)]) * now_ - birth_sums_[index_of(t)];
}

std::int64_t PriorityQueueSet::total_age_sum() const {
  std::int64_t s = 0;
  for (auto t : kPriorityOrder) s += age_sum(t);
  return s;
}

double arrival_probability(double lambda) { return lambda * std::exp(-lambda); }

int initial_retransmissions(MessageType t, const ScenarioConfig& cfg) {
  switch (t) {
    case MessageType::Hpd: return cfg.retrans_count_hpd - 1;
    case MessageType::Denm: return cfg.retrans_count_denm - 1;
    default: return 0;
  }
}

std::vector<Packet> generate_arrivals(RandomStream& rng, std::int64_t slot,
                                      const ValidatedConfig& vcfg, int cam_phase) {
  const auto& cfg = vcfg.config();
  std::vector<Packet> out;
  // Fixed draw order and count keeps the stream aligned whatever the outcome.
  const double u_hpd = rng.uniform();
  const double u_denm = rng.uniform();
  const double u_cam = rng.uniform();
  const double u_mhd = rng.uniform();

  auto emit = [&](MessageType t) { out.push_back({t, slot, initial_retransmissions(t, cfg)}); };
  if (u_hpd < vcfg.arrival_probability(MessageType::Hpd)) emit(MessageType::Hpd);
  if (u_denm < vcfg.arrival_probability(MessageType::Denm)) emit(MessageType::Denm);
  const bool cam = cfg.cam_mode == CamMode::Periodic
                       ? ((slot - cam_phase) % cfg.cam_period + cfg.cam_period) % cfg.cam_period == 0
                       : u_cam < vcfg.cam_probability();
  if (cam) emit(MessageType::Cam);
  if (u_mhd < vcfg.arrival_probability(MessageType::Mhd)) emit(MessageType::Mhd);
  return out;
}

}  // namespace cv2x::traffic
