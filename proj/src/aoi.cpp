#include "cv2x/aoi.hpp"

#include <stdexcept>

#include "cv2x/errors.hpp"

namespace cv2x::aoi {

ReceiverAoiMatrix::ReceiverAoiMatrix(int num_vehicles)
    : n_(num_vehicles),
      base_(static_cast<std::size_t>(num_vehicles) * num_vehicles, 0),
      stamp_(static_cast<std::size_t>(num_vehicles) * num_vehicles, 0) {
  CV2X_CHECK(num_vehicles >= 0, "negative vehicle count");
}

std::int64_t ReceiverAoiMatrix::at(int tx, int rx) const {
  if (tx == rx) return 0;
  const auto k = idx(tx, rx);
  return base_[k] + (now_ - stamp_[k]);
}

double ReceiverAoiMatrix::running_mean() const {
  const auto pairs = static_cast<std::int64_t>(n_) * (n_ - 1);
  return pairs > 0 ? static_cast<double>(total_) / static_cast<double>(pairs) : 0.0;
}

void ReceiverAoiMatrix::advance(std::span<const Reception> successes,
                                std::span<const std::int64_t> head_ages,
                                std::span<const bool> transmitting) {
  CV2X_CHECK(head_ages.size() == static_cast<std::size_t>(n_) &&
                 transmitting.size() == static_cast<std::size_t>(n_),
             "per-vehicle spans must have Nv entries");
  const std::int64_t next = now_ + 1;
  total_ += static_cast<std::int64_t>(n_) * (n_ - 1);
  for (const auto& r : successes) {
    CV2X_CHECK(r.tx != r.rx && r.tx >= 0 && r.rx >= 0 && r.tx < n_ && r.rx < n_,
               "malformed reception pair");
    CV2X_CHECK(transmitting[r.tx], "reception from a vehicle that did not transmit");
    CV2X_CHECK(!transmitting[r.rx], "half-duplex violation: receiver " + std::to_string(r.rx) +
                                        " transmitted in the same slot");
    const auto k = idx(r.tx, r.rx);
    const std::int64_t aged = base_[k] + (next - stamp_[k]);
    const std::int64_t fresh = head_ages[r.tx] + 1;
    total_ += fresh - aged;
    base_[k] = fresh;
    stamp_[k] = next;
  }
  now_ = next;
}

ReceiverAoiMatrix update_receiver_aoi(ReceiverAoiMatrix phi, std::span<const Reception> successes,
                                      std::span<const std::int64_t> head_ages,
                                      std::span<const bool> transmitting) {
  phi.advance(successes, head_ages, transmitting);
  return phi;
}

double mean_receiver_aoi(const ReceiverAoiMatrix& phi) {
  const int n = phi.size();
  if (n < 2) throw std::invalid_argument("mean_receiver_aoi: need at least two vehicles");
  std::int64_t sum = 0;
  for (int rx = 0; rx < n; ++rx)
    for (int tx = 0; tx < n; ++tx)
      if (tx != rx) sum += phi.at(tx, rx);
  return static_cast<double>(sum) / (static_cast<double>(n) * (n - 1));
}

double mean_queue_aoi(std::span<const traffic::PriorityQueueSet> queues, QueueAoiMean mode) {
  return mean_queue_aoi(queues, [](const traffic::PriorityQueueSet& q) -> const auto& { return q; },
                        mode);
}

std::optional<double> success_rate(std::span<const SuccessTally> per_slot) {
  std::int64_t s = 0, a = 0;
  for (const auto& t : per_slot) {
    s += t.successes;
    a += t.attempts;
  }
  if (a == 0) return std::nullopt;
  return static_cast<double>(s) / static_cast<double>(a);
}

}  // namespace cv2x::aoi
