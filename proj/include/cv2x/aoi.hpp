#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "cv2x/config.hpp"
#include "cv2x/traffic.hpp"

namespace cv2x::aoi {

/// A successful reception tx -> rx in the current slot.
struct Reception {
  int tx = 0;
  int rx = 0;
};

/// Receiver-side age of every ordered pair (tx -> rx), in slots.
///
/// Storage is lazy: each entry keeps the value it was last set to and the slot
/// at which that happened, so advancing a slot is O(successes) rather than
/// O(Nv^2). A running total backs the incremental mean.
class ReceiverAoiMatrix {
 public:
  explicit ReceiverAoiMatrix(int num_vehicles);

  int size() const { return n_; }
  std::int64_t now() const { return now_; }

  /// Current age of what `rx` knows about `tx`. Diagonal is 0.
  std::int64_t at(int tx, int rx) const;

  /// Incrementally maintained mean over all ordered pairs.
  double running_mean() const;
  std::int64_t running_total() const { return total_; }

  /// One slot of the receiver-age recursion. A success sets the entry to the
  /// transmitter's head age plus one; every other entry grows by one.
  /// `transmitting[v]` flags vehicles that transmitted this slot; a success
  /// naming a transmitting receiver is an InternalFault.
  void advance(std::span<const Reception> successes, std::span<const std::int64_t> head_ages,
               std::span<const bool> transmitting);

 private:
  std::size_t idx(int tx, int rx) const { return static_cast<std::size_t>(tx) * n_ + rx; }

  int n_;
  std::int64_t now_ = 0;
  std::vector<std::int64_t> base_;
  std::vector<std::int64_t> stamp_;
  std::int64_t total_ = 0;
};

/// Free-function form of ReceiverAoiMatrix::advance.
ReceiverAoiMatrix update_receiver_aoi(ReceiverAoiMatrix phi, std::span<const Reception> successes,
                                      std::span<const std::int64_t> head_ages,
                                      std::span<const bool> transmitting);

/// Mean over all Nv(Nv-1) ordered pairs, recomputed entry by entry.
/// Throws std::invalid_argument when Nv < 2.
double mean_receiver_aoi(const ReceiverAoiMatrix& phi);

/// Mean in-queue age. Flat: over every queued packet. Weighted: mean over
/// vehicles of the mean over the four types of each queue's mean age, with an
/// empty queue contributing zero. Empty system gives 0.
double mean_queue_aoi(std::span<const traffic::PriorityQueueSet> queues,
                      QueueAoiMean mode = QueueAoiMean::Flat);

/// Same, over any range; `proj` maps an element to its PriorityQueueSet.
template <class Range, class Proj>
double mean_queue_aoi(const Range& range, Proj proj, QueueAoiMean mode) {
  std::size_t vehicles = 0;
  if (mode == QueueAoiMean::Flat) {
    std::int64_t sum = 0;
    std::size_t count = 0;
    for (const auto& e : range) {
      const traffic::PriorityQueueSet& q = proj(e);
      sum += q.total_age_sum();
      count += q.total_length();
    }
    return count == 0 ? 0.0 : static_cast<double>(sum) / static_cast<double>(count);
  }
  double acc = 0.0;
  for (const auto& e : range) {
    const traffic::PriorityQueueSet& q = proj(e);
    ++vehicles;
    for (auto t : kPriorityOrder)
      if (const auto len = q.length(t); len > 0)
        acc += static_cast<double>(q.age_sum(t)) / static_cast<double>(len);
  }
  return vehicles == 0 ? 0.0 : acc / (static_cast<double>(vehicles) * kNumMessageTypes);
}

struct SuccessTally {
  std::int64_t successes = 0;
  std::int64_t attempts = 0;
};

/// successes / attempts; absent when no attempt was recorded.
std::optional<double> success_rate(std::span<const SuccessTally> per_slot);

}  // namespace cv2x::aoi
