#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "cv2x/aoi.hpp"
#include "cv2x/analytic.hpp"
#include "cv2x/config.hpp"
#include "cv2x/mobility.hpp"
#include "cv2x/rng.hpp"
#include "cv2x/sps.hpp"
#include "cv2x/traffic.hpp"

namespace cv2x::engine {

struct SlotReport {
  std::int64_t slot = 0;
  double phi_bar = 0.0;   // mean in-queue age after the slot
  double delta_t = 0.0;   // mean receiver age after the slot
  int tx = 0;
  int rx_success = 0;
  int rx_attempts = 0;
  int collisions = 0;     // resources with >= 2 transmitters and a common receiver
  int drops = 0;
  int reselections = 0;   // events counted towards pi
  int collided_tx = 0;    // transmissions sent on a collided resource
  std::array<std::int64_t, kNumMessageTypes> type_age_sum{};
  std::array<std::int64_t, kNumMessageTypes> type_count{};
  /// Per type: mean over vehicles of that queue's mean age, empty queue as 0.
  std::array<double, kNumMessageTypes> type_phi{};
};

/// One line of the event log used by the brute-force AoI check.
struct TraceEvent {
  enum class Kind { Enqueue, Drop, Departure, Reception };
  Kind kind = Kind::Enqueue;
  std::int64_t slot = 0;
  int vehicle = 0;  // owner / transmitter
  int peer = -1;    // receiver, for Reception
  MessageType type = MessageType::Cam;
  std::int64_t birth_slot = 0;
};

struct RunOptions {
  bool keep_series = true;
  bool record_trace = false;
};

struct SimulationSummary {
  std::int64_t slots = 0;
  std::int64_t measured_slots = 0;  // after discard_slots
  std::optional<double> success_rate;
  double mean_phi_bar = 0.0;
  double mean_delta = 0.0;
  std::int64_t transmissions = 0;
  std::int64_t rx_success = 0;
  std::int64_t rx_attempts = 0;
  std::int64_t collisions = 0;
  std::int64_t collided_transmissions = 0;
  std::int64_t drops = 0;
  std::int64_t reselection_events = 0;
  std::optional<double> pi_estimate;
  std::optional<double> p_ncol_analytic;
  std::optional<double> mc_non_collision;
  /// Time average of SlotReport::type_phi.
  std::array<double, kNumMessageTypes> queue_aoi_by_type{};
  /// Packet-slot weighted mean age per type over queued packets, absent if never queued.
  std::array<std::optional<double>, kNumMessageTypes> queued_age_by_type{};
  std::uint64_t state_digest = 0;

  friend bool operator==(const SimulationSummary&, const SimulationSummary&) = default;
};

/// Folds slot reports (after the discard prefix) into a summary.
class SummaryAccumulator {
 public:
  explicit SummaryAccumulator(std::int64_t discard_slots = 0) : discard_(discard_slots) {}
  void add(const SlotReport& r);
  SimulationSummary finalize(const ValidatedConfig& cfg) const;
  analytic::SchedulerTelemetry telemetry(int num_vehicles) const;

 private:
  std::int64_t discard_;
  std::int64_t slots_ = 0;
  std::int64_t measured_ = 0;
  double phi_bar_sum_ = 0.0;
  double delta_sum_ = 0.0;
  std::int64_t tx_ = 0, rx_success_ = 0, rx_attempts_ = 0, collisions_ = 0, collided_tx_ = 0,
               drops_ = 0, reselections_ = 0;
  std::array<std::int64_t, kNumMessageTypes> type_age_{};
  std::array<std::int64_t, kNumMessageTypes> type_count_{};
  std::array<double, kNumMessageTypes> type_phi_sum_{};
};

struct SimulationReport {
  std::vector<SlotReport> series;
  std::vector<TraceEvent> trace;
  SimulationSummary summary;
  analytic::SchedulerTelemetry telemetry;
};

struct Vehicle {
  mobility::VehiclePose pose;
  traffic::PriorityQueueSet queues;
  sps::SpsState sps;
  int cam_phase = 0;
  RandomStream arrivals_rng;
  RandomStream sps_rng;
};

/// Slot-by-slot C-V2X Mode 4 broadcast simulation.
///
/// Each slot runs, in order: mobility, arrivals (due retransmission copies
/// first, then new packets), SPS opportunity check, queue service and aging,
/// co-channel grouping and SINR per eligible receiver, decoding, receiver-age
/// update, reporting. Vehicles that transmit in a slot receive nothing in it.
class Simulation {
 public:
  explicit Simulation(const ValidatedConfig& cfg, RunOptions options = {});

  const ValidatedConfig& config() const { return cfg_; }
  std::int64_t slot() const { return slot_; }
  bool done() const { return slot_ >= cfg_.config().sim_duration; }

  const std::vector<Vehicle>& vehicles() const { return vehicles_; }
  const aoi::ReceiverAoiMatrix& receiver_aoi() const { return phi_; }
  const std::vector<SlotReport>& series() const { return series_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }

  /// Replaces a vehicle's SPS state (test hook).
  void set_grant(int vehicle, const sps::SpsState& state);

  /// Simulates one slot and returns its report.
  const SlotReport& step();
  void run_to_end();

  /// Hash of the full dynamic state (poses, queues, grants, receiver ages).
  std::uint64_t state_digest() const;

  SimulationReport finish() &&;

 private:
  void record(const TraceEvent& e) {
    if (options_.record_trace) trace_.push_back(e);
  }

  struct Occupant {
    int vehicle;
    int subchannel;
    bool carries_packet;
  };

  ValidatedConfig cfg_;
  RunOptions options_;
  sps::SpsParams sps_params_;
  std::int64_t slot_ = 0;
  std::vector<Vehicle> vehicles_;
  aoi::ReceiverAoiMatrix phi_;
  std::vector<SlotReport> series_;
  std::vector<TraceEvent> trace_;
  SlotReport last_;
  SummaryAccumulator acc_;
  // Per-slot scratch.
  std::vector<Occupant> occupants_;
  std::unique_ptr<bool[]> transmitting_;
  std::vector<std::int64_t> head_ages_;
  std::vector<traffic::TransmitAction> actions_;
  std::vector<aoi::Reception> successes_;
};

/// Runs a whole scenario.
SimulationReport run(const ValidatedConfig& cfg, RunOptions options = {});

/// Recomputes the summary from a full per-slot series.
SimulationSummary summarize(const std::vector<SlotReport>& series, const ValidatedConfig& cfg);

}  // namespace cv2x::engine
