#include "cv2x/engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "cv2x/errors.hpp"
#include "cv2x/phy.hpp"

namespace cv2x::engine {

void SummaryAccumulator::add(const SlotReport& r) {
  ++slots_;
  if (r.slot < discard_) return;
  ++measured_;
  phi_bar_sum_ += r.phi_bar;
  delta_sum_ += r.delta_t;
  tx_ += r.tx;
  rx_success_ += r.rx_success;
  rx_attempts_ += r.rx_attempts;
  collisions_ += r.collisions;
  collided_tx_ += r.collided_tx;
  drops_ += r.drops;
  reselections_ += r.reselections;
  for (std::size_t k = 0; k < kNumMessageTypes; ++k) {
    type_age_[k] += r.type_age_sum[k];
    type_count_[k] += r.type_count[k];
    type_phi_sum_[k] += r.type_phi[k];
  }
}

analytic::SchedulerTelemetry SummaryAccumulator::telemetry(int num_vehicles) const {
  return {measured_ * num_vehicles, reselections_};
}

SimulationSummary SummaryAccumulator::finalize(const ValidatedConfig& cfg) const {
  const auto& c = cfg.config();
  SimulationSummary s;
  s.slots = slots_;
  s.measured_slots = measured_;
  if (rx_attempts_ > 0)
    s.success_rate = static_cast<double>(rx_success_) / static_cast<double>(rx_attempts_);
  if (measured_ > 0) {
    s.mean_phi_bar = phi_bar_sum_ / static_cast<double>(measured_);
    s.mean_delta = delta_sum_ / static_cast<double>(measured_);
  }
  s.transmissions = tx_;
  s.rx_success = rx_success_;
  s.rx_attempts = rx_attempts_;
  s.collisions = collisions_;
  s.collided_transmissions = collided_tx_;
  s.drops = drops_;
  s.reselection_events = reselections_;
  const auto tel = telemetry(c.num_vehicles);
  if (tel.vehicle_slots > 0) {
    s.pi_estimate = analytic::estimate_pi(tel);
    try {
      s.p_ncol_analytic = analytic::p_no_collision(
          {*s.pi_estimate, c.p_rk, cfg.candidate_resources(), c.num_vehicles, c.selection_window});
    } catch (const std::domain_error&) {
      // Left absent: the estimated pi is outside the formula's domain.
    }
  }
  if (tx_ > 0) s.mc_non_collision = 1.0 - static_cast<double>(collided_tx_) / static_cast<double>(tx_);
  for (std::size_t k = 0; k < kNumMessageTypes; ++k) {
    if (measured_ > 0) s.queue_aoi_by_type[k] = type_phi_sum_[k] / static_cast<double>(measured_);
    if (type_count_[k] > 0)
      s.queued_age_by_type[k] = static_cast<double>(type_age_[k]) / static_cast<double>(type_count_[k]);
  }
  return s;
}

Simulation::Simulation(const ValidatedConfig& cfg, RunOptions options)
    : cfg_(cfg),
      options_(options),
      sps_params_(sps::SpsParams::from(cfg)),
      phi_(cfg.config().num_vehicles),
      acc_(cfg.config().discard_slots) {
  const auto& c = cfg_.config();
  const auto road = mobility::RoadGeometry::from(c);
  const auto policy = traffic::QueuePolicy::from(c);
  vehicles_.reserve(static_cast<std::size_t>(c.num_vehicles));
  for (int i = 0; i < c.num_vehicles; ++i) {
    RandomStream placement(c.rng_seed, static_cast<std::uint64_t>(i), StreamTag::Placement);
    const double x = placement.uniform(0.0, c.road_length);
    const int lane = i % c.lanes + 1;
    const int phase = static_cast<int>(placement.below(static_cast<std::uint64_t>(c.cam_period)));
    Vehicle v{mobility::make_pose(x, lane, road),
              traffic::PriorityQueueSet(policy, 0),
              {},
              phase,
              RandomStream(c.rng_seed, static_cast<std::uint64_t>(i), StreamTag::Arrivals),
              RandomStream(c.rng_seed, static_cast<std::uint64_t>(i), StreamTag::Scheduling)};
    v.sps = sps::acquire_grant(0, sps_params_, v.sps_rng);
    vehicles_.push_back(std::move(v));
  }
  transmitting_ = std::make_unique<bool[]>(static_cast<std::size_t>(c.num_vehicles));
  head_ages_.assign(static_cast<std::size_t>(c.num_vehicles), 0);
  actions_.assign(static_cast<std::size_t>(c.num_vehicles), traffic::TransmitAction::none());
  if (options_.keep_series) series_.reserve(static_cast<std::size_t>(c.sim_duration));
}

void Simulation::set_grant(int vehicle, const sps::SpsState& state) {
  CV2X_CHECK(vehicle >= 0 && vehicle < static_cast<int>(vehicles_.size()), "vehicle out of range");
  CV2X_CHECK(state.reserved.has_value() && state.next_tx_slot >= slot_, "grant must be usable");
  vehicles_[static_cast<std::size_t>(vehicle)].sps = state;
}

const SlotReport& Simulation::step() {
  const auto& c = cfg_.config();
  const int n = c.num_vehicles;
  const std::int64_t t = slot_;
  SlotReport rep;
  rep.slot = t;

  // 1. Mobility.
  for (auto& v : vehicles_) v.pose = mobility::step_position(v.pose, c.speed, c.slot_duration, c.road_length);

  // 2. Arrivals: due retransmission copies, then fresh packets.
  for (int i = 0; i < n; ++i) {
    auto& v = vehicles_[static_cast<std::size_t>(i)];
    auto admit = [&](const traffic::Packet& p) {
      const bool ok = v.queues.enqueue(p);
      if (!ok) ++rep.drops;
      record({ok ? TraceEvent::Kind::Enqueue : TraceEvent::Kind::Drop, t, i, -1, p.type, p.birth_slot});
    };
    for (const auto& p : v.queues.release_due(t)) admit(p);
    for (const auto& p : traffic::generate_arrivals(v.arrivals_rng, t, cfg_, v.cam_phase)) admit(p);
  }

  // 3. SPS opportunities.
  occupants_.clear();
  for (int i = 0; i < n; ++i) {
    auto& v = vehicles_[static_cast<std::size_t>(i)];
    const auto used = v.sps.reserved;
    const auto out = sps::on_transmit_opportunity(v.sps, t, !v.queues.empty(), v.sps_rng, sps_params_);
    v.sps = out.state;
    actions_[static_cast<std::size_t>(i)] = traffic::TransmitAction::none();
    transmitting_[static_cast<std::size_t>(i)] = false;
    if (out.transmit_now) {
      actions_[static_cast<std::size_t>(i)] = v.queues.select_action();
      occupants_.push_back({i, used->subchannel, true});
      transmitting_[static_cast<std::size_t>(i)] = true;
      if (out.reselected) ++rep.reselections;
    } else if (out.opportunity && c.occupy_when_silent) {
      occupants_.push_back({i, used->subchannel, false});
      transmitting_[static_cast<std::size_t>(i)] = true;
    }
  }

  // 4. Queue service and aging.
  for (int i = 0; i < n; ++i) {
    auto& v = vehicles_[static_cast<std::size_t>(i)];
    head_ages_[static_cast<std::size_t>(i)] = 0;
    if (auto departed = v.queues.age_and_dequeue(actions_[static_cast<std::size_t>(i)])) {
      head_ages_[static_cast<std::size_t>(i)] = t - departed->birth_slot;
      record({TraceEvent::Kind::Departure, t, i, -1, departed->type, departed->birth_slot});
      ++rep.tx;
    }
  }

  // 5-6. Co-channel groups, SINR and decoding per eligible receiver.
  successes_.clear();
  std::stable_sort(occupants_.begin(), occupants_.end(),
                   [](const Occupant& a, const Occupant& b) { return a.subchannel < b.subchannel; });
  const double p_tx = cfg_.tx_power_w();
  const double noise = cfg_.noise_power_w();
  const double threshold = cfg_.sinr_threshold();
  const bool ranged = c.max_range > 0.0;
  std::vector<phy::ReceivedSignal> signals;
  std::vector<std::uint8_t> member_in_range;

  for (std::size_t g0 = 0; g0 < occupants_.size();) {
    std::size_t g1 = g0;
    while (g1 < occupants_.size() && occupants_[g1].subchannel == occupants_[g0].subchannel) ++g1;
    const std::size_t group_size = g1 - g0;
    bool common_receiver = false;

    for (int rx = 0; rx < n; ++rx) {
      if (transmitting_[static_cast<std::size_t>(rx)]) continue;
      const auto& rpose = vehicles_[static_cast<std::size_t>(rx)].pose;
      signals.clear();
      member_in_range.clear();
      int in_range = 0;
      for (std::size_t k = g0; k < g1; ++k) {
        const int tx = occupants_[k].vehicle;
        const double d = mobility::distance(vehicles_[static_cast<std::size_t>(tx)].pose, rpose,
                                            c.road_length, c.distance_mode);
        const bool reachable = !ranged || d <= c.max_range;
        in_range += reachable ? 1 : 0;
        member_in_range.push_back(reachable ? 1 : 0);
        const double fade = c.fading == FadingMode::Random
                                ? exponential_at(c.rng_seed, static_cast<std::uint64_t>(tx),
                                                 static_cast<std::uint64_t>(rx), static_cast<std::uint64_t>(t))
                                : 1.0;
        signals.push_back({tx, p_tx * phy::channel_gain(d, c.path_loss_exponent, fade)});
      }
      if (in_range >= 2) common_receiver = true;

      std::vector<phy::SignalSinr> sinrs;
      if (group_size == 1) {
        sinrs.push_back({signals[0].tx_id, signals[0].rx_power / noise});
      } else if (c.access_mode == AccessMode::Oma) {
        sinrs = phy::sinr_oma_group(signals, noise);
      } else if (c.sic_gated) {
        sinrs = phy::sinr_noma_sic_gated(signals, noise, threshold);
      } else {
        sinrs = phy::sinr_noma_sic(signals, noise);
      }
      // sinrs is sorted by tx_id; occupants within a group are in vehicle order.
      for (std::size_t k = g0; k < g1; ++k) {
        const auto& occ = occupants_[k];
        if (!occ.carries_packet || !member_in_range[k - g0]) continue;
        ++rep.rx_attempts;
        const auto it = std::lower_bound(
            sinrs.begin(), sinrs.end(), occ.vehicle,
            [](const phy::SignalSinr& s, int id) { return s.tx_id < id; });
        if (it->sinr >= threshold) {
          ++rep.rx_success;
          successes_.push_back({occ.vehicle, rx});
          record({TraceEvent::Kind::Reception, t, occ.vehicle, rx, MessageType::Cam, 0});
        }
      }
    }

    if (group_size >= 2 && common_receiver) {
      ++rep.collisions;
      for (std::size_t k = g0; k < g1; ++k)
        if (occupants_[k].carries_packet) ++rep.collided_tx;
    }
    g0 = g1;
  }

  // 7. Receiver ages. Silent occupants are flagged transmitting but never succeed.
  phi_.advance(successes_, head_ages_, std::span<const bool>(transmitting_.get(), static_cast<std::size_t>(n)));

  // 8. Report.
  rep.phi_bar = aoi::mean_queue_aoi(vehicles_, [](const Vehicle& v) -> const auto& { return v.queues; },
                                    c.queue_aoi_mean);
  rep.delta_t = phi_.running_mean();
  for (const auto& v : vehicles_)
    for (auto type : kPriorityOrder) {
      const auto k = index_of(type);
      const auto len = static_cast<std::int64_t>(v.queues.length(type));
      const auto age = v.queues.age_sum(type);
      rep.type_age_sum[k] += age;
      rep.type_count[k] += len;
      if (len > 0) rep.type_phi[k] += static_cast<double>(age) / static_cast<double>(len);
    }
  for (auto& p : rep.type_phi) p /= static_cast<double>(n);

  ++slot_;
  acc_.add(rep);
  if (options_.keep_series) series_.push_back(rep);
  last_ = rep;
  return last_;
}

void Simulation::run_to_end() {
  while (!done()) step();
}

std::uint64_t Simulation::state_digest() const {
  std::uint64_t h = hash_key(0xc2f0, static_cast<std::uint64_t>(slot_));
  auto mix = [&h](std::uint64_t v) { h = hash_key(h, v); };
  for (const auto& v : vehicles_) {
    mix(std::bit_cast<std::uint64_t>(v.pose.x));
    mix(static_cast<std::uint64_t>(v.pose.lane));
    for (auto type : kPriorityOrder)
      for (auto b : v.queues.births(type)) mix(static_cast<std::uint64_t>(b) ^ (index_of(type) << 60));
    mix(static_cast<std::uint64_t>(v.sps.rc));
    mix(static_cast<std::uint64_t>(v.sps.next_tx_slot));
    if (v.sps.reserved) {
      mix(static_cast<std::uint64_t>(v.sps.reserved->subframe_offset));
      mix(static_cast<std::uint64_t>(v.sps.reserved->subchannel));
    }
  }
  for (int tx = 0; tx < phi_.size(); ++tx)
    for (int rx = 0; rx < phi_.size(); ++rx) mix(static_cast<std::uint64_t>(phi_.at(tx, rx)));
  return h;
}

SimulationReport Simulation::finish() && {
  SimulationReport r;
  r.summary = acc_.finalize(cfg_);
  r.summary.state_digest = state_digest();
  r.telemetry = acc_.telemetry(cfg_.config().num_vehicles);
  r.series = std::move(series_);
  r.trace = std::move(trace_);
  return r;
}

SimulationReport run(const ValidatedConfig& cfg, RunOptions options) {
  Simulation sim(cfg, options);
  sim.run_to_end();
  return std::move(sim).finish();
}

SimulationSummary summarize(const std::vector<SlotReport>& series, const ValidatedConfig& cfg) {
  SummaryAccumulator acc(cfg.config().discard_slots);
  for (const auto& r : series) acc.add(r);
  return acc.finalize(cfg);
}

}  // namespace cv2x::engine
