#include "cv2x/sps.hpp"

#include <algorithm>

#include "cv2x/errors.hpp"

namespace cv2x::sps {

SpsParams SpsParams::from(const ValidatedConfig& cfg) {
  const auto& c = cfg.config();
  return {c.rri, c.selection_window, cfg.num_subchannels(), c.p_rk, c.decrement_on_silence};
}

int init_rc(int rri, RandomStream& rng) {
  CV2X_CHECK(rri > 0, "rri must be positive");
  const int base = 500 / rri;
  const int span = std::max(1, 1000 / rri);
  return base + static_cast<int>(rng.below(static_cast<std::uint64_t>(span)));
}

Resource select_resource(int window, int subchannels, RandomStream& rng) {
  CV2X_CHECK(window > 0 && subchannels > 0, "empty candidate resource set");
  const auto pick = rng.below(static_cast<std::uint64_t>(window) * subchannels);
  return {static_cast<int>(pick / subchannels), static_cast<int>(pick % subchannels)};
}

SpsState acquire_grant(std::int64_t epoch, const SpsParams& params, RandomStream& rng) {
  SpsState s;
  s.reserved = select_resource(params.window, params.subchannels, rng);
  s.rc = std::max(1, init_rc(params.rri, rng));
  s.next_tx_slot = epoch + s.reserved->subframe_offset;
  return s;
}

OpportunityOutcome on_transmit_opportunity(const SpsState& state, std::int64_t slot,
                                           bool queues_nonempty, RandomStream& rng,
                                           const SpsParams& params) {
  OpportunityOutcome out{state, false, false, false, false};
  CV2X_CHECK(state.reserved.has_value(), "vehicle holds no grant");
  CV2X_CHECK(slot <= state.next_tx_slot, "reserved slot was skipped");
  if (slot != state.next_tx_slot) return out;

  out.opportunity = true;
  out.transmit_now = queues_nonempty;
  SpsState& s = out.state;
  s.next_tx_slot += params.rri;
  if (!queues_nonempty && !params.decrement_on_silence) return out;

  s.rc -= 1;
  if (s.rc > 0) return out;

  out.rc_expired = true;
  if (rng.uniform() < params.p_rk) {
    s = acquire_grant(slot + 1, params, rng);
    out.reselected = true;
  } else {
    s.rc = std::max(1, init_rc(params.rri, rng));
  }
  return out;
}

}  // namespace cv2x::sps
