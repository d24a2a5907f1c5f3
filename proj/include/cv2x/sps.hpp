#pragma once

#include <cstdint>
#include <optional>

#include "cv2x/config.hpp"
#include "cv2x/rng.hpp"

namespace cv2x::sps {

/// One single-subframe, single-subchannel candidate inside the selection window.
struct Resource {
  int subframe_offset = 0;  // 0..window-1
  int subchannel = 0;       // 0..subchannels-1

  friend bool operator==(const Resource&, const Resource&) = default;
};

struct SpsState {
  int rc = 0;
  std::optional<Resource> reserved;
  std::int64_t next_tx_slot = 0;
};

struct SpsParams {
  int rri = 100;
  int window = 100;
  int subchannels = 5;
  double p_rk = 1.0;
  bool decrement_on_silence = false;

  static SpsParams from(const ValidatedConfig& cfg);
};

/// 500/rri + uniform integer in [0, 1000/rri).
int init_rc(int rri, RandomStream& rng);

/// Uniform draw over all window x subchannels candidates.
Resource select_resource(int window, int subchannels, RandomStream& rng);

/// Fresh grant whose first use falls at epoch + subframe_offset.
SpsState acquire_grant(std::int64_t epoch, const SpsParams& params, RandomStream& rng);

struct OpportunityOutcome {
  SpsState state;
  bool transmit_now = false;
  /// The reserved slot came up this call (whether or not it was used).
  bool opportunity = false;
  /// RC hit zero on this opportunity.
  bool rc_expired = false;
  /// RC hit zero and a new resource was drawn.
  bool reselected = false;
};

/// Advances one vehicle's SPS state for `slot`. Must be called once per slot.
///
/// At the reserved slot with a nonempty queue the grant is used: rc drops by
/// one and the next use moves rri slots ahead. With an empty queue the grant
/// is skipped without consuming rc unless decrement_on_silence is set. When rc
/// reaches zero a uniform draw decides between a new resource (probability
/// p_rk) and keeping the current one; rc is re-initialised either way.
OpportunityOutcome on_transmit_opportunity(const SpsState& state, std::int64_t slot,
                                           bool queues_nonempty, RandomStream& rng,
                                           const SpsParams& params);

}  // namespace cv2x::sps
