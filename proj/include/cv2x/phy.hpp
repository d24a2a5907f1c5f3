#pragma once

#include <span>
#include <vector>

#include "cv2x/config.hpp"

namespace cv2x::phy {

/// Largest admissible Q/(B*tau); beyond it 2^x - 1 loses all meaning for a
/// threshold model and the configuration is rejected.
inline constexpr double kMaxSpectralLoad = 60.0;

/// Minimum SINR at which one slot of Shannon rate carries `bits`:
/// 2^(bits / (bandwidth_hz * slot_s)) - 1.
/// Throws std::domain_error for non-positive inputs or an unphysical load.
double sinr_threshold(double bits, double bandwidth_hz, double slot_s);

/// Distance below which path loss is clamped.
inline constexpr double kReferenceDistance = 1.0;

/// |h|^2 = fade * max(d, 1 m)^(-eta).
double channel_gain(double distance_m, double path_loss_exponent, double fade = 1.0);

struct ReceivedSignal {
  int tx_id = 0;
  double rx_power = 0.0;  // W
};

struct SignalSinr {
  int tx_id = 0;
  double sinr = 0.0;

  friend bool operator==(const SignalSinr&, const SignalSinr&) = default;
};

/// Orthogonal access: every co-channel signal is interference.
double sinr_oma(const ReceivedSignal& target, std::span<const ReceivedSignal> interferers,
                double noise_w);

/// OMA SINR of every signal in a co-channel group, sorted by tx_id.
std::vector<SignalSinr> sinr_oma_group(std::span<const ReceivedSignal> signals, double noise_w);

/// Power-domain SIC. Signals are decoded strongest first (ties: lower tx_id
/// first); only strictly later (weaker) signals interfere. Result sorted by tx_id.
std::vector<SignalSinr> sinr_noma_sic(std::span<const ReceivedSignal> signals, double noise_w);

/// SIC where a stronger signal is cancelled only if it was itself decoded.
std::vector<SignalSinr> sinr_noma_sic_gated(std::span<const ReceivedSignal> signals,
                                            double noise_w, double threshold);

struct DecodeResult {
  int tx_id = 0;
  bool success = false;

  friend bool operator==(const DecodeResult&, const DecodeResult&) = default;
};

/// Success iff SINR >= threshold.
std::vector<DecodeResult> decode(std::span<const SignalSinr> sinrs, double threshold);

}  // namespace cv2x::phy
