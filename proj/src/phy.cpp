#include "cv2x/phy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cv2x::phy {

double sinr_threshold(double bits, double bandwidth_hz, double slot_s) {
  if (!(bits > 0.0) || !(bandwidth_hz > 0.0) || !(slot_s > 0.0))
    throw std::domain_error("sinr_threshold: message size, bandwidth and slot must be > 0");
  const double load = bits / (bandwidth_hz * slot_s);
  if (load > kMaxSpectralLoad)
    throw std::domain_error("sinr_threshold: Q/(B*tau) exceeds " +
                            std::to_string(static_cast<int>(kMaxSpectralLoad)) +
                            " bit/s/Hz; configuration is unphysical");
  return std::expm1(load * std::log(2.0));
}

double channel_gain(double distance_m, double path_loss_exponent, double fade) {
  const double d = std::max(distance_m, kReferenceDistance);
  return fade * std::pow(d, -path_loss_exponent);
}

double sinr_oma(const ReceivedSignal& target, std::span<const ReceivedSignal> interferers,
                double noise_w) {
  double interference = 0.0;
  for (const auto& s : interferers) interference += s.rx_power;
  return target.rx_power / (interference + noise_w);
}

namespace {

// Strongest first; equal powers decode lower tx_id first.
std::vector<ReceivedSignal> decoding_order(std::span<const ReceivedSignal> signals) {
  std::vector<ReceivedSignal> order(signals.begin(), signals.end());
  std::sort(order.begin(), order.end(), [](const ReceivedSignal& a, const ReceivedSignal& b) {
    if (a.rx_power != b.rx_power) return a.rx_power > b.rx_power;
    return a.tx_id < b.tx_id;
  });
  return order;
}

void sort_by_tx(std::vector<SignalSinr>& out) {
  std::sort(out.begin(), out.end(),
            [](const SignalSinr& a, const SignalSinr& b) { return a.tx_id < b.tx_id; });
}

}  // namespace

std::vector<SignalSinr> sinr_oma_group(std::span<const ReceivedSignal> signals, double noise_w) {
  // Accumulated in decoding order so that weaker-signal partial sums match
  // sinr_noma_sic bit for bit and OMA never exceeds SIC after rounding.
  const auto order = decoding_order(signals);
  std::vector<double> weaker(order.size() + 1, 0.0);
  for (std::size_t k = order.size(); k-- > 0;) weaker[k] = weaker[k + 1] + order[k].rx_power;
  std::vector<SignalSinr> out(order.size());
  double stronger = 0.0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    out[k] = {order[k].tx_id, order[k].rx_power / ((weaker[k + 1] + stronger) + noise_w)};
    stronger += order[k].rx_power;
  }
  sort_by_tx(out);
  return out;
}

std::vector<SignalSinr> sinr_noma_sic(std::span<const ReceivedSignal> signals, double noise_w) {
  const auto order = decoding_order(signals);
  std::vector<double> weaker(order.size() + 1, 0.0);
  for (std::size_t k = order.size(); k-- > 0;) weaker[k] = weaker[k + 1] + order[k].rx_power;
  std::vector<SignalSinr> out(order.size());
  for (std::size_t k = 0; k < order.size(); ++k)
    out[k] = {order[k].tx_id, order[k].rx_power / (weaker[k + 1] + noise_w)};
  sort_by_tx(out);
  return out;
}

std::vector<SignalSinr> sinr_noma_sic_gated(std::span<const ReceivedSignal> signals,
                                            double noise_w, double threshold) {
  const auto order = decoding_order(signals);
  std::vector<double> suffix(order.size() + 1, 0.0);
  for (std::size_t k = order.size(); k-- > 0;) suffix[k] = suffix[k + 1] + order[k].rx_power;
  std::vector<SignalSinr> out(order.size());
  double residual_stronger = 0.0;  // stronger signals that could not be cancelled
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double sinr = order[k].rx_power / (suffix[k + 1] + residual_stronger + noise_w);
    out[k] = {order[k].tx_id, sinr};
    if (sinr < threshold) residual_stronger += order[k].rx_power;
  }
  sort_by_tx(out);
  return out;
}

std::vector<DecodeResult> decode(std::span<const SignalSinr> sinrs, double threshold) {
  std::vector<DecodeResult> out;
  out.reserve(sinrs.size());
  for (const auto& s : sinrs) out.push_back({s.tx_id, s.sinr >= threshold});
  return out;
}

}  // namespace cv2x::phy
