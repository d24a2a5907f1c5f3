#pragma once

#include <cstdint>

namespace cv2x::analytic {

struct AnalyticParams {
  double pi = 0.0;        // probability a vehicle is at a resource-selection instant
  double p_rk = 1.0;      // new-selection probability when RC reaches zero
  int csr = 100;          // candidate resources in the selection window
  int num_vehicles = 2;
  int window = 20;        // selection window, slots
};

/// Approximate probability that a transmission meets no co-channel peer:
///
///   [1 - (1 - prod_{i=0}^{W-1} (1 - pi/(1 - pi*i))) * (1 - p_rk)/(CSR - Nv + 1)]^(Nv - 1)
///
/// Throws std::domain_error when CSR - Nv + 1 <= 0, when a product factor
/// leaves [0, 1], or when pi / p_rk are not probabilities.
double p_no_collision(const AnalyticParams& params);

/// Counts gathered by the engine for estimating pi.
struct SchedulerTelemetry {
  std::int64_t vehicle_slots = 0;
  /// Vehicle-slots with a nonempty queue, RC at zero and a new resource drawn.
  std::int64_t reselection_events = 0;
};

/// Empirical pi. Throws std::invalid_argument on empty telemetry.
double estimate_pi(const SchedulerTelemetry& telemetry);

}  // namespace cv2x::analytic
