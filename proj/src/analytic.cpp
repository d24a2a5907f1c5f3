#include "cv2x/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace cv2x::analytic {

double p_no_collision(const AnalyticParams& p) {
  if (!(p.pi >= 0.0 && p.pi <= 1.0)) throw std::domain_error("pi must lie in [0, 1]");
  if (!(p.p_rk >= 0.0 && p.p_rk <= 1.0)) throw std::domain_error("p_rk must lie in [0, 1]");
  if (p.num_vehicles < 1) throw std::domain_error("need at least one vehicle");
  if (p.window < 1) throw std::domain_error("selection window must be >= 1");
  const int free_resources = p.csr - p.num_vehicles + 1;
  if (free_resources <= 0) throw std::domain_error("CSR - Nv + 1 must be positive");

  double product = 1.0;
  for (int i = 0; i < p.window; ++i) {
    const double denom = 1.0 - p.pi * i;
    const double factor = denom > 0.0 ? 1.0 - p.pi / denom : -1.0;
    if (!(factor >= 0.0 && factor <= 1.0))
      throw std::domain_error("selection product factor left [0, 1]; pi * window too large");
    product *= factor;
  }
  const double per_peer = (1.0 - product) * (1.0 - p.p_rk) / free_resources;
  return std::pow(1.0 - per_peer, p.num_vehicles - 1);
}

double estimate_pi(const SchedulerTelemetry& t) {
  if (t.vehicle_slots <= 0) throw std::invalid_argument("estimate_pi: empty telemetry");
  return static_cast<double>(t.reselection_events) / static_cast<double>(t.vehicle_slots);
}

}  // namespace cv2x::analytic
