#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cv2x/engine.hpp"

namespace cv2x::oracle {

/// Per-slot metrics rebuilt from nothing but the event trace.
struct Replay {
  std::vector<double> phi_bar;  // flat mean in-queue age after each slot
  std::vector<double> delta;    // mean receiver age after each slot
  std::vector<std::int64_t> final_ages;  // tx * n + rx
};

/// Brute-force recomputation: queue contents from enqueue/departure events,
/// receiver ages from departures and receptions, every entry recomputed each
/// slot. Throws std::runtime_error on an inconsistent trace.
Replay replay(const std::vector<engine::TraceEvent>& trace, int num_vehicles, std::int64_t slots);

/// Empty when the run agrees with the replay exactly, else a description of
/// the first mismatch.
std::string compare(const engine::SimulationReport& report, const engine::Simulation& final_state,
                    const Replay& replay);

}  // namespace cv2x::oracle
