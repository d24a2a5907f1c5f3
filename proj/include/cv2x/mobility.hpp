#pragma once

#include "cv2x/config.hpp"

namespace cv2x::mobility {

struct RoadGeometry {
  double length = 500.0;
  int lanes = 4;
  double lane_width = 4.0;
  double edge_offset = 2.0;

  static RoadGeometry from(const ScenarioConfig& cfg) {
    return {cfg.road_length, cfg.lanes, cfg.lane_width, cfg.edge_offset};
  }
};

struct VehiclePose {
  double x = 0.0;     // m, in [0, length)
  int lane = 1;       // 1..lanes
  int direction = 1;  // +1 or -1
  double y = 0.0;     // m, lane centre
};

/// Lanes 1..U/2 travel in +x, the rest in -x.
int lane_direction(int lane, int lanes);

/// y = lane * lane_width - edge_offset. Throws std::out_of_range for a bad lane.
double lane_center(int lane, const RoadGeometry& road);

VehiclePose make_pose(double x, int lane, const RoadGeometry& road);

/// x' = x + direction * speed * slot_s, wrapped onto the ring road [0, length).
VehiclePose step_position(const VehiclePose& pose, double speed, double slot_s,
                          double road_length);

/// Wrap-aware separation. In OneD mode the lane offset is ignored.
double distance(const VehiclePose& a, const VehiclePose& b, double road_length,
                DistanceMode mode = DistanceMode::TwoD);

}  // namespace cv2x::mobility
