#include "cv2x/mobility.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cv2x::mobility {

int lane_direction(int lane, int lanes) { return lane <= lanes / 2 ? 1 : -1; }

double lane_center(int lane, const RoadGeometry& road) {
  if (lane < 1 || lane > road.lanes)
    throw std::out_of_range("lane index " + std::to_string(lane) + " outside 1.." +
                            std::to_string(road.lanes));
  return lane * road.lane_width - road.edge_offset;
}

VehiclePose make_pose(double x, int lane, const RoadGeometry& road) {
  return {x, lane, lane_direction(lane, road.lanes), lane_center(lane, road)};
}

VehiclePose step_position(const VehiclePose& pose, double speed, double slot_s,
                          double road_length) {
  VehiclePose next = pose;
  double x = std::fmod(pose.x + pose.direction * speed * slot_s, road_length);
  if (x < 0.0) x += road_length;
  if (x >= road_length) x = 0.0;  // -tiny + length rounds up to length
  next.x = x;
  return next;
}

double distance(const VehiclePose& a, const VehiclePose& b, double road_length,
                DistanceMode mode) {
  const double raw = std::abs(a.x - b.x);
  const double dx = std::min(raw, road_length - raw);
  if (mode == DistanceMode::OneD) return dx;
  return std::hypot(dx, a.y - b.y);
}

}  // namespace cv2x::mobility
