#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "samkit/types.hpp"

namespace samkit {

// One row of a highD-style track recording, in recording coordinates.
struct VehicleState {
  std::int64_t frame = 0;
  std::int64_t vehicle_id = 0;
  double x = 0.0;
  double y = 0.0;
  double vx = 0.0;
  double vy = 0.0;
  double ax = 0.0;
  double ay = 0.0;
  int lane_id = 1;
};

enum class NeighborSlot : int {
  kPreceding = 0,
  kFollowing,
  kLeftPreceding,
  kLeftAlongside,
  kLeftFollowing,
  kRightPreceding,
  kRightAlongside,
  kRightFollowing,
};

const char* neighbor_slot_name(NeighborSlot slot);
std::optional<NeighborSlot> neighbor_slot_from_name(const std::string& name);

// Windowing around the lane-boundary crossing. t_h is the gap between the
// end of the observed history and the start of the scored future.
struct WindowConfig {
  double t_input = 3.0;      // s of history
  double t_p = 4.0;          // s of scored future
  double t_h = 0.0;          // s gap before the future starts
  double sample_rate = 25.0; // Hz
  // Recording convention: true when the lane to the driver's left carries
  // the smaller lane id.
  bool smaller_lane_id_is_left = true;
  double keep_lane_stride = 5.0;  // s between keep-lane window starts

  void validate() const;
  std::int64_t history_frames() const;
  std::int64_t future_frames() const;
};

// One prediction instance. History and insertion stay in recording
// coordinates; the future is re-expressed in the crossing-centered frame
// (insertion maps to x = 0, y = 0, t = 0).
struct Scenario {
  std::string id;
  Intention label = Intention::kKeepLane;
  double sample_rate = 25.0;  // Hz, frame-to-time conversion
  std::vector<VehicleState> history;
  VehicleState insertion;
  Trajectory future = Trajectory::make({KinematicState{}}, 1.0);
  std::map<NeighborSlot, VehicleState> neighbors;
  std::optional<SamParams> hidden_params;  // synthetic ground truth, when known
};

// Mean lateral velocity over the trailing `window_s` seconds of history
// (insertion sample included).
double recent_mean_lateral_velocity(const Scenario& s, double window_s);

}  // namespace samkit
