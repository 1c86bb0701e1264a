#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace samkit {

// Shortest maneuver duration accepted anywhere; 1/D terms blow up below this.
inline constexpr double kMinManeuverDuration = 0.5;

// Three-way maneuver class. Wire values 0/1/2 are fixed by the output grammar.
enum class Intention : int {
  kKeepLane = 0,
  kLeftLaneChange = 1,
  kRightLaneChange = 2,
};

const char* intention_name(Intention i);

class OutOfManeuverWindow : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InvalidStep : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Post-boundary sinusoidal-acceleration maneuver parameters.
//
// The lateral model lives in a frame centered at the lane-boundary crossing:
// t = 0 at the crossing, x along the lane, y positive leftward. A left lane
// change has w > 0, a right one w < 0.
struct SamParams {
  double w = 0.0;    // lateral displacement, m (signed)
  double d = 4.0;    // maneuver duration, s
  double v0 = 0.0;   // lateral velocity parameter, m/s
  double dvx = 0.0;  // longitudinal velocity change over d, m/s
  double vx0 = 0.0;  // longitudinal speed at t = 0, m/s

  static SamParams make(double w, double d, double v0, double dvx, double vx0);
};

// Full-maneuver sinusoidal-acceleration model, from initiation to completion.
struct ClassicalSamParams {
  double y0 = 0.0;       // initial lateral position, m
  double w = 0.0;        // lateral displacement, m (signed)
  double d = 4.0;        // maneuver duration, s
  double t_start = 0.0;  // maneuver start time, s

  static ClassicalSamParams make(double y0, double w, double d, double t_start);
};

// One kinematic sample in the crossing-centered frame.
struct KinematicState {
  double t = 0.0;   // s since the crossing
  double x = 0.0;   // m, longitudinal
  double y = 0.0;   // m, lateral (positive leftward)
  double vx = 0.0;  // m/s
  double vy = 0.0;  // m/s
  double ay = 0.0;  // m/s^2, lateral
};

// Uniformly sampled trajectory. Construct through make() which checks the
// spacing invariant; the fields stay public for read access.
struct Trajectory {
  std::vector<KinematicState> samples;
  double dt = 0.0;  // nominal sample spacing, s

  // Requires non-empty samples with strictly increasing t and consecutive
  // spacing within 1e-9 s of dt.
  static Trajectory make(std::vector<KinematicState> samples, double dt);

  // Sample whose t is nearest to the given time, or nullptr if none lies
  // within half a step.
  const KinematicState* sample_near(double t) const;

  double duration() const { return samples.back().t - samples.front().t; }
};

}  // namespace samkit
