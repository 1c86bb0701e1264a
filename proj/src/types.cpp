#include "samkit/types.hpp"

#include <cmath>

namespace samkit {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(name) + " must be finite");
  }
}

}  // namespace

const char* intention_name(Intention i) {
  switch (i) {
    case Intention::kKeepLane:
      return "keep_lane";
    case Intention::kLeftLaneChange:
      return "left_lane_change";
    case Intention::kRightLaneChange:
      return "right_lane_change";
  }
  return "unknown";
}

SamParams SamParams::make(double w, double d, double v0, double dvx, double vx0) {
  require_finite(w, "w");
  require_finite(d, "d");
  require_finite(v0, "v0");
  require_finite(dvx, "dvx");
  require_finite(vx0, "vx0");
  if (d <= kMinManeuverDuration) {
    throw std::invalid_argument("maneuver duration d must exceed " +
                                std::to_string(kMinManeuverDuration) + " s");
  }
  return SamParams{w, d, v0, dvx, vx0};
}

ClassicalSamParams ClassicalSamParams::make(double y0, double w, double d, double t_start) {
  require_finite(y0, "y0");
  require_finite(w, "w");
  require_finite(d, "d");
  require_finite(t_start, "t_start");
  if (d <= 0.0) {
    throw std::invalid_argument("maneuver duration d must be positive");
  }
  return ClassicalSamParams{y0, w, d, t_start};
}

Trajectory Trajectory::make(std::vector<KinematicState> samples, double dt) {
  if (samples.empty()) {
    throw std::invalid_argument("trajectory must not be empty");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw std::invalid_argument("trajectory dt must be positive and finite");
  }
  if (samples.front().t < 0.0) {
    throw std::invalid_argument("trajectory sample times must be non-negative");
  }
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double step = samples[i].t - samples[i - 1].t;
    if (step <= 0.0) {
      throw std::invalid_argument("trajectory sample times must be strictly increasing");
    }
    if (std::abs(step - dt) > 1e-9) {
      throw std::invalid_argument("trajectory sample spacing deviates from dt by more than 1e-9 s");
    }
  }
  Trajectory traj;
  traj.samples = std::move(samples);
  traj.dt = dt;
  return traj;
}

const KinematicState* Trajectory::sample_near(double t) const {
  const KinematicState* best = nullptr;
  double best_gap = dt * 0.5 + 1e-9;
  for (const auto& s : samples) {
    const double gap = std::abs(s.t - t);
    if (gap < best_gap) {
      best_gap = gap;
      best = &s;
    }
  }
  return best;
}

}  // namespace samkit
