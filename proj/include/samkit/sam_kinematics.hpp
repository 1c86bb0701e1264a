#pragma once

#include "samkit/types.hpp"

namespace samkit {

struct LateralState {
  double y = 0.0;   // m
  double vy = 0.0;  // m/s
  double ay = 0.0;  // m/s^2
};

struct LongitudinalState {
  double x = 0.0;   // m
  double vx = 0.0;  // m/s
};

// Post-boundary lateral model:
//   y(t) = v0*t + ((w - 2*v0*d)/pi) * sin(pi*t / (2*d))
// with analytic first and second derivatives. Valid for t in [0, d]; callers
// wanting the post-maneuver extension use modified_sam_lateral_extended.
// Throws std::domain_error for t < 0.
LateralState modified_sam_lateral(const SamParams& p, double t);

// Same model, extended past t = d with a constant-velocity hold:
// y continues at vy(d) = v0 with ay = 0.
LateralState modified_sam_lateral_extended(const SamParams& p, double t);

// Full-maneuver lateral model:
//   y(t) = y0 - (w/(2*pi)) * sin(2*pi*(t - t_start)/d) + w*(t - t_start)/d
// Throws OutOfManeuverWindow unless t_start <= t <= t_start + d.
LateralState classical_sam_lateral(const ClassicalSamParams& p, double t);

// Linear velocity transition: vx(t) = vx0 + dvx*t/d, x(0) = 0.
LongitudinalState longitudinal_profile(const SamParams& p, double t);

// Dense sampling at t = 0, dt, 2*dt, ... up to the largest multiple of dt
// that is <= horizon. Lateral states use the extended (held) model.
// Throws InvalidStep if dt <= 0 or dt > horizon.
Trajectory sample_trajectory(const SamParams& p, double horizon, double dt);

}  // namespace samkit
