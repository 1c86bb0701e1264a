#include "samkit/sam_kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace samkit {

namespace {
constexpr double kPi = std::numbers::pi;
}

LateralState modified_sam_lateral(const SamParams& p, double t) {
  if (t < 0.0) {
    throw std::domain_error("modified_sam_lateral requires t >= 0");
  }
  const double amp = (p.w - 2.0 * p.v0 * p.d) / kPi;
  const double omega = kPi / (2.0 * p.d);
  const double phase = omega * t;
  LateralState s;
  s.y = p.v0 * t + amp * std::sin(phase);
  s.vy = p.v0 + amp * omega * std::cos(phase);
  s.ay = -amp * omega * omega * std::sin(phase);
  return s;
}

LateralState modified_sam_lateral_extended(const SamParams& p, double t) {
  if (t <= p.d) {
    return modified_sam_lateral(p, t);
  }
  // vy(d) = v0 exactly; hold it.
  const LateralState end = modified_sam_lateral(p, p.d);
  return LateralState{end.y + p.v0 * (t - p.d), p.v0, 0.0};
}

LateralState classical_sam_lateral(const ClassicalSamParams& p, double t) {
  // Half-ulp slack so t_start + d computed by callers stays inside.
  constexpr double kWindowSlack = 1e-9;
  double tau = t - p.t_start;
  if (tau < -kWindowSlack || tau > p.d + kWindowSlack) {
    throw OutOfManeuverWindow("classical_sam_lateral requires t in [t_start, t_start + d]");
  }
  tau = std::clamp(tau, 0.0, p.d);
  const double omega = 2.0 * kPi / p.d;
  const double phase = omega * tau;
  LateralState s;
  s.y = p.y0 - (p.w / (2.0 * kPi)) * std::sin(phase) + p.w * tau / p.d;
  s.vy = (p.w / p.d) * (1.0 - std::cos(phase));
  s.ay = (p.w / p.d) * omega * std::sin(phase);
  return s;
}

LongitudinalState longitudinal_profile(const SamParams& p, double t) {
  LongitudinalState s;
  s.vx = p.vx0 + p.dvx * t / p.d;
  s.x = p.vx0 * t + p.dvx * t * t / (2.0 * p.d);
  return s;
}

Trajectory sample_trajectory(const SamParams& p, double horizon, double dt) {
  if (!(horizon > 0.0)) {
    throw InvalidStep("sample_trajectory requires horizon > 0");
  }
  if (!(dt > 0.0) || dt > horizon) {
    throw InvalidStep("sample_trajectory requires 0 < dt <= horizon");
  }
  const auto count = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
  std::vector<KinematicState> samples;
  samples.reserve(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    const double t = static_cast<double>(i) * dt;
    const LateralState lat = modified_sam_lateral_extended(p, t);
    const LongitudinalState lon = longitudinal_profile(p, t);
    samples.push_back(KinematicState{t, lon.x, lat.y, lon.vx, lat.vy, lat.ay});
  }
  return Trajectory::make(std::move(samples), dt);
}

}  // namespace samkit
