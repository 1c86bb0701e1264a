#pragma once

#include "samkit/types.hpp"

namespace samkit {

class RankDeficient : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FitConfig {
  double d_min = kMinManeuverDuration;  // s
  double d_max = 10.0;                  // s
  double d_tolerance = 1e-4;            // s, outer-search resolution
  int grid_steps = 96;                  // coarse-grid evaluations over [d_min, d_max]

  void validate() const;
};

struct FitResult {
  SamParams params;
  double lateral_sse = 0.0;       // m^2, lateral residual sum of squares
  double longitudinal_sse = 0.0;  // m^2, x-position residual sum of squares
  int n_points = 0;
  bool converged = true;
};

struct LateralFit {
  double w = 0.0;
  double v0 = 0.0;
  double sse = 0.0;
};

// Exact linear least squares of the lateral samples against the model
// rewritten as y(t) = w*b1(t) + v0*b2(t) for a fixed duration d, where
//   b1(t) = sin(pi*t/(2*d))/pi,  b2(t) = t - (2*d/pi)*sin(pi*t/(2*d))
// for t <= d, extended past d by the constant-velocity hold (b1 = 1/pi,
// b2 = t - 2*d/pi), so the basis matches sample_trajectory's output.
// Throws RankDeficient when the 2-column design matrix has condition
// number > 1e12; std::invalid_argument for fewer than 4 samples.
LateralFit fit_lateral_given_d(const Trajectory& traj, double d);

// Recovers maneuver parameters from an observed future trajectory.
// Variable projection: (w, v0) are eliminated exactly for each candidate d;
// d itself is found by a coarse grid over [d_min, d_max] followed by
// golden-section refinement (with one parabolic polish) to d_tolerance.
// dvx comes from an exact one-parameter least squares on the vx samples.
// Coarse-grid ties break toward smaller d. If refinement exceeds 200
// iterations the best point so far is returned with converged = false.
FitResult fit_sam(const Trajectory& traj, double vx0, const FitConfig& cfg = {});

// Brute-force reference: exhaustive grid over d at d_tolerance spacing.
// Intended as a test oracle for fit_sam.
FitResult fit_oracle(const Trajectory& traj, double vx0, const FitConfig& cfg = {});

}  // namespace samkit
