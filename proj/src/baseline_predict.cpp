#include "samkit/baseline_predict.hpp"

#include <array>
#include <cmath>
#include <cstdio>

namespace samkit {

void BaselineConfig::validate() const {
  if (!(lateral_vel_threshold > 0.0)) {
    throw std::invalid_argument("lateral_vel_threshold must be positive");
  }
  if (!(default_w > 0.0)) {
    throw std::invalid_argument("default_w must be positive");
  }
  if (!(default_d >= kMinManeuverDuration)) {
    throw std::invalid_argument("default_d must be at least the duration floor");
  }
}

ModelOutput baseline_predict(const Scenario& s, const BaselineConfig& cfg) {
  cfg.validate();
  const double mean_vy = recent_mean_lateral_velocity(s, cfg.lateral_window);

  char thought[160];
  if (std::abs(mean_vy) > cfg.lateral_vel_threshold) {
    const bool left = mean_vy > 0.0;
    std::snprintf(thought, sizeof(thought),
                  "Mean lateral velocity %.2f m/s exceeds the %.2f m/s threshold; predicting a "
                  "%s lane change.",
                  mean_vy, cfg.lateral_vel_threshold, left ? "left" : "right");
    const SamPayload payload{left ? cfg.default_w : -cfg.default_w, cfg.default_d,
                             s.insertion.vy, 0.0};
    return ModelOutput::make(thought,
                             left ? Intention::kLeftLaneChange : Intention::kRightLaneChange,
                             HybridTrajectory::params(payload));
  }

  std::snprintf(thought, sizeof(thought),
                "Mean lateral velocity %.2f m/s stays within the %.2f m/s threshold; predicting "
                "lane keeping.",
                mean_vy, cfg.lateral_vel_threshold);
  std::array<CoordPoint, 4> pts{};
  for (int k = 1; k <= 4; ++k) {
    pts[static_cast<std::size_t>(k - 1)] =
        CoordPoint{s.insertion.vx * k, s.insertion.vy * k};
  }
  return ModelOutput::make(thought, Intention::kKeepLane, HybridTrajectory::coords(pts));
}

std::string baseline_predict_text(const Scenario& s, const BaselineConfig& cfg) {
  return serialize_output(baseline_predict(s, cfg));
}

}  // namespace samkit
