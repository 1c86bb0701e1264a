#include "samkit/scenario.hpp"

#include <cmath>

namespace samkit {

namespace {

constexpr const char* kSlotNames[] = {
    "preceding",      "following",       "left_preceding",  "left_alongside",
    "left_following", "right_preceding", "right_alongside", "right_following",
};

}  // namespace

const char* neighbor_slot_name(NeighborSlot slot) {
  return kSlotNames[static_cast<int>(slot)];
}

std::optional<NeighborSlot> neighbor_slot_from_name(const std::string& name) {
  for (int i = 0; i < 8; ++i) {
    if (name == kSlotNames[i]) {
      return static_cast<NeighborSlot>(i);
    }
  }
  return std::nullopt;
}

void WindowConfig::validate() const {
  if (!(t_input > 0.0) || !(t_p > 0.0) || t_h < 0.0) {
    throw std::invalid_argument("WindowConfig requires t_input > 0, t_p > 0, t_h >= 0");
  }
  if (!(sample_rate > 0.0)) {
    throw std::invalid_argument("WindowConfig requires sample_rate > 0");
  }
  if (!(keep_lane_stride > 0.0)) {
    throw std::invalid_argument("WindowConfig requires keep_lane_stride > 0");
  }
}

std::int64_t WindowConfig::history_frames() const {
  return std::llround(t_input * sample_rate);
}

std::int64_t WindowConfig::future_frames() const {
  return std::llround((t_h + t_p) * sample_rate);
}

double recent_mean_lateral_velocity(const Scenario& s, double window_s) {
  if (s.history.empty()) {
    return 0.0;
  }
  double sum = 0.0;
  int count = 0;
  for (const auto& state : s.history) {
    const double age = static_cast<double>(s.insertion.frame - state.frame) / s.sample_rate;
    if (age <= window_s + 1e-9) {
      sum += state.vy;
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

}  // namespace samkit
