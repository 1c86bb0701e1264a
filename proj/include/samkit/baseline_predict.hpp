#pragma once

#include <string>

#include "samkit/hybrid_codec.hpp"
#include "samkit/scenario.hpp"

namespace samkit {

// Deterministic heuristic standing in for a learned predictor, so the whole
// predict -> parse -> score loop runs offline.
struct BaselineConfig {
  double lateral_vel_threshold = 0.2;  // m/s on the recent mean lateral velocity
  double default_w = 3.75;             // m, magnitude used for predicted changes
  double default_d = 4.0;              // s
  double lateral_window = 0.5;         // s of trailing history

  void validate() const;
};

// Threshold rule on the recent mean lateral velocity: beyond +threshold the
// call is a left change, beyond -threshold a right change, otherwise keep
// lane. Lane changes emit maneuver parameters (signed default_w, default_d,
// v0 = lateral velocity observed at the crossing, dvx = 0); keep-lane emits
// a constant-velocity coordinate extrapolation at 1..4 s.
ModelOutput baseline_predict(const Scenario& s, const BaselineConfig& cfg = {});

// Same prediction, already serialized through the output grammar.
std::string baseline_predict_text(const Scenario& s, const BaselineConfig& cfg = {});

}  // namespace samkit
