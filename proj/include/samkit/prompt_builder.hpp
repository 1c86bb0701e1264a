#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "samkit/hybrid_codec.hpp"
#include "samkit/sam_fitting.hpp"
#include "samkit/scenario.hpp"

namespace samkit {

struct FeatureConfig {
  double lateral_vel_threshold = 0.2;  // m/s on the recent mean
  double ttc_threshold = 5.0;          // s; below this the lane ahead counts as blocked
  double lateral_window = 0.5;         // s of trailing history for the mean
};

// Rule-extracted driving-context features that feed the reasoning templates.
struct PromptFeatures {
  bool significant_lateral_motion = false;
  double mean_lateral_velocity = 0.0;  // signed, m/s
  bool blocked_lane_ahead = false;
  std::optional<double> time_to_collision;          // s, preceding vehicle
  std::optional<double> relative_speed_to_preceding;  // m/s, positive = pulling away
  std::optional<double> adjacent_gap_left;   // m, nearest left-lane vehicle
  std::optional<double> adjacent_gap_right;  // m, nearest right-lane vehicle
};

PromptFeatures extract_features(const Scenario& s, const FeatureConfig& cfg = {});

// Deterministic natural-language prompt: ego kinematics, neighbor slots, and
// the task instruction quoting the exact output grammar. Numbers at 2
// decimals.
std::string build_prompt(const Scenario& s, const FeatureConfig& cfg = {});

// Rule-based reasoning text for a ground-truth target; mentions only
// features whose flags are set.
std::string build_thought(const Scenario& s, const FeatureConfig& cfg = {});

struct CorpusRecord {
  std::string id;
  std::string prompt;
  std::string target;  // serialized ModelOutput
};

// Pairs the scenario's prompt with its serialized ground-truth output:
// fitted maneuver parameters for lane changes (fit required), future
// coordinates at 1..4 s for keep-lane. Throws CodecError when the label and
// supplied payload disagree.
CorpusRecord build_target(const Scenario& s, const std::optional<FitResult>& fitted,
                          const FeatureConfig& cfg = {});

// Ground-truth ModelOutput for a scenario (the target without the prompt).
ModelOutput ground_truth_output(const Scenario& s, const std::optional<FitResult>& fitted,
                                const FeatureConfig& cfg = {});

void export_corpus(const std::filesystem::path& path, const std::vector<CorpusRecord>& records);
std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path);

}  // namespace samkit
