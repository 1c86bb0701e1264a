#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "samkit/hybrid_codec.hpp"
#include "samkit/scenario.hpp"

namespace samkit {

// Default scoring instants, seconds after the crossing.
inline const std::vector<double> kDefaultHorizons = {1.0, 2.0, 3.0, 4.0};

struct ClassMetrics {
  int count = 0;
  int correct = 0;
  int parsed = 0;
  double accuracy_pct = 0.0;
  // RMSE per horizon over all parseable predictions of this class.
  std::map<double, double> lateral_rmse;
  std::map<double, double> longitudinal_rmse;
  // Same, restricted to correctly classified predictions.
  std::map<double, double> lateral_rmse_matched;
  std::map<double, double> longitudinal_rmse_matched;
};

struct MetricsReport {
  std::vector<double> horizons;
  std::map<Intention, ClassMetrics> per_class;
  double overall_accuracy_pct = 0.0;
  int total = 0;
  int parse_failure_count = 0;
  long payload_scalars_total = 0;
  // True when any matched-only RMSE differs from its all-parsed value.
  bool matched_rmse_differs = false;
};

// Predicted kinematics at the requested horizons. Parametric payloads are
// sampled through the maneuver model with vx0 taken from the insertion
// state (durations below the model floor are clamped up); coordinate
// payloads return the stated points, with velocities from finite
// differences of consecutive points.
Trajectory reconstruct_prediction(const ModelOutput& pred, const VehicleState& insertion,
                                  const std::vector<double>& horizons = kDefaultHorizons);

// Scores raw prediction texts against scenarios. Missing or unparseable
// predictions count as parse failures: they are intention-incorrect and
// excluded from RMSE. RMSE at horizon h is sqrt(mean((pred - gt)^2)) at the
// ground-truth sample nearest h, lateral on y and longitudinal on x.
// Aggregation runs in sorted scenario-id order, so results are independent
// of input ordering.
MetricsReport score_predictions(const std::map<std::string, std::string>& preds,
                                const std::vector<Scenario>& scenarios,
                                const std::vector<double>& horizons = kDefaultHorizons);

// Parsed-output variant of score_predictions (no codec round trip).
MetricsReport score_outputs(const std::map<std::string, ModelOutput>& preds,
                            const std::vector<Scenario>& scenarios,
                            const std::vector<double>& horizons = kDefaultHorizons);

// Human-readable per-class accuracy / per-horizon RMSE table.
std::string render_report_table(const MetricsReport& report);

// Machine-readable report (JSON text).
std::string report_to_json(const MetricsReport& report);

// One CSV row (intention, W, D, v0, dvx) per parseable lane-change
// prediction, in sorted scenario-id order.
void export_distributions(const std::filesystem::path& path,
                          const std::map<std::string, std::string>& preds);

// Ground-truth vs predicted trajectories for lane-change scenarios,
// plot-ready columnar text, up to max_scenarios scenarios.
void export_overlays(const std::filesystem::path& path,
                     const std::map<std::string, std::string>& preds,
                     const std::vector<Scenario>& scenarios, int max_scenarios = 16);

}  // namespace samkit
