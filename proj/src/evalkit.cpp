#include "samkit/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include <json.hpp>

#include "samkit/fileio.hpp"
#include "samkit/sam_kinematics.hpp"

namespace samkit {

namespace {

SamParams payload_to_params(const SamPayload& p, double vx0) {
  // The wire admits any D > 0; the kinematic model floors shorter maneuvers.
  const double d = std::max(
      p.d, std::nextafter(kMinManeuverDuration, std::numeric_limits<double>::infinity()));
  return SamParams::make(p.w, d, p.v0, p.dvx, vx0);
}

// Predicted (x, y) at an arbitrary time since the crossing.
std::pair<double, double> evaluate_prediction_at(const ModelOutput& pred,
                                                 const VehicleState& insertion, double t) {
  if (pred.trajectory.is_params()) {
    const SamParams p = payload_to_params(pred.trajectory.sam_params(), insertion.vx);
    const LateralState lat = modified_sam_lateral_extended(p, t);
    const LongitudinalState lon = longitudinal_profile(p, t);
    return {lon.x, lat.y};
  }
  // Piecewise-linear through the knots (0,origin),(1,p1),...,(4,p4).
  const auto& pts = pred.trajectory.coord_points();
  auto knot = [&](int k) -> std::pair<double, double> {
    if (k <= 0) {
      return {0.0, 0.0};
    }
    const auto& p = pts[static_cast<std::size_t>(std::min(k, 4) - 1)];
    return {p.x, p.y};
  };
  const double clamped = std::clamp(t, 0.0, 4.0);
  const int lo = std::clamp(static_cast<int>(std::floor(clamped)), 0, 3);
  const double frac = clamped - lo;
  const auto [x0, y0] = knot(lo);
  const auto [x1, y1] = knot(lo + 1);
  return {x0 + frac * (x1 - x0), y0 + frac * (y1 - y0)};
}

struct SquaredErrorAccumulator {
  std::map<double, double> lat;
  std::map<double, double> lon;
  int count = 0;

  void add(const std::vector<double>& horizons, const std::vector<double>& lat_err,
           const std::vector<double>& lon_err) {
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      lat[horizons[i]] += lat_err[i] * lat_err[i];
      lon[horizons[i]] += lon_err[i] * lon_err[i];
    }
    ++count;
  }

  std::map<double, double> rmse(const std::map<double, double>& sums) const {
    std::map<double, double> out;
    for (const auto& [h, sum] : sums) {
      out[h] = count > 0 ? std::sqrt(sum / count) : 0.0;
    }
    return out;
  }
};

std::vector<const Scenario*> sorted_by_id(const std::vector<Scenario>& scenarios) {
  std::vector<const Scenario*> out;
  out.reserve(scenarios.size());
  for (const auto& s : scenarios) {
    out.push_back(&s);
  }
  std::sort(out.begin(), out.end(),
            [](const Scenario* a, const Scenario* b) { return a->id < b->id; });
  return out;
}

MetricsReport score_impl(
    const std::vector<Scenario>& scenarios, const std::vector<double>& horizons,
    const std::function<const ModelOutput*(const std::string&)>& lookup) {
  MetricsReport report;
  report.horizons = horizons;

  std::map<Intention, SquaredErrorAccumulator> acc_all;
  std::map<Intention, SquaredErrorAccumulator> acc_matched;
  for (const Intention c :
       {Intention::kKeepLane, Intention::kLeftLaneChange, Intention::kRightLaneChange}) {
    report.per_class[c] = ClassMetrics{};
    acc_all[c] = SquaredErrorAccumulator{};
    acc_matched[c] = SquaredErrorAccumulator{};
  }

  for (const Scenario* s : sorted_by_id(scenarios)) {
    ClassMetrics& cls = report.per_class[s->label];
    ++cls.count;
    ++report.total;

    const ModelOutput* pred = lookup(s->id);
    if (pred == nullptr) {
      ++report.parse_failure_count;
      continue;
    }
    ++cls.parsed;
    report.payload_scalars_total += payload_size(pred->trajectory);
    const bool correct = pred->intention == s->label;
    if (correct) {
      ++cls.correct;
    }

    std::vector<double> lat_err(horizons.size(), 0.0);
    std::vector<double> lon_err(horizons.size(), 0.0);
    for (std::size_t i = 0; i < horizons.size(); ++i) {
      const KinematicState* gt = s->future.sample_near(horizons[i]);
      if (gt == nullptr) {
        throw std::invalid_argument("scenario " + s->id + " has no future sample near t = " +
                                    std::to_string(horizons[i]) + " s");
      }
      const auto [px, py] = evaluate_prediction_at(*pred, s->insertion, gt->t);
      lat_err[i] = py - gt->y;
      lon_err[i] = px - gt->x;
    }
    acc_all[s->label].add(horizons, lat_err, lon_err);
    if (correct) {
      acc_matched[s->label].add(horizons, lat_err, lon_err);
    }
  }

  int total_correct = 0;
  for (auto& [label, cls] : report.per_class) {
    total_correct += cls.correct;
    cls.accuracy_pct = cls.count > 0 ? 100.0 * cls.correct / cls.count : 0.0;
    cls.lateral_rmse = acc_all[label].rmse(acc_all[label].lat);
    cls.longitudinal_rmse = acc_all[label].rmse(acc_all[label].lon);
    cls.lateral_rmse_matched = acc_matched[label].rmse(acc_matched[label].lat);
    cls.longitudinal_rmse_matched = acc_matched[label].rmse(acc_matched[label].lon);
    for (const double h : horizons) {
      if (std::abs(cls.lateral_rmse[h] - cls.lateral_rmse_matched[h]) > 1e-12 ||
          std::abs(cls.longitudinal_rmse[h] - cls.longitudinal_rmse_matched[h]) > 1e-12) {
        report.matched_rmse_differs = true;
      }
    }
  }
  report.overall_accuracy_pct = report.total > 0 ? 100.0 * total_correct / report.total : 0.0;
  return report;
}

}  // namespace

Trajectory reconstruct_prediction(const ModelOutput& pred, const VehicleState& insertion,
                                  const std::vector<double>& horizons) {
  if (horizons.empty()) {
    throw std::invalid_argument("reconstruct_prediction needs at least one horizon");
  }
  const double dt = horizons.size() > 1 ? horizons[1] - horizons[0] : horizons[0];

  std::vector<KinematicState> samples;
  samples.reserve(horizons.size());
  double prev_t = 0.0;
  double prev_x = 0.0;
  double prev_y = 0.0;
  for (const double h : horizons) {
    KinematicState k;
    k.t = h;
    if (pred.trajectory.is_params()) {
      const SamParams p = payload_to_params(pred.trajectory.sam_params(), insertion.vx);
      const LateralState lat = modified_sam_lateral_extended(p, h);
      const LongitudinalState lon = longitudinal_profile(p, h);
      k.x = lon.x;
      k.y = lat.y;
      k.vx = lon.vx;
      k.vy = lat.vy;
      k.ay = lat.ay;
    } else {
      const auto [x, y] = evaluate_prediction_at(pred, insertion, h);
      k.x = x;
      k.y = y;
      const double span = h - prev_t;
      k.vx = span > 0.0 ? (x - prev_x) / span : 0.0;
      k.vy = span > 0.0 ? (y - prev_y) / span : 0.0;
      k.ay = 0.0;
    }
    prev_t = h;
    prev_x = k.x;
    prev_y = k.y;
    samples.push_back(k);
  }
  return Trajectory::make(std::move(samples), dt);
}

MetricsReport score_predictions(const std::map<std::string, std::string>& preds,
                                const std::vector<Scenario>& scenarios,
                                const std::vector<double>& horizons) {
  std::map<std::string, ModelOutput> parsed;
  for (const auto& [id, text] : preds) {
    ParseOutcome outcome = try_parse_output(text);
    if (outcome.ok()) {
      parsed.emplace(id, std::move(*outcome.output));
    }
  }
  return score_impl(scenarios, horizons, [&](const std::string& id) -> const ModelOutput* {
    const auto it = parsed.find(id);
    return it == parsed.end() ? nullptr : &it->second;
  });
}

MetricsReport score_outputs(const std::map<std::string, ModelOutput>& preds,
                            const std::vector<Scenario>& scenarios,
                            const std::vector<double>& horizons) {
  return score_impl(scenarios, horizons, [&](const std::string& id) -> const ModelOutput* {
    const auto it = preds.find(id);
    return it == preds.end() ? nullptr : &it->second;
  });
}

std::string render_report_table(const MetricsReport& report) {
  std::string out;
  char buf[256];

  out += "Class                Count    Acc%";
  for (const double h : report.horizons) {
    std::snprintf(buf, sizeof(buf), "  Lat@%gs", h);
    out += buf;
  }
  for (const double h : report.horizons) {
    std::snprintf(buf, sizeof(buf), "  Lon@%gs", h);
    out += buf;
  }
  out += '\n';

  for (const auto& [label, cls] : report.per_class) {
    std::snprintf(buf, sizeof(buf), "%-20s %5d  %6.2f", intention_name(label), cls.count,
                  cls.accuracy_pct);
    out += buf;
    for (const double h : report.horizons) {
      std::snprintf(buf, sizeof(buf), "  %7.3f", cls.lateral_rmse.at(h));
      out += buf;
    }
    for (const double h : report.horizons) {
      std::snprintf(buf, sizeof(buf), "  %7.3f", cls.longitudinal_rmse.at(h));
      out += buf;
    }
    out += '\n';
  }

  std::snprintf(buf, sizeof(buf),
                "Overall intention accuracy: %.2f %%  (scenarios: %d, parse failures: %d)\n",
                report.overall_accuracy_pct, report.total, report.parse_failure_count);
  out += buf;
  std::snprintf(buf, sizeof(buf), "Predicted payload scalars: %ld\n",
                report.payload_scalars_total);
  out += buf;
  if (report.matched_rmse_differs) {
    out += "Note: RMSE over correctly classified predictions differs; see the JSON report's "
           "*_rmse_matched fields.\n";
  }
  return out;
}

std::string report_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["horizons"] = report.horizons;
  j["overall_accuracy_pct"] = report.overall_accuracy_pct;
  j["total"] = report.total;
  j["parse_failure_count"] = report.parse_failure_count;
  j["payload_scalars_total"] = report.payload_scalars_total;
  j["matched_rmse_differs"] = report.matched_rmse_differs;
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (const auto& [label, cls] : report.per_class) {
    nlohmann::ordered_json c;
    c["count"] = cls.count;
    c["correct"] = cls.correct;
    c["parsed"] = cls.parsed;
    c["accuracy_pct"] = cls.accuracy_pct;
    auto rmse_list = [&](const std::map<double, double>& m) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const double h : report.horizons) {
        arr.push_back(m.at(h));
      }
      return arr;
    };
    c["lateral_rmse"] = rmse_list(cls.lateral_rmse);
    c["longitudinal_rmse"] = rmse_list(cls.longitudinal_rmse);
    c["lateral_rmse_matched"] = rmse_list(cls.lateral_rmse_matched);
    c["longitudinal_rmse_matched"] = rmse_list(cls.longitudinal_rmse_matched);
    classes[intention_name(label)] = c;
  }
  j["per_class"] = classes;
  return j.dump(2);
}

void export_distributions(const std::filesystem::path& path,
                          const std::map<std::string, std::string>& preds) {
  std::string out = "id,intention,W,D,v0,dvx\n";
  for (const auto& [id, text] : preds) {
    const ParseOutcome outcome = try_parse_output(text);
    if (!outcome.ok() || !outcome.output->trajectory.is_params()) {
      continue;
    }
    const SamPayload& p = outcome.output->trajectory.sam_params();
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%d,%.6f,%.6f,%.6f,%.6f\n", id.c_str(),
                  static_cast<int>(outcome.output->intention), p.w, p.d, p.v0, p.dvx);
    out += buf;
  }
  atomic_write_text(path, out);
}

void export_overlays(const std::filesystem::path& path,
                     const std::map<std::string, std::string>& preds,
                     const std::vector<Scenario>& scenarios, int max_scenarios) {
  std::string out = "id,t,gt_x,gt_y,pred_x,pred_y\n";
  int exported = 0;
  for (const Scenario* s : sorted_by_id(scenarios)) {
    if (exported >= max_scenarios) {
      break;
    }
    if (s->label == Intention::kKeepLane) {
      continue;
    }
    const auto it = preds.find(s->id);
    if (it == preds.end()) {
      continue;
    }
    const ParseOutcome outcome = try_parse_output(it->second);
    if (!outcome.ok()) {
      continue;
    }
    for (const auto& gt : s->future.samples) {
      const auto [px, py] = evaluate_prediction_at(*outcome.output, s->insertion, gt.t);
      char buf[256];
      std::snprintf(buf, sizeof(buf), "%s,%.3f,%.6f,%.6f,%.6f,%.6f\n", s->id.c_str(), gt.t, gt.x,
                    gt.y, px, py);
      out += buf;
    }
    ++exported;
  }
  atomic_write_text(path, out);
}

}  // namespace samkit
