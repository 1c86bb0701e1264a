#include "samkit/prompt_builder.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "samkit/fileio.hpp"
#include "samkit/scenario_data.hpp"

namespace samkit {

namespace {

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

const char* side_word(double signed_value) {
  return signed_value >= 0.0 ? "left" : "right";
}

std::string describe_neighbor(const Scenario& s, NeighborSlot slot) {
  const auto it = s.neighbors.find(slot);
  if (it == s.neighbors.end()) {
    return "";
  }
  const VehicleState& o = it->second;
  const double gap = o.x - s.insertion.x;
  const double rel = o.vx - s.insertion.vx;
  return std::string(neighbor_slot_name(slot)) + " vehicle at gap " + fixed2(gap) +
         " m, relative speed " + fixed2(rel) + " m/s";
}

}  // namespace

PromptFeatures extract_features(const Scenario& s, const FeatureConfig& cfg) {
  PromptFeatures f;
  f.mean_lateral_velocity = recent_mean_lateral_velocity(s, cfg.lateral_window);
  f.significant_lateral_motion = std::abs(f.mean_lateral_velocity) > cfg.lateral_vel_threshold;

  const auto lead = s.neighbors.find(NeighborSlot::kPreceding);
  if (lead != s.neighbors.end()) {
    const double gap = lead->second.x - s.insertion.x;
    const double closing = s.insertion.vx - lead->second.vx;
    f.relative_speed_to_preceding = lead->second.vx - s.insertion.vx;
    if (closing > 0.0 && gap > 0.0) {
      f.time_to_collision = gap / closing;
      f.blocked_lane_ahead = *f.time_to_collision < cfg.ttc_threshold;
    }
  }

  auto nearest_gap = [&](NeighborSlot a, NeighborSlot b, NeighborSlot c) -> std::optional<double> {
    std::optional<double> best;
    for (const NeighborSlot slot : {a, b, c}) {
      const auto it = s.neighbors.find(slot);
      if (it != s.neighbors.end()) {
        const double gap = std::abs(it->second.x - s.insertion.x);
        if (!best || gap < *best) {
          best = gap;
        }
      }
    }
    return best;
  };
  f.adjacent_gap_left = nearest_gap(NeighborSlot::kLeftPreceding, NeighborSlot::kLeftAlongside,
                                    NeighborSlot::kLeftFollowing);
  f.adjacent_gap_right = nearest_gap(NeighborSlot::kRightPreceding, NeighborSlot::kRightAlongside,
                                     NeighborSlot::kRightFollowing);
  return f;
}

std::string build_prompt(const Scenario& s, const FeatureConfig& cfg) {
  const PromptFeatures f = extract_features(s, cfg);
  const VehicleState& ins = s.insertion;
  const double history_span =
      static_cast<double>(ins.frame - s.history.front().frame) / s.sample_rate;
  const double dx = ins.x - s.history.front().x;
  const double dy = ins.y - s.history.front().y;

  std::string p;
  p += "You are analyzing a highway vehicle at a lane boundary crossing.\n";
  p += "Target vehicle: speed " + fixed2(ins.vx) + " m/s, lateral velocity " + fixed2(ins.vy) +
       " m/s, lane " + std::to_string(ins.lane_id) + ".\n";
  p += "Recent motion (last " + fixed2(history_span) + " s): " + fixed2(dx) +
       " m forward, " + fixed2(dy) + " m lateral; mean lateral velocity over the last " +
       fixed2(cfg.lateral_window) + " s: " + fixed2(f.mean_lateral_velocity) + " m/s.\n";

  std::string neighbors;
  for (const NeighborSlot slot :
       {NeighborSlot::kPreceding, NeighborSlot::kFollowing, NeighborSlot::kLeftPreceding,
        NeighborSlot::kLeftAlongside, NeighborSlot::kLeftFollowing, NeighborSlot::kRightPreceding,
        NeighborSlot::kRightAlongside, NeighborSlot::kRightFollowing}) {
    const std::string line = describe_neighbor(s, slot);
    if (!line.empty()) {
      neighbors += "  - " + line + "\n";
    }
  }
  if (neighbors.empty()) {
    p += "Surrounding vehicles: no surrounding vehicles detected.\n";
  } else {
    p += "Surrounding vehicles:\n" + neighbors;
  }

  p += "Task: state your reasoning in a 'Thought:' section, then answer on one line as\n";
  p += "Final Answer: intention=<0|1|2>; trajectory=coords[(x1,y1),(x2,y2),(x3,y3),(x4,y4)] "
       "for intention 0, or trajectory=sam[W=<m>,D=<s>,v0=<m/s>,dvx=<m/s>] for intention 1 or 2.\n";
  p += "Intentions: 0 = keep lane, 1 = left lane change, 2 = right lane change. Coordinates are "
       "meters at 1, 2, 3, 4 s after the crossing; positions use the crossing frame (x forward, "
       "y positive leftward). All numbers use 3 decimal places.\n";
  return p;
}

std::string build_thought(const Scenario& s, const FeatureConfig& cfg) {
  const PromptFeatures f = extract_features(s, cfg);
  std::string t;
  if (f.significant_lateral_motion) {
    t += "The target vehicle shows significant lateral movement toward the ";
    t += side_word(f.mean_lateral_velocity);
    t += " (" + fixed2(f.mean_lateral_velocity) + " m/s).";
  } else {
    t += "The target vehicle shows no significant lateral movement.";
  }
  if (f.blocked_lane_ahead && f.time_to_collision) {
    t += " The lane ahead is blocked (time to collision " + fixed2(*f.time_to_collision) + " s).";
  } else if (f.time_to_collision) {
    t += " The lane ahead is clear (time to collision " + fixed2(*f.time_to_collision) + " s).";
  }
  switch (s.label) {
    case Intention::kKeepLane:
      t += " The vehicle is expected to keep its lane.";
      break;
    case Intention::kLeftLaneChange:
      t += " The vehicle is expected to change lanes to the left.";
      break;
    case Intention::kRightLaneChange:
      t += " The vehicle is expected to change lanes to the right.";
      break;
  }
  return t;
}

ModelOutput ground_truth_output(const Scenario& s, const std::optional<FitResult>& fitted,
                                const FeatureConfig& cfg) {
  const std::string thought = build_thought(s, cfg);
  if (s.label == Intention::kKeepLane) {
    std::array<CoordPoint, 4> pts{};
    for (int k = 1; k <= 4; ++k) {
      const KinematicState* sample = s.future.sample_near(static_cast<double>(k));
      if (sample == nullptr) {
        throw std::invalid_argument("scenario " + s.id + " has no future sample at t = " +
                                    std::to_string(k) + " s");
      }
      pts[static_cast<std::size_t>(k - 1)] = CoordPoint{sample->x, sample->y};
    }
    return ModelOutput::make(thought, s.label, HybridTrajectory::coords(pts));
  }
  if (!fitted) {
    throw CodecError("lane-change scenario " + s.id + " needs a FitResult for its target");
  }
  const SamParams& p = fitted->params;
  return ModelOutput::make(thought, s.label,
                           HybridTrajectory::params(SamPayload{p.w, p.d, p.v0, p.dvx}));
}

CorpusRecord build_target(const Scenario& s, const std::optional<FitResult>& fitted,
                          const FeatureConfig& cfg) {
  CorpusRecord record;
  record.id = s.id;
  record.prompt = build_prompt(s, cfg);
  record.target = serialize_output(ground_truth_output(s, fitted, cfg));
  return record;
}

void export_corpus(const std::filesystem::path& path, const std::vector<CorpusRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["prompt"] = r.prompt;
    j["target"] = r.target;
    out += j.dump();
    out += '\n';
  }
  atomic_write_text(path, out);
}

std::vector<CorpusRecord> load_corpus(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::vector<CorpusRecord> records;
  std::size_t pos = 0;
  long line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) {
      end = text.size();
    }
    const std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(line);
      records.push_back(CorpusRecord{j.at("id").get<std::string>(),
                                     j.at("prompt").get<std::string>(),
                                     j.at("target").get<std::string>()});
    } catch (const std::exception& e) {
      throw DataError(DataErrorKind::kBadRecord, path.string(), line_no, e.what());
    }
  }
  return records;
}

}  // namespace samkit
