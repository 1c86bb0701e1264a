#include "samkit/scenario_data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "samkit/fileio.hpp"
#include "samkit/rng.hpp"
#include "samkit/sam_kinematics.hpp"

namespace samkit {

namespace {

constexpr double kAlongsideWindow = 5.0;  // m, |dx| that counts as alongside

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) {
    fields.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    fields.emplace_back();
  }
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_field(const std::string& raw, const char* column, const std::string& file, long line) {
  const std::string text = trim(raw);
  T value{};
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) {
    throw DataError(DataErrorKind::kBadRow, file, line,
                    "non-numeric value '" + text + "' in column " + column);
  }
  return value;
}

std::string render_double(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

// Splits a track into maximal runs of consecutive frames; window arithmetic
// assumes frame steps of exactly one.
std::vector<std::vector<VehicleState>> split_contiguous(const std::vector<VehicleState>& track) {
  std::vector<std::vector<VehicleState>> runs;
  for (const auto& state : track) {
    if (runs.empty() || state.frame != runs.back().back().frame + 1) {
      runs.emplace_back();
    }
    runs.back().push_back(state);
  }
  return runs;
}

const VehicleState* state_at_frame(const std::vector<VehicleState>& track, std::int64_t frame) {
  const auto it = std::lower_bound(track.begin(), track.end(), frame,
                                   [](const VehicleState& s, std::int64_t f) { return s.frame < f; });
  if (it != track.end() && it->frame == frame) {
    return &*it;
  }
  return nullptr;
}

std::map<NeighborSlot, VehicleState> find_neighbors(
    const std::vector<std::vector<VehicleState>>& tracks, const VehicleState& ego,
    bool smaller_lane_id_is_left) {
  const int left_lane = smaller_lane_id_is_left ? ego.lane_id - 1 : ego.lane_id + 1;
  const int right_lane = smaller_lane_id_is_left ? ego.lane_id + 1 : ego.lane_id - 1;

  std::map<NeighborSlot, VehicleState> slots;
  std::map<NeighborSlot, double> best_gap;
  auto offer = [&](NeighborSlot slot, const VehicleState& s, double gap) {
    const auto it = best_gap.find(slot);
    if (it == best_gap.end() || gap < it->second) {
      best_gap[slot] = gap;
      slots[slot] = s;
    }
  };

  for (const auto& track : tracks) {
    const VehicleState* other = state_at_frame(track, ego.frame);
    if (other == nullptr || other->vehicle_id == ego.vehicle_id) {
      continue;
    }
    const double dx = other->x - ego.x;
    if (other->lane_id == ego.lane_id) {
      if (dx > 0.0) {
        offer(NeighborSlot::kPreceding, *other, dx);
      } else if (dx < 0.0) {
        offer(NeighborSlot::kFollowing, *other, -dx);
      }
    } else if (other->lane_id == left_lane || other->lane_id == right_lane) {
      const bool left = other->lane_id == left_lane;
      if (std::abs(dx) <= kAlongsideWindow) {
        offer(left ? NeighborSlot::kLeftAlongside : NeighborSlot::kRightAlongside, *other,
              std::abs(dx));
      } else if (dx > 0.0) {
        offer(left ? NeighborSlot::kLeftPreceding : NeighborSlot::kRightPreceding, *other, dx);
      } else {
        offer(left ? NeighborSlot::kLeftFollowing : NeighborSlot::kRightFollowing, *other, -dx);
      }
    }
  }
  return slots;
}

Scenario window_scenario(const std::vector<VehicleState>& track, std::size_t insertion_index,
                         Intention label, const WindowConfig& cfg,
                         const std::vector<std::vector<VehicleState>>& all_tracks) {
  const std::int64_t h = cfg.history_frames();
  const std::int64_t gap = std::llround(cfg.t_h * cfg.sample_rate);
  const std::int64_t f = cfg.future_frames();
  const auto i = static_cast<std::int64_t>(insertion_index);

  const VehicleState& ins = track[insertion_index];
  Scenario s;
  s.label = label;
  s.sample_rate = cfg.sample_rate;
  s.history.assign(track.begin() + (i - h), track.begin() + i + 1);
  s.insertion = ins;

  std::vector<KinematicState> future;
  future.reserve(static_cast<std::size_t>(f - gap + 1));
  for (std::int64_t j = gap; j <= f; ++j) {
    const VehicleState& st = track[static_cast<std::size_t>(i + j)];
    future.push_back(KinematicState{static_cast<double>(st.frame - ins.frame) / cfg.sample_rate,
                                    st.x - ins.x, st.y - ins.y, st.vx, st.vy, st.ay});
  }
  s.future = Trajectory::make(std::move(future), 1.0 / cfg.sample_rate);
  s.neighbors = find_neighbors(all_tracks, ins, cfg.smaller_lane_id_is_left);

  char id[64];
  std::snprintf(id, sizeof(id), "%lld-%s%lld", static_cast<long long>(ins.vehicle_id),
                label == Intention::kKeepLane ? "kl" : "lc", static_cast<long long>(ins.frame));
  s.id = id;
  return s;
}

}  // namespace

std::vector<std::vector<VehicleState>> load_tracks(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(DataErrorKind::kMissingFile, path.string(), 0, "cannot open file");
  }

  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw DataError(DataErrorKind::kEmptyFile, path.string(), 0, "file is empty");
  }

  const std::vector<std::string> header = split_csv_line(trim(header_line));
  const std::vector<std::string> required = split_csv_line(kTrackCsvHeader);
  std::map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < header.size(); ++i) {
    columns[trim(header[i])] = i;
  }
  std::vector<std::size_t> idx;
  for (const auto& name : required) {
    const auto it = columns.find(name);
    if (it == columns.end()) {
      throw DataError(DataErrorKind::kSchemaMismatch, path.string(), 1,
                      "missing required column '" + name + "'");
    }
    idx.push_back(it->second);
  }

  std::vector<std::int64_t> order;
  std::map<std::int64_t, std::vector<VehicleState>> by_vehicle;
  std::string line;
  long line_no = 1;
  long rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const std::vector<std::string> fields = split_csv_line(line);
    for (const std::size_t col : idx) {
      if (col >= fields.size()) {
        throw DataError(DataErrorKind::kBadRow, path.string(), line_no, "row has too few fields");
      }
    }
    VehicleState s;
    s.frame = parse_field<std::int64_t>(fields[idx[0]], "frame", path.string(), line_no);
    s.vehicle_id = parse_field<std::int64_t>(fields[idx[1]], "id", path.string(), line_no);
    s.x = parse_field<double>(fields[idx[2]], "x", path.string(), line_no);
    s.y = parse_field<double>(fields[idx[3]], "y", path.string(), line_no);
    s.vx = parse_field<double>(fields[idx[4]], "xVelocity", path.string(), line_no);
    s.vy = parse_field<double>(fields[idx[5]], "yVelocity", path.string(), line_no);
    s.ax = parse_field<double>(fields[idx[6]], "xAcceleration", path.string(), line_no);
    s.ay = parse_field<double>(fields[idx[7]], "yAcceleration", path.string(), line_no);
    s.lane_id = parse_field<int>(fields[idx[8]], "laneId", path.string(), line_no);
    if (by_vehicle.find(s.vehicle_id) == by_vehicle.end()) {
      order.push_back(s.vehicle_id);
    }
    by_vehicle[s.vehicle_id].push_back(s);
    ++rows;
  }
  if (rows == 0) {
    throw DataError(DataErrorKind::kEmptyFile, path.string(), 0, "no data rows");
  }

  std::vector<std::vector<VehicleState>> tracks;
  tracks.reserve(order.size());
  for (const std::int64_t id : order) {
    auto& track = by_vehicle[id];
    std::stable_sort(track.begin(), track.end(),
                     [](const VehicleState& a, const VehicleState& b) { return a.frame < b.frame; });
    tracks.push_back(std::move(track));
  }
  return tracks;
}

void export_tracks(const std::filesystem::path& path,
                   const std::vector<std::vector<VehicleState>>& tracks) {
  std::string out;
  out += kTrackCsvHeader;
  out += '\n';
  for (const auto& track : tracks) {
    for (const auto& s : track) {
      out += std::to_string(s.frame);
      out += ',';
      out += std::to_string(s.vehicle_id);
      out += ',';
      out += render_double(s.x);
      out += ',';
      out += render_double(s.y);
      out += ',';
      out += render_double(s.vx);
      out += ',';
      out += render_double(s.vy);
      out += ',';
      out += render_double(s.ax);
      out += ',';
      out += render_double(s.ay);
      out += ',';
      out += std::to_string(s.lane_id);
      out += '\n';
    }
  }
  atomic_write_text(path, out);
}

std::vector<InsertionEvent> detect_insertion(const std::vector<VehicleState>& track,
                                             bool smaller_lane_id_is_left) {
  std::vector<InsertionEvent> events;
  for (std::size_t i = 1; i < track.size(); ++i) {
    if (track[i].lane_id == track[i - 1].lane_id) {
      continue;
    }
    const bool to_smaller = track[i].lane_id < track[i - 1].lane_id;
    const bool left = to_smaller == smaller_lane_id_is_left;
    events.push_back(InsertionEvent{i, track[i].frame,
                                    left ? CrossingDirection::kLeft : CrossingDirection::kRight});
  }
  return events;
}

ScenarioBuildResult build_scenarios(const std::vector<std::vector<VehicleState>>& tracks,
                                    const WindowConfig& cfg) {
  cfg.validate();
  const std::int64_t h = cfg.history_frames();
  const std::int64_t f = cfg.future_frames();
  const std::int64_t stride = std::max<std::int64_t>(
      std::llround(cfg.keep_lane_stride * cfg.sample_rate), 1);

  ScenarioBuildResult result;
  for (const auto& whole_track : tracks) {
    for (const auto& track : split_contiguous(whole_track)) {
      const auto n = static_cast<std::int64_t>(track.size());
      const std::vector<InsertionEvent> events = detect_insertion(track, cfg.smaller_lane_id_is_left);

      for (const auto& event : events) {
        const auto i = static_cast<std::int64_t>(event.index);
        if (i < h || i + f > n - 1) {
          ++result.skipped;
          continue;
        }
        const Intention label = event.direction == CrossingDirection::kLeft
                                    ? Intention::kLeftLaneChange
                                    : Intention::kRightLaneChange;
        result.scenarios.push_back(window_scenario(track, event.index, label, cfg, tracks));
      }

      for (std::int64_t start = 0; start + h + f <= n - 1; start += stride) {
        const bool has_event = std::any_of(events.begin(), events.end(), [&](const InsertionEvent& e) {
          const auto idx = static_cast<std::int64_t>(e.index);
          return idx > start && idx <= start + h + f;
        });
        if (has_event) {
          continue;
        }
        result.scenarios.push_back(window_scenario(track, static_cast<std::size_t>(start + h),
                                                   Intention::kKeepLane, cfg, tracks));
      }
    }
  }
  return result;
}

void SynthConfig::validate() const {
  window.validate();
  const double total = keep_fraction + left_fraction + right_fraction;
  if (keep_fraction < 0.0 || left_fraction < 0.0 || right_fraction < 0.0 ||
      std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("class fractions must be non-negative and sum to 1");
  }
  if (noise_lat < 0.0 || noise_lon < 0.0) {
    throw std::invalid_argument("noise levels must be non-negative");
  }
  if (!(w_min <= w_max) || !(d_min <= d_max) || !(v0_min <= v0_max) || !(dvx_min <= dvx_max) ||
      !(vx_min <= vx_max)) {
    throw std::invalid_argument("parameter ranges must satisfy min <= max");
  }
  if (d_min <= kMinManeuverDuration) {
    throw std::invalid_argument("d_min must exceed the duration floor");
  }
}

namespace {

std::array<int, 3> apportion_classes(int n, const SynthConfig& cfg) {
  const double fracs[3] = {cfg.keep_fraction, cfg.left_fraction, cfg.right_fraction};
  std::array<int, 3> counts{};
  double remainders[3];
  int assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = fracs[i] * n;
    counts[i] = static_cast<int>(std::floor(exact + 1e-9));
    remainders[i] = exact - counts[i];
    assigned += counts[i];
  }
  while (assigned < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (remainders[i] > remainders[best] + 1e-12) {
        best = i;
      }
    }
    ++counts[best];
    remainders[best] = -1.0;
    ++assigned;
  }
  return counts;
}

// Lane geometry used by the generator: 4 m lanes, smaller ids to the left
// (larger y, since y is positive leftward).
double lane_center_y(int lane_id) {
  return (4 - lane_id) * 4.0;
}

}  // namespace

SynthResult synth_generate(int n, std::uint64_t seed, const SynthConfig& cfg) {
  cfg.validate();
  if (n < 0) {
    throw std::invalid_argument("synth_generate requires n >= 0");
  }

  const WindowConfig& win = cfg.window;
  const double rate = win.sample_rate;
  const std::int64_t h = win.history_frames();
  const std::int64_t gap = std::llround(win.t_h * rate);
  const std::int64_t f = win.future_frames();

  const std::array<int, 3> counts = apportion_classes(n, cfg);
  std::vector<Intention> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < counts[0]; ++i) labels.push_back(Intention::kKeepLane);
  for (int i = 0; i < counts[1]; ++i) labels.push_back(Intention::kLeftLaneChange);
  for (int i = 0; i < counts[2]; ++i) labels.push_back(Intention::kRightLaneChange);

  Rng rng(seed);
  SynthResult result;
  result.scenarios.reserve(labels.size());
  result.tracks.reserve(labels.size());

  const int start_lane = 3;
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const Intention label = labels[k];
    const double vx0 = rng.uniform(cfg.vx_min, cfg.vx_max);

    std::optional<SamParams> params;
    int target_lane = start_lane;
    double y_anchor = lane_center_y(start_lane);
    if (label != Intention::kKeepLane) {
      const double dir = label == Intention::kLeftLaneChange ? 1.0 : -1.0;
      const double w = dir * rng.uniform(cfg.w_min, cfg.w_max);
      const double d = rng.uniform(cfg.d_min, cfg.d_max);
      const double v0 = dir * rng.uniform(cfg.v0_min, cfg.v0_max);
      const double dvx = rng.sign() * rng.uniform(cfg.dvx_min, cfg.dvx_max);
      params = SamParams::make(w, d, v0, dvx, vx0);
      target_lane = win.smaller_lane_id_is_left == (dir > 0.0) ? start_lane - 1 : start_lane + 1;
      // Insertion sits on the boundary between the two lanes.
      y_anchor = 0.5 * (lane_center_y(start_lane) + lane_center_y(target_lane));
    }

    // Future in the crossing frame. The t = 0 sample anchors the frame and
    // stays noise-free.
    Trajectory future = [&] {
      if (params) {
        return sample_trajectory(*params, win.t_h + win.t_p, 1.0 / rate);
      }
      std::vector<KinematicState> samples;
      samples.reserve(static_cast<std::size_t>(f + 1));
      for (std::int64_t j = 0; j <= f; ++j) {
        const double t = static_cast<double>(j) / rate;
        samples.push_back(KinematicState{t, vx0 * t, 0.0, vx0, 0.0, 0.0});
      }
      return Trajectory::make(std::move(samples), 1.0 / rate);
    }();
    if (cfg.noise_lat > 0.0 || cfg.noise_lon > 0.0) {
      for (std::size_t j = 1; j < future.samples.size(); ++j) {
        if (cfg.noise_lon > 0.0) future.samples[j].x += rng.normal(0.0, cfg.noise_lon);
        if (cfg.noise_lat > 0.0) future.samples[j].y += rng.normal(0.0, cfg.noise_lat);
      }
    }
    if (gap > 0) {
      std::vector<KinematicState> tail(future.samples.begin() + gap, future.samples.end());
      future = Trajectory::make(std::move(tail), 1.0 / rate);
    }

    // History: lateral velocity ramps linearly from rest to the crossing
    // value, which keeps the feature the baseline thresholds on well above
    // zero for lane changes and exactly zero for keep-lane.
    const double vy_cross = params ? modified_sam_lateral(*params, 0.0).vy : 0.0;
    const double ax_future = params ? params->dvx / params->d : 0.0;
    const auto vid = static_cast<std::int64_t>(k) + 1;
    std::vector<VehicleState> history;
    history.reserve(static_cast<std::size_t>(h + 1));
    for (std::int64_t j = -h; j <= 0; ++j) {
      const double tau = static_cast<double>(j) / rate;
      VehicleState s;
      s.frame = j + h;
      s.vehicle_id = vid;
      s.vx = vx0;
      s.vy = vy_cross * (tau + win.t_input) / win.t_input;
      s.ax = 0.0;
      s.ay = vy_cross / win.t_input;
      s.x = 200.0 + vx0 * tau;
      s.y = y_anchor - vy_cross / (2.0 * win.t_input) *
                           (win.t_input * win.t_input - (tau + win.t_input) * (tau + win.t_input));
      s.lane_id = j == 0 ? target_lane : start_lane;
      if (j != 0) {
        if (cfg.noise_lon > 0.0) s.x += rng.normal(0.0, cfg.noise_lon);
        if (cfg.noise_lat > 0.0) s.y += rng.normal(0.0, cfg.noise_lat);
      }
      history.push_back(s);
    }

    Scenario s;
    char id[32];
    std::snprintf(id, sizeof(id), "syn-%06zu", k);
    s.id = id;
    s.label = label;
    s.sample_rate = rate;
    s.history = history;
    s.insertion = history.back();
    s.future = future;
    s.hidden_params = params;

    if (rng.uniform01() < cfg.neighbor_probability) {
      const double lead_gap = rng.uniform(20.0, 80.0);
      const double rel_speed = rng.uniform(-8.0, 3.0);
      VehicleState lead;
      lead.frame = s.insertion.frame;
      lead.vehicle_id = 1000000 + vid;
      lead.x = s.insertion.x + lead_gap;
      lead.y = lane_center_y(target_lane);
      lead.vx = vx0 + rel_speed;
      lead.vy = 0.0;
      lead.lane_id = target_lane;
      s.neighbors[NeighborSlot::kPreceding] = lead;
    }

    // Exportable track: history rows plus the future mapped back to
    // recording coordinates.
    std::vector<VehicleState> track = history;
    for (std::size_t j = 1; j < s.future.samples.size(); ++j) {
      const KinematicState& fs = s.future.samples[j];
      VehicleState row;
      row.frame = h + gap + static_cast<std::int64_t>(j);
      row.vehicle_id = vid;
      row.x = s.insertion.x + fs.x;
      row.y = s.insertion.y + fs.y;
      row.vx = fs.vx;
      row.vy = fs.vy;
      row.ax = ax_future;
      row.ay = fs.ay;
      row.lane_id = target_lane;
      track.push_back(row);
    }

    result.scenarios.push_back(std::move(s));
    result.tracks.push_back(std::move(track));
  }
  return result;
}

}  // namespace samkit
