#include <doctest.h>

#include <cmath>
#include <fstream>

#include "samkit/fileio.hpp"
#include "samkit/sam_fitting.hpp"
#include "samkit/scenario_data.hpp"
#include "test_util.hpp"

using namespace samkit;
using testutil::TempDir;

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// A lane-keeping track of `seconds` duration at 25 Hz.
std::vector<VehicleState> keep_lane_track(std::int64_t vehicle_id, double seconds, int lane_id,
                                          double vx = 30.0) {
  std::vector<VehicleState> track;
  const auto frames = static_cast<std::int64_t>(std::llround(seconds * 25.0));
  for (std::int64_t f = 0; f <= frames; ++f) {
    VehicleState s;
    s.frame = f;
    s.vehicle_id = vehicle_id;
    s.x = vx * static_cast<double>(f) / 25.0;
    s.y = 4.0;
    s.vx = vx;
    s.lane_id = lane_id;
    track.push_back(s);
  }
  return track;
}

}  // namespace

TEST_CASE("load_tracks: grouping, schema and row errors") {
  TempDir dir("tracks");

  write_file(dir / "two.csv",
             "frame,id,x,y,xVelocity,yVelocity,xAcceleration,yAcceleration,laneId\n"
             "0,7,1.0,2.0,30.0,0.0,0.0,0.0,3\n"
             "1,7,2.2,2.0,30.0,0.0,0.0,0.0,3\n");
  const auto tracks = load_tracks(dir / "two.csv");
  REQUIRE(tracks.size() == 1);
  CHECK(tracks[0].size() == 2);
  CHECK(tracks[0][1].x == 2.2);
  CHECK(tracks[0][1].vehicle_id == 7);

  write_file(dir / "missing.csv",
             "frame,id,x,y,xVelocity,yVelocity,xAcceleration,yAcceleration\n"
             "0,7,1.0,2.0,30.0,0.0,0.0,0.0\n");
  try {
    load_tracks(dir / "missing.csv");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.kind == DataErrorKind::kSchemaMismatch);
    CHECK(std::string(e.what()).find("laneId") != std::string::npos);
  }

  write_file(dir / "badrow.csv",
             "frame,id,x,y,xVelocity,yVelocity,xAcceleration,yAcceleration,laneId\n"
             "0,7,1.0,2.0,30.0,0.0,0.0,0.0,3\n"
             "1,7,oops,2.0,30.0,0.0,0.0,0.0,3\n");
  try {
    load_tracks(dir / "badrow.csv");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.kind == DataErrorKind::kBadRow);
    CHECK(e.line == 3);
  }

  write_file(dir / "empty.csv", "");
  CHECK_THROWS_AS(static_cast<void>(load_tracks(dir / "empty.csv")), DataError);
  write_file(dir / "header_only.csv",
             "frame,id,x,y,xVelocity,yVelocity,xAcceleration,yAcceleration,laneId\n");
  try {
    load_tracks(dir / "header_only.csv");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.kind == DataErrorKind::kEmptyFile);
  }

  // Extra columns are tolerated (recordings carry many more).
  write_file(dir / "extra.csv",
             "frame,id,width,x,y,xVelocity,yVelocity,xAcceleration,yAcceleration,laneId\n"
             "0,7,1.9,1.0,2.0,30.0,0.0,0.0,0.0,3\n");
  CHECK(load_tracks(dir / "extra.csv")[0][0].x == 1.0);
}

TEST_CASE("export_tracks round-trips bit-exactly through load_tracks") {
  TempDir dir("roundtrip");
  const SynthResult synth = synth_generate(10, 42, SynthConfig{});
  export_tracks(dir / "tracks.csv", synth.tracks);
  const auto loaded = load_tracks(dir / "tracks.csv");
  REQUIRE(loaded.size() == synth.tracks.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    REQUIRE(loaded[i].size() == synth.tracks[i].size());
    for (std::size_t j = 0; j < loaded[i].size(); ++j) {
      const VehicleState& a = synth.tracks[i][j];
      const VehicleState& b = loaded[i][j];
      CHECK(a.frame == b.frame);
      CHECK(a.vehicle_id == b.vehicle_id);
      CHECK(a.x == b.x);
      CHECK(a.y == b.y);
      CHECK(a.vx == b.vx);
      CHECK(a.vy == b.vy);
      CHECK(a.ax == b.ax);
      CHECK(a.ay == b.ay);
      CHECK(a.lane_id == b.lane_id);
    }
  }
}

TEST_CASE("detect_insertion follows the lane numbering convention") {
  std::vector<VehicleState> track;
  for (int lane : {3, 3, 3, 2, 2}) {
    VehicleState s;
    s.frame = static_cast<std::int64_t>(track.size());
    s.lane_id = lane;
    track.push_back(s);
  }
  const auto events = detect_insertion(track, true);
  REQUIRE(events.size() == 1);
  CHECK(events[0].index == 3);
  CHECK(events[0].direction == CrossingDirection::kLeft);
  // Opposite convention flips the direction.
  CHECK(detect_insertion(track, false)[0].direction == CrossingDirection::kRight);

  CHECK(detect_insertion(keep_lane_track(1, 2.0, 3), true).empty());

  std::vector<VehicleState> zigzag;
  for (int lane : {3, 2, 2, 3}) {
    VehicleState s;
    s.frame = static_cast<std::int64_t>(zigzag.size());
    s.lane_id = lane;
    zigzag.push_back(s);
  }
  const auto two = detect_insertion(zigzag, true);
  REQUIRE(two.size() == 2);
  CHECK(two[0].direction == CrossingDirection::kLeft);
  CHECK(two[1].direction == CrossingDirection::kRight);
}

TEST_CASE("build_scenarios: keep-lane stride arithmetic") {
  WindowConfig cfg;  // t_input 3, t_p 4, stride 5, 25 Hz
  const auto result = build_scenarios({keep_lane_track(1, 30.0, 3)}, cfg);
  CHECK(result.scenarios.size() == 5);  // floor((30-7)/5)+1
  CHECK(result.skipped == 0);
  for (const auto& s : result.scenarios) {
    CHECK(s.label == Intention::kKeepLane);
    CHECK(s.history.size() == 76);  // t_input*rate + 1
    CHECK(s.future.samples.size() == 101);
    CHECK(s.future.samples[0].x == 0.0);
    CHECK(s.future.samples[0].y == 0.0);
    CHECK(s.future.samples[0].t == 0.0);
  }
}

TEST_CASE("build_scenarios: lane-change labeling and insufficient context") {
  WindowConfig cfg;
  const SynthResult synth = synth_generate(30, 5, SynthConfig{});

  // Rebuild scenarios from the exported track form; labels must agree.
  const auto rebuilt = build_scenarios(synth.tracks, cfg);
  int keeps = 0, lefts = 0, rights = 0;
  for (const auto& s : rebuilt.scenarios) {
    if (s.label == Intention::kKeepLane) ++keeps;
    if (s.label == Intention::kLeftLaneChange) ++lefts;
    if (s.label == Intention::kRightLaneChange) ++rights;
  }
  CHECK(keeps == 20);   // one window per keep-lane track
  CHECK(lefts == 5);
  CHECK(rights == 5);
  CHECK(rebuilt.skipped == 0);

  // An event 10 frames in cannot supply 3 s of history.
  std::vector<VehicleState> short_history = keep_lane_track(2, 8.0, 3);
  for (std::size_t i = 10; i < short_history.size(); ++i) {
    short_history[i].lane_id = 2;
  }
  const auto skipped = build_scenarios({short_history}, cfg);
  CHECK(skipped.skipped == 1);
  for (const auto& s : skipped.scenarios) {
    CHECK(s.label == Intention::kKeepLane);
  }
}

TEST_CASE("scenario labeling soundness and insertion-frame property") {
  const SynthResult synth = synth_generate(40, 9, SynthConfig{});
  for (const auto& s : synth.scenarios) {
    // Lane-change scenarios change lane exactly at the insertion frame.
    int changes = 0;
    for (std::size_t i = 1; i < s.history.size(); ++i) {
      if (s.history[i].lane_id != s.history[i - 1].lane_id) {
        ++changes;
        CHECK(s.history[i].frame == s.insertion.frame);
      }
    }
    if (s.label == Intention::kKeepLane) {
      CHECK(changes == 0);
    } else {
      CHECK(changes == 1);
    }
    // Insertion maps to the future's origin.
    CHECK(s.future.samples[0].t == 0.0);
    CHECK(s.future.samples[0].x == 0.0);
    CHECK(s.future.samples[0].y == 0.0);
    // Frame-to-time consistency across history.
    for (std::size_t i = 1; i < s.history.size(); ++i) {
      const double dt_frames =
          static_cast<double>(s.history[i].frame - s.history[i - 1].frame) / s.sample_rate;
      CHECK(std::abs(dt_frames - 1.0 / s.sample_rate) <= 1e-9);
    }
  }
}

TEST_CASE("synth_generate is bit-deterministic and honors the class mix") {
  const SynthResult a = synth_generate(100, 7, SynthConfig{});
  const SynthResult b = synth_generate(100, 7, SynthConfig{});
  REQUIRE(a.scenarios.size() == 100);
  REQUIRE(b.scenarios.size() == 100);
  for (std::size_t i = 0; i < a.scenarios.size(); ++i) {
    CHECK(scenario_to_json_line(a.scenarios[i]) == scenario_to_json_line(b.scenarios[i]));
  }

  int counts[3] = {0, 0, 0};
  for (const auto& s : a.scenarios) {
    ++counts[static_cast<int>(s.label)];
  }
  CHECK(counts[0] == 66);
  CHECK(counts[1] == 17);
  CHECK(counts[2] == 17);
}

TEST_CASE("noiseless synthetic futures round-trip through the fitter") {
  SynthConfig cfg;
  cfg.keep_fraction = 0.0;
  cfg.left_fraction = 0.5;
  cfg.right_fraction = 0.5;
  const SynthResult synth = synth_generate(12, 13, cfg);
  for (const auto& s : synth.scenarios) {
    REQUIRE(s.hidden_params.has_value());
    const FitResult fit = fit_sam(s.future, s.insertion.vx, FitConfig{});
    CHECK(testutil::rel_err(fit.params.w, s.hidden_params->w) <= 1e-4);
    CHECK(testutil::rel_err(fit.params.v0, s.hidden_params->v0) <= 1e-4);
    CHECK(testutil::rel_err(fit.params.dvx, s.hidden_params->dvx) <= 1e-4);
    CHECK(std::abs(fit.params.d - s.hidden_params->d) <= 1e-4);
  }
}

TEST_CASE("scenario JSONL persistence round-trips") {
  TempDir dir("jsonl");
  SynthConfig cfg;
  cfg.noise_lat = 0.05;
  cfg.noise_lon = 0.1;
  const SynthResult synth = synth_generate(20, 3, cfg);
  save_scenarios(dir / "scenarios.jsonl", synth.scenarios);
  const auto loaded = load_scenarios(dir / "scenarios.jsonl");
  REQUIRE(loaded.size() == synth.scenarios.size());
  for (std::size_t i = 0; i < loaded.size(); ++i) {
    CHECK(scenario_to_json_line(loaded[i]) == scenario_to_json_line(synth.scenarios[i]));
  }

  write_file(dir / "broken.jsonl", scenario_to_json_line(synth.scenarios[0]) + "\n{not json}\n");
  try {
    load_scenarios(dir / "broken.jsonl");
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(e.kind == DataErrorKind::kBadRecord);
    CHECK(e.line == 2);
  }
}

TEST_CASE("synthetic lane-change scenarios are threshold-separable") {
  const SynthResult synth = synth_generate(60, 21, SynthConfig{});
  for (const auto& s : synth.scenarios) {
    const double mean_vy = recent_mean_lateral_velocity(s, 0.5);
    if (s.label == Intention::kKeepLane) {
      CHECK(std::abs(mean_vy) < 0.2);
    } else if (s.label == Intention::kLeftLaneChange) {
      CHECK(mean_vy > 0.2);
    } else {
      CHECK(mean_vy < -0.2);
    }
  }
}
