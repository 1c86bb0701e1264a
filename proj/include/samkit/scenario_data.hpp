#pragma once

#include <filesystem>
#include <vector>

#include "samkit/scenario.hpp"

namespace samkit {

enum class DataErrorKind {
  kEmptyFile,
  kSchemaMismatch,
  kBadRow,
  kBadRecord,
  kMissingFile,
};

class DataError : public std::runtime_error {
 public:
  DataError(DataErrorKind kind, std::string file, long line, const std::string& message)
      : std::runtime_error(file + (line > 0 ? ":" + std::to_string(line) : "") + ": " + message),
        kind(kind),
        file(std::move(file)),
        line(line) {}

  DataErrorKind kind;
  std::string file;
  long line;  // 1-based; 0 when not tied to a line
};

// Track CSV schema (highD-compatible subset). Extra columns are ignored.
inline constexpr const char* kTrackCsvHeader =
    "frame,id,x,y,xVelocity,yVelocity,xAcceleration,yAcceleration,laneId";

// Loads per-vehicle state sequences, grouped by vehicle id (first-appearance
// order) and sorted by frame. Throws DataError on schema/row problems.
std::vector<std::vector<VehicleState>> load_tracks(const std::filesystem::path& path);

// Writes tracks in the same CSV schema with shortest-round-trip numbers, so
// load_tracks(export_tracks(x)) == x holds bit-exactly.
void export_tracks(const std::filesystem::path& path,
                   const std::vector<std::vector<VehicleState>>& tracks);

enum class CrossingDirection { kLeft, kRight };

struct InsertionEvent {
  std::size_t index = 0;      // state index whose lane differs from its predecessor
  std::int64_t frame = 0;
  CrossingDirection direction = CrossingDirection::kLeft;
};

// One event per consecutive lane_id change; empty for lane-keeping tracks.
std::vector<InsertionEvent> detect_insertion(const std::vector<VehicleState>& track,
                                             bool smaller_lane_id_is_left);

struct ScenarioBuildResult {
  std::vector<Scenario> scenarios;
  int skipped = 0;  // events without enough history/future context
};

// Windows every lane-boundary crossing with enough context into a labeled
// scenario, and samples keep-lane windows (no crossing anywhere in the
// window) at cfg.keep_lane_stride.
ScenarioBuildResult build_scenarios(const std::vector<std::vector<VehicleState>>& tracks,
                                    const WindowConfig& cfg);

struct SynthConfig {
  WindowConfig window;
  double keep_fraction = 0.66;
  double left_fraction = 0.17;
  double right_fraction = 0.17;
  double noise_lat = 0.0;  // m, observation noise on y
  double noise_lon = 0.0;  // m, observation noise on x
  // Parameter draw ranges for lane-change futures.
  double w_min = 3.5, w_max = 4.0;    // m, magnitude
  double d_min = 3.0, d_max = 6.0;    // s
  double v0_min = 0.1, v0_max = 0.35; // m/s, magnitude (sign follows w)
  double dvx_min = 0.5, dvx_max = 2.0;// m/s, magnitude (sign random)
  double vx_min = 25.0, vx_max = 35.0;// m/s
  double neighbor_probability = 0.5;  // chance of a preceding vehicle

  void validate() const;
};

struct SynthResult {
  std::vector<Scenario> scenarios;
  std::vector<std::vector<VehicleState>> tracks;  // target-vehicle tracks, exportable
};

// Deterministic-from-seed scenario generator. Lane-change futures come from
// random maneuver parameters (kept as hidden_params); keep-lane futures are
// constant velocity. Identical (n, seed, cfg) give bit-identical output.
SynthResult synth_generate(int n, std::uint64_t seed, const SynthConfig& cfg = {});

// Line-delimited JSON persistence (one scenario per line; see
// docs/file_formats.md for the exact key set).
void save_scenarios(const std::filesystem::path& path, const std::vector<Scenario>& scenarios);
std::vector<Scenario> load_scenarios(const std::filesystem::path& path);

std::string scenario_to_json_line(const Scenario& s);
Scenario scenario_from_json_line(const std::string& line);

}  // namespace samkit
