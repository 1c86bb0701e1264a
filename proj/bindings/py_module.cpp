#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "samkit/baseline_predict.hpp"
#include "samkit/evalkit.hpp"
#include "samkit/fileio.hpp"
#include "samkit/hybrid_codec.hpp"
#include "samkit/prompt_builder.hpp"
#include "samkit/sam_fitting.hpp"
#include "samkit/sam_kinematics.hpp"
#include "samkit/scenario_data.hpp"
#include "samkit/version.hpp"

namespace py = pybind11;
using namespace samkit;

PYBIND11_MODULE(_samkit, m) {
  m.doc() = "Lane-change maneuver modeling: sinusoidal-acceleration kinematics, "
            "least-squares parameter recovery, hybrid output codec, scenario "
            "tooling and scoring.";
  m.attr("__version__") = kVersion;
  m.attr("MIN_MANEUVER_DURATION") = kMinManeuverDuration;
  m.attr("BASELINE_COORD_POINT_COUNT") = kBaselineCoordPointCount;
  m.attr("BASELINE_COORD_SCALAR_COUNT") = kBaselineCoordScalarCount;

  py::register_exception<OutOfManeuverWindow>(m, "OutOfManeuverWindow", PyExc_ValueError);
  py::register_exception<InvalidStep>(m, "InvalidStep", PyExc_ValueError);
  py::register_exception<RankDeficient>(m, "RankDeficient", PyExc_RuntimeError);
  py::register_exception<CodecError>(m, "CodecError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<Intention>(m, "Intention")
      .value("KEEP_LANE", Intention::kKeepLane)
      .value("LEFT_LANE_CHANGE", Intention::kLeftLaneChange)
      .value("RIGHT_LANE_CHANGE", Intention::kRightLaneChange);

  py::class_<SamParams>(m, "SamParams")
      .def(py::init(&SamParams::make), py::arg("w"), py::arg("d"), py::arg("v0"),
           py::arg("dvx"), py::arg("vx0"))
      .def_readonly("w", &SamParams::w)
      .def_readonly("d", &SamParams::d)
      .def_readonly("v0", &SamParams::v0)
      .def_readonly("dvx", &SamParams::dvx)
      .def_readonly("vx0", &SamParams::vx0)
      .def("__repr__", [](const SamParams& p) {
        return "SamParams(w=" + std::to_string(p.w) + ", d=" + std::to_string(p.d) +
               ", v0=" + std::to_string(p.v0) + ", dvx=" + std::to_string(p.dvx) +
               ", vx0=" + std::to_string(p.vx0) + ")";
      });

  py::class_<ClassicalSamParams>(m, "ClassicalSamParams")
      .def(py::init(&ClassicalSamParams::make), py::arg("y0"), py::arg("w"), py::arg("d"),
           py::arg("t_start"))
      .def_readonly("y0", &ClassicalSamParams::y0)
      .def_readonly("w", &ClassicalSamParams::w)
      .def_readonly("d", &ClassicalSamParams::d)
      .def_readonly("t_start", &ClassicalSamParams::t_start);

  py::class_<KinematicState>(m, "KinematicState")
      .def(py::init<>())
      .def(py::init([](double t, double x, double y, double vx, double vy, double ay) {
             return KinematicState{t, x, y, vx, vy, ay};
           }),
           py::arg("t"), py::arg("x"), py::arg("y"), py::arg("vx") = 0.0, py::arg("vy") = 0.0,
           py::arg("ay") = 0.0)
      .def_readwrite("t", &KinematicState::t)
      .def_readwrite("x", &KinematicState::x)
      .def_readwrite("y", &KinematicState::y)
      .def_readwrite("vx", &KinematicState::vx)
      .def_readwrite("vy", &KinematicState::vy)
      .def_readwrite("ay", &KinematicState::ay);

  py::class_<Trajectory>(m, "Trajectory")
      .def_static("make", &Trajectory::make, py::arg("samples"), py::arg("dt"))
      .def_readonly("samples", &Trajectory::samples)
      .def_readonly("dt", &Trajectory::dt)
      .def("duration", &Trajectory::duration)
      .def("__len__", [](const Trajectory& t) { return t.samples.size(); });

  py::class_<LateralState>(m, "LateralState")
      .def_readonly("y", &LateralState::y)
      .def_readonly("vy", &LateralState::vy)
      .def_readonly("ay", &LateralState::ay);

  py::class_<LongitudinalState>(m, "LongitudinalState")
      .def_readonly("x", &LongitudinalState::x)
      .def_readonly("vx", &LongitudinalState::vx);

  m.def("modified_sam_lateral", &modified_sam_lateral, py::arg("params"), py::arg("t"));
  m.def("modified_sam_lateral_extended", &modified_sam_lateral_extended, py::arg("params"),
        py::arg("t"));
  m.def("classical_sam_lateral", &classical_sam_lateral, py::arg("params"), py::arg("t"));
  m.def("longitudinal_profile", &longitudinal_profile, py::arg("params"), py::arg("t"));
  m.def("sample_trajectory", &sample_trajectory, py::arg("params"), py::arg("horizon"),
        py::arg("dt"));

  py::class_<FitConfig>(m, "FitConfig")
      .def(py::init<>())
      .def_readwrite("d_min", &FitConfig::d_min)
      .def_readwrite("d_max", &FitConfig::d_max)
      .def_readwrite("d_tolerance", &FitConfig::d_tolerance)
      .def_readwrite("grid_steps", &FitConfig::grid_steps);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("params", &FitResult::params)
      .def_readonly("lateral_sse", &FitResult::lateral_sse)
      .def_readonly("longitudinal_sse", &FitResult::longitudinal_sse)
      .def_readonly("n_points", &FitResult::n_points)
      .def_readonly("converged", &FitResult::converged);

  py::class_<LateralFit>(m, "LateralFit")
      .def_readonly("w", &LateralFit::w)
      .def_readonly("v0", &LateralFit::v0)
      .def_readonly("sse", &LateralFit::sse);

  m.def("fit_lateral_given_d", &fit_lateral_given_d, py::arg("trajectory"), py::arg("d"));
  m.def("fit_sam", &fit_sam, py::arg("trajectory"), py::arg("vx0"), py::arg("config") = FitConfig{});
  m.def("fit_oracle", &fit_oracle, py::arg("trajectory"), py::arg("vx0"),
        py::arg("config") = FitConfig{});

  py::class_<SamPayload>(m, "SamPayload")
      .def(py::init([](double w, double d, double v0, double dvx) {
             return SamPayload{w, d, v0, dvx};
           }),
           py::arg("w"), py::arg("d"), py::arg("v0"), py::arg("dvx"))
      .def_readonly("w", &SamPayload::w)
      .def_readonly("d", &SamPayload::d)
      .def_readonly("v0", &SamPayload::v0)
      .def_readonly("dvx", &SamPayload::dvx);

  py::class_<CoordPoint>(m, "CoordPoint")
      .def(py::init([](double x, double y) { return CoordPoint{x, y}; }), py::arg("x"),
           py::arg("y"))
      .def_readonly("x", &CoordPoint::x)
      .def_readonly("y", &CoordPoint::y);

  py::class_<HybridTrajectory>(m, "HybridTrajectory")
      .def_static("coords", &HybridTrajectory::coords, py::arg("points"))
      .def_static("params", &HybridTrajectory::params, py::arg("payload"))
      .def_property_readonly("is_coords", &HybridTrajectory::is_coords)
      .def_property_readonly("is_params", &HybridTrajectory::is_params)
      .def("coord_points", &HybridTrajectory::coord_points)
      .def("sam_params", &HybridTrajectory::sam_params);

  py::class_<ModelOutput>(m, "ModelOutput")
      .def_static("make", &ModelOutput::make, py::arg("thought"), py::arg("intention"),
                  py::arg("trajectory"))
      .def_readonly("thought", &ModelOutput::thought)
      .def_readonly("intention", &ModelOutput::intention)
      .def_readonly("trajectory", &ModelOutput::trajectory);

  py::enum_<ParseErrorKind>(m, "ParseErrorKind")
      .value("MISSING_FINAL_ANSWER", ParseErrorKind::kMissingFinalAnswer)
      .value("BAD_INTENTION", ParseErrorKind::kBadIntention)
      .value("WRONG_POINT_COUNT", ParseErrorKind::kWrongPointCount)
      .value("MALFORMED_NUMBER", ParseErrorKind::kMalformedNumber)
      .value("VARIANT_MISMATCH", ParseErrorKind::kVariantMismatch)
      .value("INVALID_VALUE", ParseErrorKind::kInvalidValue)
      .value("UNEXPECTED_TOKEN", ParseErrorKind::kUnexpectedToken);

  py::class_<ParseError>(m, "ParseError")
      .def_readonly("kind", &ParseError::kind)
      .def_readonly("offset", &ParseError::offset)
      .def_readonly("message", &ParseError::message);

  py::class_<ParseOutcome>(m, "ParseOutcome")
      .def_readonly("output", &ParseOutcome::output)
      .def_readonly("error", &ParseOutcome::error)
      .def("ok", &ParseOutcome::ok);

  m.def("serialize_output", &serialize_output, py::arg("output"));
  m.def("parse_output", [](const std::string& text) { return parse_output(text); },
        py::arg("text"));
  m.def("try_parse_output", [](const std::string& text) { return try_parse_output(text); },
        py::arg("text"));
  m.def("payload_size", &payload_size, py::arg("trajectory"));
  m.def("format_fixed3", &format_fixed3, py::arg("value"));
  m.def("quantize3", &quantize3, py::arg("value"));

  py::enum_<NeighborSlot>(m, "NeighborSlot")
      .value("PRECEDING", NeighborSlot::kPreceding)
      .value("FOLLOWING", NeighborSlot::kFollowing)
      .value("LEFT_PRECEDING", NeighborSlot::kLeftPreceding)
      .value("LEFT_ALONGSIDE", NeighborSlot::kLeftAlongside)
      .value("LEFT_FOLLOWING", NeighborSlot::kLeftFollowing)
      .value("RIGHT_PRECEDING", NeighborSlot::kRightPreceding)
      .value("RIGHT_ALONGSIDE", NeighborSlot::kRightAlongside)
      .value("RIGHT_FOLLOWING", NeighborSlot::kRightFollowing);

  py::class_<VehicleState>(m, "VehicleState")
      .def(py::init<>())
      .def_readwrite("frame", &VehicleState::frame)
      .def_readwrite("vehicle_id", &VehicleState::vehicle_id)
      .def_readwrite("x", &VehicleState::x)
      .def_readwrite("y", &VehicleState::y)
      .def_readwrite("vx", &VehicleState::vx)
      .def_readwrite("vy", &VehicleState::vy)
      .def_readwrite("ax", &VehicleState::ax)
      .def_readwrite("ay", &VehicleState::ay)
      .def_readwrite("lane_id", &VehicleState::lane_id);

  py::class_<WindowConfig>(m, "WindowConfig")
      .def(py::init<>())
      .def_readwrite("t_input", &WindowConfig::t_input)
      .def_readwrite("t_p", &WindowConfig::t_p)
      .def_readwrite("t_h", &WindowConfig::t_h)
      .def_readwrite("sample_rate", &WindowConfig::sample_rate)
      .def_readwrite("smaller_lane_id_is_left", &WindowConfig::smaller_lane_id_is_left)
      .def_readwrite("keep_lane_stride", &WindowConfig::keep_lane_stride);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("id", &Scenario::id)
      .def_readwrite("label", &Scenario::label)
      .def_readwrite("sample_rate", &Scenario::sample_rate)
      .def_readwrite("history", &Scenario::history)
      .def_readwrite("insertion", &Scenario::insertion)
      .def_readwrite("future", &Scenario::future)
      .def_readwrite("neighbors", &Scenario::neighbors)
      .def_readwrite("hidden_params", &Scenario::hidden_params);

  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("window", &SynthConfig::window)
      .def_readwrite("keep_fraction", &SynthConfig::keep_fraction)
      .def_readwrite("left_fraction", &SynthConfig::left_fraction)
      .def_readwrite("right_fraction", &SynthConfig::right_fraction)
      .def_readwrite("noise_lat", &SynthConfig::noise_lat)
      .def_readwrite("noise_lon", &SynthConfig::noise_lon)
      .def_readwrite("neighbor_probability", &SynthConfig::neighbor_probability);

  py::class_<SynthResult>(m, "SynthResult")
      .def_readonly("scenarios", &SynthResult::scenarios)
      .def_readonly("tracks", &SynthResult::tracks);

  py::class_<InsertionEvent>(m, "InsertionEvent")
      .def_readonly("index", &InsertionEvent::index)
      .def_readonly("frame", &InsertionEvent::frame)
      .def_readonly("direction", &InsertionEvent::direction);

  py::enum_<CrossingDirection>(m, "CrossingDirection")
      .value("LEFT", CrossingDirection::kLeft)
      .value("RIGHT", CrossingDirection::kRight);

  py::class_<ScenarioBuildResult>(m, "ScenarioBuildResult")
      .def_readonly("scenarios", &ScenarioBuildResult::scenarios)
      .def_readonly("skipped", &ScenarioBuildResult::skipped);

  m.def("synth_generate", &synth_generate, py::arg("n"), py::arg("seed"),
        py::arg("config") = SynthConfig{});
  m.def("load_tracks", &load_tracks, py::arg("path"));
  m.def("export_tracks", &export_tracks, py::arg("path"), py::arg("tracks"));
  m.def("detect_insertion", &detect_insertion, py::arg("track"),
        py::arg("smaller_lane_id_is_left") = true);
  m.def("build_scenarios", &build_scenarios, py::arg("tracks"), py::arg("config"));
  m.def("save_scenarios", &save_scenarios, py::arg("path"), py::arg("scenarios"));
  m.def("load_scenarios", &load_scenarios, py::arg("path"));
  m.def("recent_mean_lateral_velocity", &recent_mean_lateral_velocity, py::arg("scenario"),
        py::arg("window_s"));

  py::class_<FeatureConfig>(m, "FeatureConfig")
      .def(py::init<>())
      .def_readwrite("lateral_vel_threshold", &FeatureConfig::lateral_vel_threshold)
      .def_readwrite("ttc_threshold", &FeatureConfig::ttc_threshold)
      .def_readwrite("lateral_window", &FeatureConfig::lateral_window);

  py::class_<PromptFeatures>(m, "PromptFeatures")
      .def_readonly("significant_lateral_motion", &PromptFeatures::significant_lateral_motion)
      .def_readonly("mean_lateral_velocity", &PromptFeatures::mean_lateral_velocity)
      .def_readonly("blocked_lane_ahead", &PromptFeatures::blocked_lane_ahead)
      .def_readonly("time_to_collision", &PromptFeatures::time_to_collision)
      .def_readonly("relative_speed_to_preceding", &PromptFeatures::relative_speed_to_preceding)
      .def_readonly("adjacent_gap_left", &PromptFeatures::adjacent_gap_left)
      .def_readonly("adjacent_gap_right", &PromptFeatures::adjacent_gap_right);

  py::class_<CorpusRecord>(m, "CorpusRecord")
      .def_readonly("id", &CorpusRecord::id)
      .def_readonly("prompt", &CorpusRecord::prompt)
      .def_readonly("target", &CorpusRecord::target);

  m.def("extract_features", &extract_features, py::arg("scenario"),
        py::arg("config") = FeatureConfig{});
  m.def("build_prompt", &build_prompt, py::arg("scenario"), py::arg("config") = FeatureConfig{});
  m.def("build_thought", &build_thought, py::arg("scenario"), py::arg("config") = FeatureConfig{});
  m.def("build_target", &build_target, py::arg("scenario"), py::arg("fit"),
        py::arg("config") = FeatureConfig{});
  m.def("ground_truth_output", &ground_truth_output, py::arg("scenario"), py::arg("fit"),
        py::arg("config") = FeatureConfig{});
  m.def("export_corpus", &export_corpus, py::arg("path"), py::arg("records"));

  py::class_<BaselineConfig>(m, "BaselineConfig")
      .def(py::init<>())
      .def_readwrite("lateral_vel_threshold", &BaselineConfig::lateral_vel_threshold)
      .def_readwrite("default_w", &BaselineConfig::default_w)
      .def_readwrite("default_d", &BaselineConfig::default_d);

  m.def("baseline_predict", &baseline_predict, py::arg("scenario"),
        py::arg("config") = BaselineConfig{});
  m.def("baseline_predict_text", &baseline_predict_text, py::arg("scenario"),
        py::arg("config") = BaselineConfig{});

  py::class_<ClassMetrics>(m, "ClassMetrics")
      .def_readonly("count", &ClassMetrics::count)
      .def_readonly("correct", &ClassMetrics::correct)
      .def_readonly("parsed", &ClassMetrics::parsed)
      .def_readonly("accuracy_pct", &ClassMetrics::accuracy_pct)
      .def_readonly("lateral_rmse", &ClassMetrics::lateral_rmse)
      .def_readonly("longitudinal_rmse", &ClassMetrics::longitudinal_rmse)
      .def_readonly("lateral_rmse_matched", &ClassMetrics::lateral_rmse_matched)
      .def_readonly("longitudinal_rmse_matched", &ClassMetrics::longitudinal_rmse_matched);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("horizons", &MetricsReport::horizons)
      .def_readonly("per_class", &MetricsReport::per_class)
      .def_readonly("overall_accuracy_pct", &MetricsReport::overall_accuracy_pct)
      .def_readonly("total", &MetricsReport::total)
      .def_readonly("parse_failure_count", &MetricsReport::parse_failure_count)
      .def_readonly("payload_scalars_total", &MetricsReport::payload_scalars_total)
      .def_readonly("matched_rmse_differs", &MetricsReport::matched_rmse_differs);

  m.def("reconstruct_prediction", &reconstruct_prediction, py::arg("prediction"),
        py::arg("insertion"), py::arg("horizons") = kDefaultHorizons);
  m.def("score_predictions", &score_predictions, py::arg("predictions"), py::arg("scenarios"),
        py::arg("horizons") = kDefaultHorizons);
  m.def("render_report_table", &render_report_table, py::arg("report"));
  m.def("report_to_json", &report_to_json, py::arg("report"));
  m.def("export_distributions", &export_distributions, py::arg("path"), py::arg("predictions"));
  m.def("export_overlays", &export_overlays, py::arg("path"), py::arg("predictions"),
        py::arg("scenarios"), py::arg("max_scenarios") = 16);
}
