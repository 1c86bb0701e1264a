#include "cli_commands.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>

#include <json.hpp>

#include "samkit/evalkit.hpp"
#include "samkit/fileio.hpp"
#include "samkit/prompt_builder.hpp"
#include "samkit/version.hpp"

namespace samkit::cli {

namespace {

using Json = nlohmann::ordered_json;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::time_point start_ = Clock::now();
};

// One manifest per command invocation, written atomically next to the
// primary output.
void write_manifest(const std::string& primary_output, const char* command, const Json& config,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double wall_time_s) {
  Json m;
  m["tool"] = "samkit";
  m["version"] = kVersion;
  m["command"] = command;
  m["config"] = config;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  m["wall_time_s"] = wall_time_s;
  atomic_write_text(primary_output + ".manifest.json", m.dump(2) + "\n");
}

std::vector<std::string> jsonl_lines(const std::string& path) {
  const std::string text = read_text(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) {
      end = text.size();
    }
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

}  // namespace

void save_fits(const std::string& path, const std::map<std::string, FitResult>& fits) {
  std::string out;
  for (const auto& [id, fit] : fits) {
    Json j;
    j["id"] = id;
    j["W"] = fit.params.w;
    j["D"] = fit.params.d;
    j["v0"] = fit.params.v0;
    j["dvx"] = fit.params.dvx;
    j["vx0"] = fit.params.vx0;
    j["lateral_sse"] = fit.lateral_sse;
    j["longitudinal_sse"] = fit.longitudinal_sse;
    j["n_points"] = fit.n_points;
    j["converged"] = fit.converged;
    out += j.dump();
    out += '\n';
  }
  atomic_write_text(path, out);
}

std::map<std::string, FitResult> load_fits(const std::string& path) {
  std::map<std::string, FitResult> fits;
  long line_no = 0;
  for (const std::string& line : jsonl_lines(path)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(line);
      FitResult fit;
      fit.params = SamParams::make(j.at("W").get<double>(), j.at("D").get<double>(),
                                   j.at("v0").get<double>(), j.at("dvx").get<double>(),
                                   j.at("vx0").get<double>());
      fit.lateral_sse = j.at("lateral_sse").get<double>();
      fit.longitudinal_sse = j.at("longitudinal_sse").get<double>();
      fit.n_points = j.at("n_points").get<int>();
      fit.converged = j.at("converged").get<bool>();
      fits[j.at("id").get<std::string>()] = fit;
    } catch (const std::exception& e) {
      throw DataError(DataErrorKind::kBadRecord, path, line_no, e.what());
    }
  }
  return fits;
}

void save_predictions(const std::string& path, const std::map<std::string, std::string>& preds) {
  std::string out;
  for (const auto& [id, text] : preds) {
    Json j;
    j["id"] = id;
    j["output"] = text;
    out += j.dump();
    out += '\n';
  }
  atomic_write_text(path, out);
}

std::map<std::string, std::string> load_predictions(const std::string& path) {
  std::map<std::string, std::string> preds;
  long line_no = 0;
  for (const std::string& line : jsonl_lines(path)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(line);
      preds[j.at("id").get<std::string>()] = j.at("output").get<std::string>();
    } catch (const std::exception& e) {
      throw DataError(DataErrorKind::kBadRecord, path, line_no, e.what());
    }
  }
  return preds;
}

void cmd_synth(const SynthOptions& opt) {
  Stopwatch timer;
  const SynthResult result = synth_generate(opt.n, opt.seed, opt.synth);
  save_scenarios(opt.out, result.scenarios);
  std::vector<std::string> outputs = {opt.out};
  if (!opt.tracks_out.empty()) {
    export_tracks(opt.tracks_out, result.tracks);
    outputs.push_back(opt.tracks_out);
  }

  Json config;
  config["n"] = opt.n;
  config["seed"] = opt.seed;
  config["class_mix"] = {opt.synth.keep_fraction, opt.synth.left_fraction,
                         opt.synth.right_fraction};
  config["noise_lat"] = opt.synth.noise_lat;
  config["noise_lon"] = opt.synth.noise_lon;
  config["t_input"] = opt.synth.window.t_input;
  config["t_p"] = opt.synth.window.t_p;
  config["t_h"] = opt.synth.window.t_h;
  config["sample_rate"] = opt.synth.window.sample_rate;
  write_manifest(opt.out, "synth", config, {}, outputs, timer.seconds());
  std::cerr << "synth: wrote " << result.scenarios.size() << " scenarios to " << opt.out << "\n";
}

void cmd_ingest(const IngestOptions& opt) {
  Stopwatch timer;
  const auto tracks = load_tracks(opt.tracks);
  const ScenarioBuildResult result = build_scenarios(tracks, opt.window);
  save_scenarios(opt.out, result.scenarios);

  Json config;
  config["t_input"] = opt.window.t_input;
  config["t_p"] = opt.window.t_p;
  config["t_h"] = opt.window.t_h;
  config["sample_rate"] = opt.window.sample_rate;
  config["smaller_lane_id_is_left"] = opt.window.smaller_lane_id_is_left;
  config["keep_lane_stride"] = opt.window.keep_lane_stride;
  config["skipped"] = result.skipped;
  write_manifest(opt.out, "ingest", config, {opt.tracks}, {opt.out}, timer.seconds());
  std::cerr << "ingest: " << tracks.size() << " tracks -> " << result.scenarios.size()
            << " scenarios (" << result.skipped << " events skipped) to " << opt.out << "\n";
}

void cmd_fit(const FitOptions& opt) {
  Stopwatch timer;
  const std::vector<Scenario> scenarios = load_scenarios(opt.scenarios);
  std::map<std::string, FitResult> fits;
  int skipped_keep_lane = 0;
  for (const Scenario& s : scenarios) {
    if (s.label == Intention::kKeepLane) {
      ++skipped_keep_lane;
      continue;
    }
    fits[s.id] = fit_sam(s.future, s.insertion.vx, opt.fit);
  }
  save_fits(opt.out, fits);

  Json config;
  config["d_min"] = opt.fit.d_min;
  config["d_max"] = opt.fit.d_max;
  config["d_tolerance"] = opt.fit.d_tolerance;
  config["grid_steps"] = opt.fit.grid_steps;
  config["skipped_keep_lane"] = skipped_keep_lane;
  write_manifest(opt.out, "fit", config, {opt.scenarios}, {opt.out}, timer.seconds());
  std::cerr << "fit: " << fits.size() << " lane-change scenarios fitted, " << skipped_keep_lane
            << " keep-lane skipped\n";
}

void cmd_corpus(const CorpusOptions& opt) {
  Stopwatch timer;
  const std::vector<Scenario> scenarios = load_scenarios(opt.scenarios);
  const std::map<std::string, FitResult> fits = load_fits(opt.fits);

  std::vector<CorpusRecord> records;
  records.reserve(scenarios.size());
  for (const Scenario& s : scenarios) {
    std::optional<FitResult> fit;
    if (s.label != Intention::kKeepLane) {
      const auto it = fits.find(s.id);
      if (it == fits.end()) {
        throw DataError(DataErrorKind::kBadRecord, opt.fits, 0,
                        "no fitted parameters for lane-change scenario '" + s.id + "'");
      }
      fit = it->second;
    }
    records.push_back(build_target(s, fit));
  }
  export_corpus(opt.out, records);

  write_manifest(opt.out, "corpus", Json::object(), {opt.scenarios, opt.fits}, {opt.out},
                 timer.seconds());
  std::cerr << "corpus: wrote " << records.size() << " records to " << opt.out << "\n";
}

void cmd_predict_baseline(const PredictOptions& opt) {
  Stopwatch timer;
  const std::vector<Scenario> scenarios = load_scenarios(opt.scenarios);
  std::map<std::string, std::string> preds;
  for (const Scenario& s : scenarios) {
    preds[s.id] = baseline_predict_text(s, opt.baseline);
  }
  save_predictions(opt.out, preds);

  Json config;
  config["lateral_vel_threshold"] = opt.baseline.lateral_vel_threshold;
  config["default_w"] = opt.baseline.default_w;
  config["default_d"] = opt.baseline.default_d;
  write_manifest(opt.out, "predict-baseline", config, {opt.scenarios}, {opt.out},
                 timer.seconds());
  std::cerr << "predict-baseline: wrote " << preds.size() << " predictions to " << opt.out
            << "\n";
}

namespace {

MetricsReport score_files(const std::string& scenarios_path, const std::string& predictions_path) {
  const std::vector<Scenario> scenarios = load_scenarios(scenarios_path);
  const std::map<std::string, std::string> preds = load_predictions(predictions_path);
  for (const auto& [id, text] : preds) {
    const bool known = std::any_of(scenarios.begin(), scenarios.end(),
                                   [&](const Scenario& s) { return s.id == id; });
    if (!known) {
      throw DataError(DataErrorKind::kBadRecord, predictions_path, 0,
                      "prediction id '" + id + "' matches no scenario");
    }
  }
  return score_predictions(preds, scenarios);
}

}  // namespace

void cmd_score(const ScoreOptions& opt) {
  Stopwatch timer;
  const MetricsReport report = score_files(opt.scenarios, opt.predictions);
  atomic_write_text(opt.out, report_to_json(report) + "\n");
  write_manifest(opt.out, "score", Json::object(), {opt.scenarios, opt.predictions}, {opt.out},
                 timer.seconds());
  if (!opt.quiet) {
    std::cout << render_report_table(report);
  }
}

void cmd_report(const ReportOptions& opt) {
  Stopwatch timer;
  std::filesystem::create_directories(opt.out_dir);
  const MetricsReport report = score_files(opt.scenarios, opt.predictions);

  const std::vector<Scenario> scenarios = load_scenarios(opt.scenarios);
  const std::map<std::string, std::string> preds = load_predictions(opt.predictions);

  const std::filesystem::path dir(opt.out_dir);
  const std::string table = render_report_table(report);
  atomic_write_text(dir / "report.txt", table);
  atomic_write_text(dir / "report.json", report_to_json(report) + "\n");
  export_distributions(dir / "distributions.csv", preds);
  export_overlays(dir / "overlays.csv", preds, scenarios, opt.max_overlays);

  write_manifest((dir / "report.json").string(), "report", Json{{"max_overlays", opt.max_overlays}},
                 {opt.scenarios, opt.predictions},
                 {(dir / "report.txt").string(), (dir / "report.json").string(),
                  (dir / "distributions.csv").string(), (dir / "overlays.csv").string()},
                 timer.seconds());
  if (!opt.quiet) {
    std::cout << table;
  }
}

int run_guarded(const char* command, const std::function<void()>& fn) {
  try {
    fn();
    return kExitOk;
  } catch (const DataError& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return e.kind == DataErrorKind::kMissingFile ? kExitIo : kExitData;
  } catch (const CodecError& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return kExitData;
  } catch (const IoError& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace samkit::cli
