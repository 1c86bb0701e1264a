#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

#include "cli_commands.hpp"
#include "samkit/fileio.hpp"
#include "samkit/version.hpp"

namespace {

using samkit::cli::kExitUsage;

// Values from --config apply wherever the flag was not given on the command
// line; command-line flags always win.
nlohmann::json load_config_json(const std::string& path) {
  if (path.empty()) {
    return nlohmann::json::object();
  }
  return nlohmann::json::parse(samkit::read_text(path));
}

template <typename T>
void apply_config(const nlohmann::json& cfg, const char* key, const CLI::Option* opt, T& target) {
  if (opt != nullptr && opt->count() == 0 && cfg.contains(key)) {
    target = cfg.at(key).get<T>();
  }
}

bool parse_class_mix(const std::string& text, samkit::SynthConfig& synth) {
  double keep = 0.0, left = 0.0, right = 0.0;
  char extra = '\0';
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf%c", &keep, &left, &right, &extra) != 3) {
    return false;
  }
  synth.keep_fraction = keep;
  synth.left_fraction = left;
  synth.right_fraction = right;
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"samkit: lane-change maneuver modeling, fitting, corpus export and scoring"};
  app.set_version_flag("--version", samkit::kVersion);
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file; command-line flags override it");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a seeded synthetic scenario set");
  samkit::cli::SynthOptions synth;
  std::string class_mix;
  auto* synth_n = synth_cmd->add_option("--n", synth.n, "number of scenarios")->required();
  auto* synth_seed = synth_cmd->add_option("--seed", synth.seed, "RNG seed")->required();
  synth_cmd->add_option("--out", synth.out, "scenario JSONL output path")->required();
  auto* synth_mix =
      synth_cmd->add_option("--class-mix", class_mix, "keep,left,right fractions (default 0.66,0.17,0.17)");
  auto* synth_nlat = synth_cmd->add_option("--noise-lat", synth.synth.noise_lat, "lateral observation noise sigma, m");
  auto* synth_nlon = synth_cmd->add_option("--noise-lon", synth.synth.noise_lon, "longitudinal observation noise sigma, m");
  synth_cmd->add_option("--tracks-out", synth.tracks_out, "also export highD-style CSV tracks");
  auto* synth_tinput = synth_cmd->add_option("--t-input", synth.synth.window.t_input, "history window, s");
  auto* synth_tp = synth_cmd->add_option("--t-p", synth.synth.window.t_p, "prediction window, s");
  auto* synth_th = synth_cmd->add_option("--t-h", synth.synth.window.t_h, "gap before the scored future, s");
  auto* synth_rate = synth_cmd->add_option("--rate", synth.synth.window.sample_rate, "sample rate, Hz");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "Window highD-style track CSV into scenarios");
  samkit::cli::IngestOptions ingest;
  bool larger_is_left = false;
  ingest_cmd->add_option("--tracks", ingest.tracks, "track CSV input")->required();
  ingest_cmd->add_option("--out", ingest.out, "scenario JSONL output")->required();
  auto* ing_tinput = ingest_cmd->add_option("--t-input", ingest.window.t_input, "history window, s");
  auto* ing_tp = ingest_cmd->add_option("--t-p", ingest.window.t_p, "prediction window, s");
  auto* ing_th = ingest_cmd->add_option("--t-h", ingest.window.t_h, "gap before the scored future, s");
  auto* ing_rate = ingest_cmd->add_option("--rate", ingest.window.sample_rate, "recording rate, Hz");
  auto* ing_stride = ingest_cmd->add_option("--stride", ingest.window.keep_lane_stride,
                                            "keep-lane window stride, s");
  ingest_cmd->add_flag("--larger-lane-id-is-left", larger_is_left,
                       "invert the lane numbering convention");

  // fit
  auto* fit_cmd = app.add_subcommand("fit", "Fit maneuver parameters to lane-change futures");
  samkit::cli::FitOptions fit;
  fit_cmd->add_option("--scenarios", fit.scenarios, "scenario JSONL input")->required();
  fit_cmd->add_option("--out", fit.out, "fitted-parameter JSONL output")->required();
  auto* fit_dmin = fit_cmd->add_option("--d-min", fit.fit.d_min, "duration search lower bound, s");
  auto* fit_dmax = fit_cmd->add_option("--d-max", fit.fit.d_max, "duration search upper bound, s");
  auto* fit_dtol = fit_cmd->add_option("--d-tolerance", fit.fit.d_tolerance, "duration resolution, s");
  auto* fit_grid = fit_cmd->add_option("--grid-steps", fit.fit.grid_steps, "coarse grid evaluations");

  // corpus
  auto* corpus_cmd = app.add_subcommand("corpus", "Export a prompt/target fine-tuning corpus");
  samkit::cli::CorpusOptions corpus;
  corpus_cmd->add_option("--scenarios", corpus.scenarios, "scenario JSONL input")->required();
  corpus_cmd->add_option("--fits", corpus.fits, "fitted-parameter JSONL input")->required();
  corpus_cmd->add_option("--out", corpus.out, "corpus JSONL output")->required();

  // predict-baseline
  auto* predict_cmd = app.add_subcommand("predict-baseline", "Run the heuristic baseline predictor");
  samkit::cli::PredictOptions predict;
  predict_cmd->add_option("--scenarios", predict.scenarios, "scenario JSONL input")->required();
  predict_cmd->add_option("--out", predict.out, "prediction JSONL output")->required();
  auto* pred_thr = predict_cmd->add_option("--threshold", predict.baseline.lateral_vel_threshold,
                                           "lateral velocity threshold, m/s");
  auto* pred_w = predict_cmd->add_option("--default-w", predict.baseline.default_w, "default |W|, m");
  auto* pred_d = predict_cmd->add_option("--default-d", predict.baseline.default_d, "default D, s");

  // score
  auto* score_cmd = app.add_subcommand("score", "Score predictions against scenarios");
  samkit::cli::ScoreOptions score;
  score_cmd->add_option("--scenarios", score.scenarios, "scenario JSONL input")->required();
  score_cmd->add_option("--predictions", score.predictions, "prediction JSONL input")->required();
  score_cmd->add_option("--out", score.out, "metrics report JSON output")->required();
  score_cmd->add_flag("--quiet", score.quiet, "suppress the table on stdout");

  // report
  auto* report_cmd = app.add_subcommand("report", "Score and emit table, JSON and plot data");
  samkit::cli::ReportOptions report;
  report_cmd->add_option("--scenarios", report.scenarios, "scenario JSONL input")->required();
  report_cmd->add_option("--predictions", report.predictions, "prediction JSONL input")->required();
  report_cmd->add_option("--out-dir", report.out_dir, "output directory")->required();
  report_cmd->add_option("--max-overlays", report.max_overlays, "overlay scenario cap");
  report_cmd->add_flag("--quiet", report.quiet, "suppress the table on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  nlohmann::json cfg;
  try {
    cfg = load_config_json(config_path);
  } catch (const std::exception& e) {
    std::cerr << "samkit: cannot read config: " << e.what() << "\n";
    return kExitUsage;
  }

  if (synth_cmd->parsed()) {
    apply_config(cfg, "n", synth_n, synth.n);
    apply_config(cfg, "seed", synth_seed, synth.seed);
    apply_config(cfg, "class_mix", synth_mix, class_mix);
    apply_config(cfg, "noise_lat", synth_nlat, synth.synth.noise_lat);
    apply_config(cfg, "noise_lon", synth_nlon, synth.synth.noise_lon);
    apply_config(cfg, "t_input", synth_tinput, synth.synth.window.t_input);
    apply_config(cfg, "t_p", synth_tp, synth.synth.window.t_p);
    apply_config(cfg, "t_h", synth_th, synth.synth.window.t_h);
    apply_config(cfg, "sample_rate", synth_rate, synth.synth.window.sample_rate);
    if (!class_mix.empty() && !parse_class_mix(class_mix, synth.synth)) {
      std::cerr << "samkit synth: --class-mix expects three comma-separated fractions\n";
      return kExitUsage;
    }
    if (synth.n < 0) {
      std::cerr << "samkit synth: --n must be non-negative\n";
      return kExitUsage;
    }
    return samkit::cli::run_guarded("samkit synth", [&] { samkit::cli::cmd_synth(synth); });
  }
  if (ingest_cmd->parsed()) {
    apply_config(cfg, "t_input", ing_tinput, ingest.window.t_input);
    apply_config(cfg, "t_p", ing_tp, ingest.window.t_p);
    apply_config(cfg, "t_h", ing_th, ingest.window.t_h);
    apply_config(cfg, "sample_rate", ing_rate, ingest.window.sample_rate);
    apply_config(cfg, "keep_lane_stride", ing_stride, ingest.window.keep_lane_stride);
    ingest.window.smaller_lane_id_is_left = !larger_is_left;
    return samkit::cli::run_guarded("samkit ingest", [&] { samkit::cli::cmd_ingest(ingest); });
  }
  if (fit_cmd->parsed()) {
    apply_config(cfg, "d_min", fit_dmin, fit.fit.d_min);
    apply_config(cfg, "d_max", fit_dmax, fit.fit.d_max);
    apply_config(cfg, "d_tolerance", fit_dtol, fit.fit.d_tolerance);
    apply_config(cfg, "grid_steps", fit_grid, fit.fit.grid_steps);
    return samkit::cli::run_guarded("samkit fit", [&] { samkit::cli::cmd_fit(fit); });
  }
  if (corpus_cmd->parsed()) {
    return samkit::cli::run_guarded("samkit corpus", [&] { samkit::cli::cmd_corpus(corpus); });
  }
  if (predict_cmd->parsed()) {
    apply_config(cfg, "threshold", pred_thr, predict.baseline.lateral_vel_threshold);
    apply_config(cfg, "default_w", pred_w, predict.baseline.default_w);
    apply_config(cfg, "default_d", pred_d, predict.baseline.default_d);
    return samkit::cli::run_guarded("samkit predict-baseline",
                                    [&] { samkit::cli::cmd_predict_baseline(predict); });
  }
  if (score_cmd->parsed()) {
    return samkit::cli::run_guarded("samkit score", [&] { samkit::cli::cmd_score(score); });
  }
  if (report_cmd->parsed()) {
    return samkit::cli::run_guarded("samkit report", [&] { samkit::cli::cmd_report(report); });
  }
  std::cerr << app.help();
  return kExitUsage;
}
