#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "samkit/baseline_predict.hpp"
#include "samkit/sam_fitting.hpp"
#include "samkit/scenario_data.hpp"

namespace samkit::cli {

// Exit-code contract shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

struct SynthOptions {
  int n = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string tracks_out;  // optional CSV export
  SynthConfig synth;
};

struct IngestOptions {
  std::string tracks;  // highD-style CSV input
  std::string out;
  WindowConfig window;
};

struct FitOptions {
  std::string scenarios;
  std::string out;
  FitConfig fit;
};

struct CorpusOptions {
  std::string scenarios;
  std::string fits;
  std::string out;
};

struct PredictOptions {
  std::string scenarios;
  std::string out;
  BaselineConfig baseline;
};

struct ScoreOptions {
  std::string scenarios;
  std::string predictions;
  std::string out;
  bool quiet = false;
};

struct ReportOptions {
  std::string scenarios;
  std::string predictions;
  std::string out_dir;
  int max_overlays = 16;
  bool quiet = false;
};

// Command bodies. Each writes its outputs atomically, drops a manifest next
// to the primary output, and throws (DataError, CodecError, IoError,
// std::invalid_argument) on failure; run_guarded maps those to exit codes.
void cmd_synth(const SynthOptions& opt);
void cmd_ingest(const IngestOptions& opt);
void cmd_fit(const FitOptions& opt);
void cmd_corpus(const CorpusOptions& opt);
void cmd_predict_baseline(const PredictOptions& opt);
void cmd_score(const ScoreOptions& opt);
void cmd_report(const ReportOptions& opt);

// Runs fn, translating exceptions into the exit-code contract.
int run_guarded(const char* command, const std::function<void()>& fn);

// Fitted-parameter records keyed by scenario id (JSONL file, one fit per line).
void save_fits(const std::string& path, const std::map<std::string, FitResult>& fits);
std::map<std::string, FitResult> load_fits(const std::string& path);

// Prediction records keyed by scenario id (JSONL file, one prediction per line).
void save_predictions(const std::string& path, const std::map<std::string, std::string>& preds);
std::map<std::string, std::string> load_predictions(const std::string& path);

}  // namespace samkit::cli
