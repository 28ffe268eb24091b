#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace hk {

using Json = nlohmann::ordered_json;

inline constexpr std::uint64_t kFallbackSeed = 20240607;

/// Exit-code contract of the command line.
enum class ExitCode : int { Success = 0, PropertyFailure = 1, InputError = 2, NoConvergence = 3 };

struct ExperimentConfig {
  std::string command;
  std::vector<double> a;
  std::vector<double> w;
  bool uniform_weights = false;
  std::string variant = "thm4";   // thm3 | thm4 | corollary
  int case_id = 3;                // 1 | 2 | 3, n = 2 only
  std::string signal = "sin";     // step | sin | cubic | custom
  std::string op = "both";        // linear | pph | both
  std::string policy = "clip";    // clip | translate
  double translate_scale = 2.0;
  int levels = 6;
  int resolution = 51;
  int starts = 16;                // random Newton starts for `geometry`
  std::size_t cases = 1000;       // randomized cases for `verify`
  std::uint64_t seed = kFallbackSeed;
  std::string samples_path;       // custom signal: "x,f" per line
  bool markers_only = false;
  std::string format = "json";    // json | csv
  std::string out;                // empty: stdout
};

/// HK_DEFAULT_SEED when set to an unsigned integer, kFallbackSeed otherwise.
std::uint64_t default_seed();

/// Echo of the configuration stored in every artifact (output path excluded).
Json config_echo(const ExperimentConfig& config);

struct CommandResult {
  int exit_code = 0;
  std::string output;       // serialized artifact (json or csv)
  std::string diagnostics;  // human-readable message for stderr
};

/// Runs one command and serializes its artifact. Library exceptions are mapped
/// onto the exit-code contract; nothing is written to disk here.
CommandResult run_command(const ExperimentConfig& config);

// The individual commands return the `results` object of the artifact and
// throw InputError / NoConvergence.
Json means_results(const ExperimentConfig& config);
Json geometry_results(const ExperimentConfig& config);
Json figure_results(const ExperimentConfig& config);
Json recon_results(const ExperimentConfig& config);
Json verify_results(const ExperimentConfig& config);

}  // namespace hk
