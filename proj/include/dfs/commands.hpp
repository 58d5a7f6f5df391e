#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace dfs {

enum ExitCode : int { kExitOk = 0, kExitInvalid = 1, kExitBelowThreshold = 2, kExitIo = 3 };

struct SynthesizeArgs {
  std::string config_path;
  std::string target;
  std::string out_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> init_pulse_path;
};

struct RunArgs {
  std::string experiment;  // bell_pipeline | robustness_sweep | logical_vs_spin
  std::string config_path;
  std::vector<std::string> pulse_paths;
  std::string out_dir;
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
};

/// Each command reports progress and diagnostics on `log` and returns an
/// ExitCode; exceptions are translated, never propagated.
int cmd_synthesize(const SynthesizeArgs& args, std::ostream& log);
int cmd_run(const RunArgs& args, std::ostream& log);
int cmd_validate(const std::string& config_path, std::ostream& log);

}  // namespace dfs
