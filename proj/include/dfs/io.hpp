#pragma once

#include <string>

#include "dfs/config.hpp"
#include "dfs/dynamics.hpp"
#include "dfs/experiments.hpp"

namespace dfs {

inline constexpr int kPulseFormatVersion = 1;

struct PulseFile {
  Pulse pulse;
  double amp_max_hz = kDefaultAmpMaxHz;
  std::string target;
  std::string config_hash;
};

/// Text format:
///   # dfs-pulse <version>
///   dt_s <value>
///   n_steps <N>
///   amp_max_hz <value>
///   target <name>
///   config_hash <hex>
///   <ux_hz> <uy_hz>      (N rows)
/// Values are written with 17 significant digits so a read-back is exact.
std::string format_pulse_file(const PulseFile& f);
PulseFile parse_pulse_file(const std::string& text);
void write_pulse_file(const std::string& path, const PulseFile& f);
PulseFile read_pulse_file(const std::string& path);

/// Writes <dir>/summary.txt (name, config hash, parameters, scalars), one CSV
/// per table and one CSV (row,col,re,im) per matrix. Creates `dir`.
void write_report(const std::string& dir, const ExperimentReport& report);

/// Reads back the key = value lines of summary.txt.
std::vector<std::pair<std::string, std::string>> read_summary(const std::string& dir);

}  // namespace dfs
