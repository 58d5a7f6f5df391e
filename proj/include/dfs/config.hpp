#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dfs/dynamics.hpp"
#include "dfs/experiments.hpp"
#include "dfs/grape.hpp"
#include "dfs/spin_model.hpp"

namespace dfs {

/// Rejected configuration; `field` is the dotted path of the offending entry
/// (empty for syntax errors, which carry line and column in the message).
class ConfigError : public InvalidInput {
 public:
  ConfigError(std::string field, const std::string& what)
      : InvalidInput(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentSettings {
  std::string mode = "ideal";  // ideal | synthesized
  double sweep_half_width_hz = 100.0;
  double sweep_wide_half_width_hz = 300.0;
  std::vector<double> sigma_phi{0.0, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0};
  bool scan_durations = false;
  std::vector<double> duration_scan_s = kDefaultDurationScan;
  double duration_threshold = 0.98;
  std::size_t scan_max_iters = 300;
};

struct Config {
  SpinSystem system;
  EnsembleSpec ensemble;
  GrapeConfig grape;
  double threshold = 0.99;          // synthesis acceptance for gates
  double readout_threshold = 0.98;  // synthesis acceptance for readout maps
  ExperimentSettings experiment;

  /// Cross-field checks (spin count vs couplings, sweep ranges, ...).
  void validate() const;
  /// The spin-system block with the unknown pairs at their centers.
  Ensemble build_ensemble() const;
  double threshold_for(const std::string& target) const;
};

/// Strict JSON parsing: unknown keys, missing keys and wrong types are
/// rejected with the dotted field name.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);
/// Canonical JSON (17 significant digits), re-parsable by parse_config.
std::string to_json(const Config& cfg);
/// FNV-1a 64 of the canonical JSON, as 16 hex digits.
std::string config_hash(const Config& cfg);

/// Built-in copy of configs/cnb.default.json.
Config default_config();

}  // namespace dfs
