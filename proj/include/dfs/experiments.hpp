#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dfs/dynamics.hpp"
#include "dfs/grape.hpp"
#include "dfs/sequences.hpp"
#include "dfs/tomography.hpp"

namespace dfs {

struct ReportTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
  std::string name;
  std::string config_hash;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<ReportTable> tables;
  std::vector<std::pair<std::string, Mat>> matrices;

  void set(const std::string& key, double value);
  void param(const std::string& key, const std::string& value);
  /// Throws InvalidInput for an unknown key.
  double scalar(const std::string& key) const;
  bool has_scalar(const std::string& key) const;
  const ReportTable& table(const std::string& name) const;
};

/// Everything a synthesis run needs besides the ensemble and optimizer
/// settings: the objective, which spins it acts on, and the acceptance
/// threshold used by the runner.
struct SynthesisTarget {
  std::string name;
  Objective objective;
  std::vector<std::size_t> spins;  // 0-based subset of the ensemble's spins
  Mat reference;                   // block or full target the fidelity refers to
};

/// u_prep, u_ent, readout_01 .. readout_14 or spin_cnot.
SynthesisTarget make_target(const std::string& name);
std::vector<std::string> target_names();

/// Runs the optimizer for `target` on `ens` restricted to its spins.
OptimizeResult synthesize(const SynthesisTarget& target, const GrapeConfig& cfg, const Ensemble& ens);
OptimizeResult synthesize(const SynthesisTarget& target, const GrapeConfig& cfg, const Ensemble& ens,
                          const Pulse& init);

/// Objective value of `pulse` for `target` averaged over `ens`.
double target_fidelity(const SynthesisTarget& target, const Pulse& pulse, const Ensemble& ens);

struct BellPipelineInputs {
  EnsembleMember member;
  std::optional<Pulse> u_prep;  // exact embedding when absent
  std::optional<Pulse> u_ent;   // exact embedding when absent
  ReadoutSet readouts = ideal_readout_set();
};

/// Pseudo-pure preparation, entangler, readout and reconstruction. Reports
/// corr_input, corr_bell, leakage_ent, fidelity_ent, residuals and the
/// reconstructed blocks.
ExperimentReport run_bell_pipeline(const BellPipelineInputs& in);

/// The six couplings in (1,2) (1,3) (1,4) (2,3) (2,4) (3,4) order.
std::vector<std::pair<std::size_t, std::size_t>> coupling_pairs();

/// All 2^6 corners of +/- half_width_hz around `nominal`, plus the nominal
/// point first. For each point: logical fidelity to u_ent, correlation of the
/// output block (from |00>_L) with the nominal output, and with the ideal Bell
/// state. Reports mean/max correlation and fidelity drops over the corners.
/// half_width_hz = 0 gives the nominal entry alone.
ExperimentReport run_robustness_sweep(const Pulse& u_ent, const SpinSystem& nominal, double half_width_hz,
                                      double eps = 1.0);

struct DurationScan {
  std::vector<double> durations_s;
  std::vector<double> fidelity;  // NaN for durations not attempted
  std::optional<double> minimal_s;
};

/// Synthesizes `target` at increasing durations (n_steps = duration / cfg.dt)
/// and stops at the first that reaches `threshold`.
DurationScan duration_scan(const SynthesisTarget& target, const GrapeConfig& cfg, const Ensemble& ens,
                           const std::vector<double>& durations_s, double threshold);

inline const std::vector<double> kDefaultDurationScan{0.5e-3, 1.0e-3, 1.5e-3, 2.5e-3, 4.0e-3, 6.0e-3};

/// Bell fidelity after collective dephasing for the logical entangler (|00>_L
/// input, four spins) and the spin CNOT (|+0> input, spins 1 and 2 of the
/// bare system), both on the nominal member of `ens`.
ExperimentReport run_logical_vs_spin(const Pulse& logical_pulse, const Pulse& spin_pulse, const Ensemble& ens,
                                     const std::vector<double>& sigma_phi);

}  // namespace dfs
