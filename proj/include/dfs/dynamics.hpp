#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dfs/spin_model.hpp"
#include "dfs/types.hpp"

namespace dfs {

inline constexpr double kDefaultAmpMaxHz = 15000.0;

/// Piecewise-constant two-channel control: step k applies (ux, uy) Hz for dt.
struct Pulse {
  double dt = 1e-5;
  std::vector<std::array<double, 2>> amps;

  std::size_t n_steps() const { return amps.size(); }
  double duration() const { return dt * static_cast<double>(amps.size()); }
  double max_amplitude() const;
  void validate(double amp_max_hz = kDefaultAmpMaxHz) const;

  static Pulse zeros(std::size_t n_steps, double dt);
  static Pulse constant(std::size_t n_steps, double dt, double ux, double uy);
  /// Each step split into `factor` substeps with the same amplitude.
  Pulse subdivided(std::size_t factor) const;
};

struct EnsembleMember {
  SpinSystem system;
  double eps = 1.0;
  double weight = 1.0;
};

struct Ensemble {
  std::vector<EnsembleMember> members;
  std::uint64_t seed = 0;

  /// Non-empty, weights non-negative and summing to one.
  void validate() const;
  /// Every member restricted to the given spins (0-based), weights kept.
  Ensemble restricted(const std::vector<std::size_t>& spins) const;

  static Ensemble single(const SpinSystem& sys, double eps = 1.0);
};

/// A dipolar coupling between two spins (1-based labels), in Hz.
struct PairCoupling {
  std::size_t a = 1;
  std::size_t b = 2;
  double hz = 0.0;
};

/// Sampling recipe for robustness ensembles.
struct EnsembleSpec {
  double known_unc_hz = 100.0;
  std::vector<PairCoupling> unknown_centers;
  double unknown_unc_hz = 100.0;
  std::vector<double> eps_values{0.95, 1.0, 1.05};
  std::size_t n_members = 9;
  std::uint64_t seed = 42;
};

/// Unknown centers for the CNB molecule: d13, d14, d24.
std::vector<PairCoupling> cnb_unknown_centers();

/// Nominal member (unknown pairs at their centers, eps = 1) followed by
/// n_members - 1 samples. Every coupling of a sample is drawn uniformly from
/// center +/- unc (unknown pairs use unknown_unc_hz, all other pairs
/// known_unc_hz); eps cycles through eps_values. Identical members are
/// merged. Weights are uniform over the drawn members.
Ensemble make_ensemble(const SpinSystem& sys, const EnsembleSpec& spec);

/// Drift and unit-amplitude control generators of one member (rad/s, per Hz).
struct MemberModel {
  Mat h_int;
  Mat h_x;  // pi * eps * Sum sx
  Mat h_y;
  explicit MemberModel(const EnsembleMember& m);
  std::size_t dim() const { return static_cast<std::size_t>(h_int.rows()); }
};

/// Spectral data of one step: H = V diag(lambda) V^dag, U = exp(-i H dt).
struct StepSpectrum {
  Mat vectors;
  RVec values;
  Mat propagator;
};

StepSpectrum step_spectrum(const Mat& h_total, double dt);

/// exp(-i h dt) by Hermitian eigendecomposition.
Mat step_propagator(const Mat& h_total, double dt);

/// U_N ... U_1 for the member.
Mat pulse_propagator(const Pulse& pulse, const EnsembleMember& member);
Mat pulse_propagator(const Pulse& pulse, const MemberModel& model);

/// Gauss-Hermite rule for a standard normal variable, weights summing to one.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussRule& gauss_hermite(int n_nodes);

inline constexpr int kDephasingNodes = 15;

/// rho -> Sum_m w_m exp(-i phi_m F_z) rho exp(+i phi_m F_z), phi ~ N(0, sigma^2).
Mat collective_dephasing(const Mat& rho, double sigma_phi, int n_nodes = kDephasingNodes);

/// Weighted mean of logical_gate_fidelity over the members.
double ensemble_fidelity(const Pulse& pulse, const Ensemble& ens, const Mat& target_l);

}  // namespace dfs
