#pragma once

#include <optional>
#include <string>

#include "dfs/dynamics.hpp"
#include "dfs/types.hpp"

namespace dfs {

/// A logical target. Unitary targets carry a 4x4 block; state-map targets
/// additionally carry the logical input/output operators the pulse must map
/// between (the block is then one exact implementer of the map).
struct TargetGate {
  std::string name;
  Mat block;
  std::optional<Mat> rho_in;
  std::optional<Mat> rho_target;

  bool is_state_map() const { return rho_in.has_value(); }
};

/// Entangler taking |00>_L to (|00>_L - |11>_L)/sqrt(2).
TargetGate u_ent_logical();

/// Pseudo-pure completion map Z_L2 -> Z_L1 Z_L2 (normalized logical Paulis).
/// The block is CNOT with logical qubit 1 as control.
TargetGate u_prep_logical();

/// (|00>_L - |11>_L)/sqrt(2) as 4 logical amplitudes.
Vec logical_bell_state();

/// One MREV-8 cycle with ideal delta pi/2 pulses, phase pattern
///   tau -x tau y 2tau -y tau x 2tau x tau y 2tau -y tau -x tau
/// (cycle time 12 tau) under the internal Hamiltonian of `sys`.
Mat mrev8_cycle(const SpinSystem& sys, double tau);

/// i log(U) / t from the eigenphases of U (principal branch). Throws
/// NumericalError when an eigenphase is within `alias_margin` of +/- pi.
Mat effective_hamiltonian(const Mat& u_cycle, double t_cycle, double alias_margin = 1e-6);

/// Per-spin single-spin field of H (rad/s): (Tr(H sx^j), Tr(H sy^j), Tr(H sz^j)) / 2^n.
std::vector<Eigen::Vector3d> single_spin_fields(const Mat& h, std::size_t n_spins);

/// Ratio of the effective single-spin field magnitude to pi |nu_j|, averaged
/// with weights |nu_j| over spins with nonzero shift.
double mrev8_shift_scale(const SpinSystem& sys, double tau);

/// Experiment A deviation: sz1 - sz2 + sz3 - sz4.
Mat experiment_a_state();
/// Experiment B input deviation: sz3 - sz4.
Mat experiment_b_input();

/// Temporal average of experiment A and experiment B after u_prep.
Mat prepare_pseudo_pure(const Mat& u_prep);
Mat prepare_pseudo_pure(const Pulse& u_prep_pulse, const EnsembleMember& member);

}  // namespace dfs
