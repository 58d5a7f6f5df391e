#pragma once

#include <cstddef>
#include <vector>

#include "dfs/types.hpp"

namespace dfs {

/// Parameters of a homonuclear dipolar-coupled spin system, all in Hz.
///
/// `d` and `j` are symmetric with zero diagonal. Spins are indexed from 0
/// internally; the public operator factories take 1-based spin labels to
/// match the usual sigma^j notation.
struct SpinSystem {
  std::vector<double> nu;  // chemical shifts
  RMat d;                  // dipolar couplings
  RMat j;                  // scalar couplings

  std::size_t n_spins() const { return nu.size(); }
  std::size_t dim() const { return std::size_t{1} << nu.size(); }

  /// Throws InvalidInput describing the first violated invariant.
  void validate() const;

  /// Restriction to a subset of spins (0-based), keeping their mutual
  /// couplings and dropping everything else.
  SpinSystem subsystem(const std::vector<std::size_t>& spins) const;

  /// Same system with spins relabelled: new spin k is old spin perm[k].
  SpinSystem permuted(const std::vector<std::size_t>& perm) const;

  static SpinSystem uncoupled(std::vector<double> shifts);
};

/// o-chloronitrobenzene in ZLI-1132: measured shifts, measured couplings
/// d12, d23, d34 and best-guess d13, d14, d24. Scalar couplings are zero.
SpinSystem cnb_nominal();

/// I x ... x sigma_axis x ... x I with sigma at spin `spin` (1-based).
/// Spin 1 is the most significant tensor factor and sigma_z|0> = +|0>.
Mat pauli_embed(std::size_t n, std::size_t spin, Axis axis);

/// Sum_j sigma_axis^j.
Mat collective(std::size_t n, Axis axis);

/// Total F_z = 1/2 Sum_j sigma_z^j (diagonal).
Mat total_fz(std::size_t n);

/// Diagonal of total_fz, cheaper when only eigenvalues are needed.
RVec total_fz_diagonal(std::size_t n);

/// Liquid-crystal secular Hamiltonian in rad/s:
///   Sum_j pi nu_j sz^j
///   + Sum_{j<k} pi/2 (J_jk + 2 d_jk) sz^j sz^k
///   + Sum_{j<k} pi/2 (J_jk - d_jk) (sx^j sx^k + sy^j sy^k)
Mat internal_hamiltonian(const SpinSystem& sys);

/// Collective rf drive pi * eps * Sum_j (ux sx^j + uy sy^j), in rad/s.
Mat rf_hamiltonian(std::size_t n, double ux_hz, double uy_hz, double eps);

/// Unitary permuting tensor factors: |s_0 ... s_{n-1}> -> |s_perm[0] ... >.
Mat qubit_permutation(std::size_t n, const std::vector<std::size_t>& perm);

}  // namespace dfs
