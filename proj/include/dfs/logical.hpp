#pragma once

#include <array>
#include <optional>

#include "dfs/types.hpp"

namespace dfs {

/// Two logical qubits in the zero-quantum subspace of four spins:
///   |00>_L = |0101>, |01>_L = |0110>, |10>_L = |1001>, |11>_L = |1010>.
struct LogicalSubspace {
  static constexpr std::size_t kSpins = 4;
  static constexpr std::size_t kFullDim = 16;
  static constexpr std::size_t kDim = 4;
  static constexpr std::array<std::size_t, 4> kIndices{0b0101, 0b0110, 0b1001, 0b1010};

  Mat basis;      // 16x4 isometry, columns |00>_L .. |11>_L
  Mat projector;  // 16x16, basis * basis^dagger
  Mat complement; // 16x12 isometry onto the remaining computational states
};

const LogicalSubspace& logical_basis();

enum class LogicalAxis { I, X, Y, Z };

/// Logical Pauli on qubit 1 (spins 1,2) or qubit 2 (spins 3,4) as a 16x16
/// operator. Unnormalized z follows the labelling convention
/// sz^j - sz^k, which is twice the subspace Pauli; `normalized` halves it.
/// x, y and I are identical in both conventions.
Mat logical_pauli(int qubit, LogicalAxis axis, bool normalized = true);

/// Product logical_pauli(1, a) * logical_pauli(2, b), normalized.
Mat logical_product(LogicalAxis a, LogicalAxis b);

/// Standard 4x4 two-qubit Pauli sigma_a (x) sigma_b (qubit 1 most significant).
Mat two_qubit_pauli(LogicalAxis a, LogicalAxis b);

/// <b_i| rho |b_j> for the logical basis.
Mat project_logical(const Mat& rho);

/// 4x4 block <b_i| U |b_j>.
Mat logical_block(const Mat& u);

/// 1 - Tr(P U^dag P U P) / 4. Rejects non-unitary input.
double leakage(const Mat& u);

/// |Tr(target^dag <b|U|b>)|^2 / 16.
double logical_gate_fidelity(const Mat& u, const Mat& target_l);

/// target_l on span(basis) (+) remainder on the complement; identity remainder
/// when none is given.
Mat embed_logical_unitary(const Mat& target_l, const std::optional<Mat>& remainder = std::nullopt);

/// Embeds a 4x4 operator as basis * op * basis^dag (zero on the complement).
Mat embed_logical_operator(const Mat& op_l);

/// Logical state vector (16 entries) from 4 logical amplitudes.
Vec embed_logical_state(const Vec& psi_l);

}  // namespace dfs
