#include "dfs/logical.hpp"

#include <algorithm>

#include "dfs/spin_model.hpp"

namespace dfs {
namespace {

LogicalSubspace build_logical_subspace() {
  LogicalSubspace s;
  s.basis = Mat::Zero(16, 4);
  for (std::size_t k = 0; k < 4; ++k) s.basis(LogicalSubspace::kIndices[k], k) = 1.0;
  s.projector = s.basis * s.basis.adjoint();
  s.complement = Mat::Zero(16, 12);
  std::size_t col = 0;
  for (std::size_t idx = 0; idx < 16; ++idx) {
    const auto& li = LogicalSubspace::kIndices;
    if (std::find(li.begin(), li.end(), idx) == li.end()) s.complement(idx, col++) = 1.0;
  }
  return s;
}

Mat pauli2(LogicalAxis a) {
  Mat s = Mat::Zero(2, 2);
  switch (a) {
    case LogicalAxis::I:
      s = Mat::Identity(2, 2);
      break;
    case LogicalAxis::X:
      s(0, 1) = s(1, 0) = 1.0;
      break;
    case LogicalAxis::Y:
      s(0, 1) = -kI;
      s(1, 0) = kI;
      break;
    case LogicalAxis::Z:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
  }
  return s;
}

void require_dims(const Mat& m, Eigen::Index r, Eigen::Index c, const char* what) {
  if (m.rows() != r || m.cols() != c)
    throw InvalidInput(std::string(what) + ": expected " + std::to_string(r) + "x" +
                       std::to_string(c) + ", got " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()));
}

}  // namespace

const LogicalSubspace& logical_basis() {
  static const LogicalSubspace s = build_logical_subspace();
  return s;
}

Mat logical_pauli(int qubit, LogicalAxis axis, bool normalized) {
  if (qubit != 1 && qubit != 2) throw InvalidInput("logical_pauli: qubit must be 1 or 2");
  const std::size_t a = qubit == 1 ? 1 : 3;
  const std::size_t b = a + 1;
  const auto s = [](std::size_t k, Axis ax) { return pauli_embed(4, k, ax); };
  switch (axis) {
    case LogicalAxis::X:
      return 0.5 * (s(a, Axis::X) * s(b, Axis::X) + s(a, Axis::Y) * s(b, Axis::Y));
    case LogicalAxis::Y:
      return 0.5 * (s(a, Axis::Y) * s(b, Axis::X) - s(a, Axis::X) * s(b, Axis::Y));
    case LogicalAxis::Z:
      return (normalized ? 0.5 : 1.0) * (s(a, Axis::Z) - s(b, Axis::Z));
    case LogicalAxis::I:
      return 0.5 * (Mat::Identity(16, 16) - s(a, Axis::Z) * s(b, Axis::Z));
  }
  return {};
}

Mat logical_product(LogicalAxis a, LogicalAxis b) {
  return logical_pauli(1, a, true) * logical_pauli(2, b, true);
}

Mat two_qubit_pauli(LogicalAxis a, LogicalAxis b) {
  return kron(pauli2(a), pauli2(b));
}

Mat project_logical(const Mat& rho) {
  require_dims(rho, 16, 16, "project_logical");
  const Mat& e = logical_basis().basis;
  return e.adjoint() * rho * e;
}

Mat logical_block(const Mat& u) {
  require_dims(u, 16, 16, "logical_block");
  const Mat& e = logical_basis().basis;
  return e.adjoint() * u * e;
}

double leakage(const Mat& u) {
  require_dims(u, 16, 16, "leakage");
  if (!is_unitary(u, 1e-8)) throw InvalidInput("leakage: input is not unitary");
  const double kept = logical_block(u).squaredNorm() / 4.0;
  return std::clamp(1.0 - kept, 0.0, 1.0);
}

double logical_gate_fidelity(const Mat& u, const Mat& target_l) {
  require_dims(u, 16, 16, "logical_gate_fidelity (U)");
  require_dims(target_l, 4, 4, "logical_gate_fidelity (target)");
  const cplx tr = (target_l.adjoint() * logical_block(u)).trace();
  return std::norm(tr) / 16.0;
}

Mat embed_logical_unitary(const Mat& target_l, const std::optional<Mat>& remainder) {
  require_dims(target_l, 4, 4, "embed_logical_unitary (logical block)");
  if (!is_unitary(target_l, 1e-10))
    throw InvalidInput("embed_logical_unitary: logical block is not unitary");
  const auto& s = logical_basis();
  Mat out = s.basis * target_l * s.basis.adjoint();
  if (remainder) {
    require_dims(*remainder, 12, 12, "embed_logical_unitary (remainder)");
    if (!is_unitary(*remainder, 1e-10))
      throw InvalidInput("embed_logical_unitary: remainder block is not unitary");
    out += s.complement * (*remainder) * s.complement.adjoint();
  } else {
    out += s.complement * s.complement.adjoint();
  }
  return out;
}

Mat embed_logical_operator(const Mat& op_l) {
  require_dims(op_l, 4, 4, "embed_logical_operator");
  const Mat& e = logical_basis().basis;
  return e * op_l * e.adjoint();
}

Vec embed_logical_state(const Vec& psi_l) {
  if (psi_l.size() != 4) throw InvalidInput("embed_logical_state: expected 4 amplitudes");
  return logical_basis().basis * psi_l;
}

}  // namespace dfs
