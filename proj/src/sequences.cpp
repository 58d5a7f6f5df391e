#include "dfs/sequences.hpp"

#include <cmath>

#include "dfs/logical.hpp"
#include "dfs/spin_model.hpp"

namespace dfs {

TargetGate u_ent_logical() {
  Mat u(4, 4);
  // clang-format off
  u <<  1.0, 0.0, -kI, 0.0,
        0.0, -kI, 0.0, -1.0,
        0.0,  kI, 0.0, -1.0,
       -1.0, 0.0, -kI, 0.0;
  // clang-format on
  u /= std::sqrt(2.0);
  return {"u_ent", u, std::nullopt, std::nullopt};
}

TargetGate u_prep_logical() {
  Mat cnot = Mat::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  return {"u_prep", cnot, two_qubit_pauli(LogicalAxis::I, LogicalAxis::Z),
          two_qubit_pauli(LogicalAxis::Z, LogicalAxis::Z)};
}

Vec logical_bell_state() {
  Vec psi = Vec::Zero(4);
  psi(0) = 1.0 / std::sqrt(2.0);
  psi(3) = -1.0 / std::sqrt(2.0);
  return psi;
}

namespace {

// Collective pi/2 rotation about the in-plane axis (cos phi, sin phi).
Mat hard_pulse(std::size_t n, double phase) {
  const Mat gen = 0.5 * (std::cos(phase) * collective(n, Axis::X) + std::sin(phase) * collective(n, Axis::Y));
  return step_propagator(gen, kPi / 2.0);
}

}  // namespace

Mat mrev8_cycle(const SpinSystem& sys, double tau) {
  if (!(tau > 0.0)) throw InvalidInput("mrev8_cycle: tau must be positive");
  const std::size_t n = sys.n_spins();
  const StepSpectrum free = step_spectrum(internal_hamiltonian(sys), tau);
  const Mat f1 = free.propagator;
  const Mat f2 = f1 * f1;
  const Mat px = hard_pulse(n, 0.0);
  const Mat py = hard_pulse(n, kPi / 2.0);
  const Mat mx = hard_pulse(n, kPi);
  const Mat my = hard_pulse(n, 3.0 * kPi / 2.0);
  // Time order left to right; the propagator multiplies on the left.
  const std::vector<const Mat*> sequence{&f1, &mx, &f1, &py, &f2, &my, &f1, &px, &f2,
                                         &px, &f1, &py, &f2, &my, &f1, &mx, &f1};
  Mat u = Mat::Identity(sys.dim(), sys.dim());
  for (const Mat* op : sequence) u = (*op) * u;
  return u;
}

Mat effective_hamiltonian(const Mat& u_cycle, double t_cycle, double alias_margin) {
  if (!(t_cycle > 0.0)) throw InvalidInput("effective_hamiltonian: t_cycle must be positive");
  if (!is_unitary(u_cycle, 1e-9)) throw InvalidInput("effective_hamiltonian: input is not unitary");
  // Unitary matrices are normal, so the complex Schur form is diagonal and
  // the Schur vectors are an orthonormal eigenbasis even with degeneracy.
  Eigen::ComplexSchur<Mat> schur(u_cycle);
  const Mat& q = schur.matrixU();
  const Mat& t = schur.matrixT();
  Vec phases(t.rows());
  for (Eigen::Index k = 0; k < t.rows(); ++k) {
    const double theta = std::arg(t(k, k));
    if (kPi - std::abs(theta) < alias_margin)
      throw NumericalError("effective_hamiltonian: eigenphase at +/-pi, cycle aliased");
    // U = exp(-i H t)  =>  eigenvalue of H is -theta / t.
    phases(k) = -theta / t_cycle;
  }
  const Mat h = q * phases.asDiagonal() * q.adjoint();
  return 0.5 * (h + h.adjoint());
}

std::vector<Eigen::Vector3d> single_spin_fields(const Mat& h, std::size_t n_spins) {
  const double norm = static_cast<double>(std::size_t{1} << n_spins);
  std::vector<Eigen::Vector3d> out;
  for (std::size_t k = 1; k <= n_spins; ++k) {
    Eigen::Vector3d b;
    b(0) = (h * pauli_embed(n_spins, k, Axis::X)).trace().real() / norm;
    b(1) = (h * pauli_embed(n_spins, k, Axis::Y)).trace().real() / norm;
    b(2) = (h * pauli_embed(n_spins, k, Axis::Z)).trace().real() / norm;
    out.push_back(b);
  }
  return out;
}

double mrev8_shift_scale(const SpinSystem& sys, double tau) {
  const Mat h = effective_hamiltonian(mrev8_cycle(sys, tau), 12.0 * tau);
  const auto fields = single_spin_fields(h, sys.n_spins());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < sys.n_spins(); ++k) {
    if (sys.nu[k] == 0.0) continue;
    num += fields[k].norm();
    den += kPi * std::abs(sys.nu[k]);
  }
  if (den == 0.0) throw InvalidInput("mrev8_shift_scale: all chemical shifts are zero");
  return num / den;
}

Mat experiment_a_state() {
  return logical_pauli(1, LogicalAxis::Z, false) + logical_pauli(2, LogicalAxis::Z, false);
}

Mat experiment_b_input() { return logical_pauli(2, LogicalAxis::Z, false); }

Mat prepare_pseudo_pure(const Mat& u_prep) {
  if (u_prep.rows() != 16 || u_prep.cols() != 16)
    throw InvalidInput("prepare_pseudo_pure: expected a 16x16 propagator");
  return experiment_a_state() + u_prep * experiment_b_input() * u_prep.adjoint();
}

Mat prepare_pseudo_pure(const Pulse& u_prep_pulse, const EnsembleMember& member) {
  if (member.system.n_spins() != 4) throw InvalidInput("prepare_pseudo_pure: four spins required");
  return prepare_pseudo_pure(pulse_propagator(u_prep_pulse, member));
}

}  // namespace dfs
