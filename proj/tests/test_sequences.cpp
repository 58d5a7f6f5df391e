#include <doctest.h>

#include <random>

#include "dfs/logical.hpp"
#include "dfs/sequences.hpp"
#include "test_util.hpp"

using namespace dfs;

namespace {

const double kMrevScale = std::sqrt(2.0) / 3.0;

// Two-body part of H: remove identity and single-spin terms.
Mat two_body(const Mat& h, std::size_t n) {
  Mat out = h - Mat::Identity(h.rows(), h.cols()) * (h.trace() / static_cast<double>(h.rows()));
  const auto fields = single_spin_fields(h, n);
  for (std::size_t j = 0; j < n; ++j)
    out -= fields[j](0) * pauli_embed(n, j + 1, Axis::X) + fields[j](1) * pauli_embed(n, j + 1, Axis::Y) +
           fields[j](2) * pauli_embed(n, j + 1, Axis::Z);
  return out;
}

double single_spin_scale(double tau) {
  const SpinSystem s = SpinSystem::uncoupled({100.0});
  const Mat h = effective_hamiltonian(mrev8_cycle(s, tau), 12.0 * tau);
  return single_spin_fields(h, 1)[0].norm() / (100.0 * kPi);
}

}  // namespace

TEST_CASE("U_ent block") {
  const TargetGate g = u_ent_logical();
  CHECK(g.name == "u_ent");
  CHECK_FALSE(g.is_state_map());
  CHECK(unitarity_error(g.block) < 1e-15);
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(g.block(0, 0) == cplx(r));
  CHECK(g.block(1, 1) == cplx(0.0, -r));
  CHECK(g.block(3, 0) == cplx(-r));
  CHECK(max_abs(g.block * Vec::Unit(4, 0) - logical_bell_state()) < 1e-15);
  // |10>_L column by explicit product: (-i|00>_L - i|11>_L)/sqrt(2).
  Vec expected(4);
  expected << cplx(0, -r), 0.0, 0.0, cplx(0, -r);
  CHECK(max_abs(g.block * Vec::Unit(4, 2) - expected) < 1e-15);
  CHECK(logical_bell_state().norm() == doctest::Approx(1.0));
}

TEST_CASE("U_prep maps Z on qubit 2 to ZZ") {
  const TargetGate g = u_prep_logical();
  REQUIRE(g.is_state_map());
  CHECK(unitarity_error(g.block) < 1e-15);
  const Mat zi = two_qubit_pauli(LogicalAxis::I, LogicalAxis::Z);
  const Mat zz = two_qubit_pauli(LogicalAxis::Z, LogicalAxis::Z);
  CHECK(max_abs(*g.rho_in - zi) < 1e-15);
  CHECK(max_abs(*g.rho_target - zz) < 1e-15);
  CHECK(max_abs(g.block * zi * g.block.adjoint() - zz) < 1e-15);
}

TEST_CASE("MREV-8 cycle with no internal Hamiltonian is the identity") {
  const Mat u = mrev8_cycle(SpinSystem::uncoupled({0.0, 0.0, 0.0}), 15e-6);
  CHECK(max_abs(u - Mat::Identity(8, 8)) < 1e-13);
  CHECK(max_abs(effective_hamiltonian(Mat::Identity(4, 4), 1e-4)) == 0.0);
}

TEST_CASE("MREV-8 single-spin precession axis and scale") {
  const SpinSystem s = SpinSystem::uncoupled({100.0});
  const Mat h = effective_hamiltonian(mrev8_cycle(s, 15e-6), 180e-6);
  const Eigen::Vector3d f = single_spin_fields(h, 1)[0];
  CHECK(std::abs(f(1)) < 0.02 * f.norm());
  CHECK(std::abs(std::abs(f(0)) - std::abs(f(2))) < 0.02 * f.norm());
  CHECK(f.norm() / (100.0 * kPi) == doctest::Approx(kMrevScale).epsilon(0.02));
}

TEST_CASE("MREV-8 scale extrapolates to sqrt(2)/3") {
  const double t1 = 2e-6, t2 = 5e-6, t3 = 10e-6;
  const double s1 = single_spin_scale(t1), s2 = single_spin_scale(t2), s3 = single_spin_scale(t3);
  // Quadratic Lagrange extrapolation to tau = 0.
  const double l1 = (t2 * t3) / ((t1 - t2) * (t1 - t3));
  const double l2 = (t1 * t3) / ((t2 - t1) * (t2 - t3));
  const double l3 = (t1 * t2) / ((t3 - t1) * (t3 - t2));
  const double s0 = l1 * s1 + l2 * s2 + l3 * s3;
  CHECK(std::abs(s0 / kMrevScale - 1.0) < 0.01);
}

TEST_CASE("MREV-8 on the CNB molecule") {
  const double scale = mrev8_shift_scale(cnb_nominal(), 15e-6);
  CHECK(scale >= 0.45);
  CHECK(scale <= 0.55);
}

TEST_CASE("MREV-8 suppresses dipolar couplings") {
  const SpinSystem s = cnb_nominal().subsystem({0, 1});
  const Mat h_free = internal_hamiltonian(s);
  const Mat h_eff = effective_hamiltonian(mrev8_cycle(s, 15e-6), 180e-6);
  const double free_norm = two_body(h_free, 2).norm();
  const double eff_norm = two_body(h_eff, 2).norm();
  CHECK(free_norm > 0.0);
  CHECK(eff_norm * 10.0 <= free_norm);
}

TEST_CASE("effective_hamiltonian") {
  std::mt19937_64 rng(21);
  const Mat h = test::random_hermitian(16, rng) * 1000.0;
  const double t = 1e-4;
  CHECK(max_abs(effective_hamiltonian(step_propagator(h, t), t) - h) < 1e-10 * max_abs(h) * 1e3);
  const Mat minus = -Mat::Identity(2, 2);
  CHECK_THROWS_AS(effective_hamiltonian(minus, 1.0), NumericalError);
  CHECK_THROWS_AS(effective_hamiltonian(2.0 * Mat::Identity(2, 2), 1.0), InvalidInput);
}

TEST_CASE("pseudo-pure preparation") {
  const Mat exact = project_logical(prepare_pseudo_pure(embed_logical_unitary(u_prep_logical().block)));
  Mat d = Mat::Zero(4, 4);
  d.diagonal() << 3.0, -1.0, -1.0, -1.0;
  CHECK(max_abs(exact - d * (exact(0, 0).real() / 3.0)) < 1e-14);
  CHECK(exact(0, 0).real() > 0.0);

  const Mat ident = project_logical(prepare_pseudo_pure(Mat::Identity(16, 16)));
  d.diagonal() << 3.0, -1.0, 1.0, -3.0;
  CHECK(max_abs(ident - d * (ident(0, 0).real() / 3.0)) < 1e-14);

  // Correlation with the traceless part of |00><00|.
  const Mat pure = Vec::Unit(4, 0) * Vec::Unit(4, 0).adjoint();
  const Mat a = exact - Mat::Identity(4, 4) * (exact.trace() / 4.0);
  const Mat b = pure - Mat::Identity(4, 4) / 4.0;
  const double corr = (a.adjoint() * b).trace().real() / (a.norm() * b.norm());
  CHECK(corr == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pseudo-pure output is traceless and Hermitian for any prep unitary") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat u = test::random_unitary(16, rng);
    const Mat out = prepare_pseudo_pure(u);
    CHECK(std::abs(out.trace()) <= 1e-12);
    CHECK(hermiticity_error(out) <= 1e-12);
  }
  const Pulse p = Pulse::constant(10, 1e-5, 1000.0, 0.0);
  const Mat out = prepare_pseudo_pure(p, EnsembleMember{cnb_nominal(), 1.0, 1.0});
  CHECK(std::abs(out.trace()) <= 1e-12);
  CHECK(hermiticity_error(out) <= 1e-12);
  CHECK(std::abs(experiment_a_state().trace()) == 0.0);
  CHECK(std::abs(experiment_b_input().trace()) == 0.0);
}
