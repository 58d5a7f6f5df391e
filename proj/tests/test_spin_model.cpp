#include <doctest.h>

#include <random>

#include "dfs/dynamics.hpp"
#include "dfs/spin_model.hpp"
#include "test_util.hpp"

using namespace dfs;

namespace {

SpinSystem random_system(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2000.0, 2000.0);
  SpinSystem s = SpinSystem::uncoupled(std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    s.nu[a] = u(rng);
    for (std::size_t b = a + 1; b < n; ++b) {
      s.d(a, b) = s.d(b, a) = u(rng);
      s.j(a, b) = s.j(b, a) = 0.01 * u(rng);
    }
  }
  return s;
}

}  // namespace

TEST_CASE("pauli_embed examples") {
  const Mat z = pauli_embed(1, 1, Axis::Z);
  CHECK(z(0, 0) == cplx(1.0));
  CHECK(z(1, 1) == cplx(-1.0));

  const Mat x2 = pauli_embed(2, 2, Axis::X);
  Mat expected = Mat::Zero(4, 4);
  expected(0, 1) = expected(1, 0) = expected(2, 3) = expected(3, 2) = 1.0;
  CHECK(max_abs(x2 - expected) == 0.0);

  // |0101>: spin 3 is in |0>.
  const Mat z3 = pauli_embed(4, 3, Axis::Z);
  CHECK(z3(0b0101, 0b0101) == cplx(1.0));
  CHECK(z3(0b0111, 0b0111) == cplx(-1.0));

  CHECK_THROWS_AS(pauli_embed(4, 0, Axis::X), InvalidInput);
  CHECK_THROWS_AS(pauli_embed(4, 5, Axis::X), InvalidInput);
}

TEST_CASE("pauli_embed algebra") {
  const std::size_t n = 3;
  const Mat id = Mat::Identity(8, 8);
  for (std::size_t j = 1; j <= n; ++j) {
    for (Axis a : {Axis::X, Axis::Y, Axis::Z}) {
      const Mat p = pauli_embed(n, j, a);
      CHECK(std::abs(p.trace()) < 1e-15);
      CHECK(max_abs(p * p - id) < 1e-15);
      for (std::size_t k = 1; k <= n; ++k)
        for (Axis b : {Axis::X, Axis::Y, Axis::Z}) {
          const Mat q = pauli_embed(n, k, b);
          if (j != k) {
            CHECK(max_abs(commutator(p, q)) < 1e-15);
          } else if (a != b) {
            CHECK(max_abs(p * q + q * p) < 1e-15);
          }
        }
    }
  }
  // sx sy = i sz on one spin.
  CHECK(max_abs(pauli_embed(2, 1, Axis::X) * pauli_embed(2, 1, Axis::Y) - kI * pauli_embed(2, 1, Axis::Z)) <
        1e-15);
}

TEST_CASE("CNB Hamiltonian") {
  const SpinSystem cnb = cnb_nominal();
  CHECK_NOTHROW(cnb.validate());
  CHECK(cnb.nu == std::vector<double>{115.0, -234.0, 204.0, -86.0});
  CHECK(cnb.d(0, 1) == -729.0);
  CHECK(cnb.d(1, 2) == -503.0);
  CHECK(cnb.d(2, 3) == -1875.0);
  CHECK(cnb.d(0, 2) == 116.0);
  CHECK(cnb.d(0, 3) == -64.0);
  CHECK(cnb.d(1, 3) == -170.0);
  CHECK(cnb.j.cwiseAbs().maxCoeff() == 0.0);
  const Mat h = internal_hamiltonian(cnb);
  CHECK(h.rows() == 16);
  CHECK(is_hermitian(h));
  // Diagonal entry of |0000>: Zeeman sum plus all zz terms.
  double expected = 0.0;
  for (double v : cnb.nu) expected += kPi * v;
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b) expected += kPi * cnb.d(a, b);
  CHECK(h(0, 0).real() == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("empty and Zeeman-only Hamiltonians") {
  CHECK(max_abs(internal_hamiltonian(SpinSystem::uncoupled({0.0, 0.0, 0.0}))) == 0.0);
  const SpinSystem zeeman = SpinSystem::uncoupled({10.0, -20.0});
  const Mat h = internal_hamiltonian(zeeman);
  const Mat expected = kPi * (10.0 * pauli_embed(2, 1, Axis::Z) - 20.0 * pauli_embed(2, 2, Axis::Z));
  CHECK(max_abs(h - expected) < 1e-12);
}

TEST_CASE("two-spin dipolar spectrum against a general eigensolver") {
  SpinSystem s = SpinSystem::uncoupled({0.0, 0.0});
  s.d(0, 1) = s.d(1, 0) = -1875.0;
  const Mat h = internal_hamiltonian(s);
  // General (non-Hermitian) solver as an independent route.
  Eigen::ComplexEigenSolver<Mat> es(h);
  std::vector<double> ev;
  for (Eigen::Index k = 0; k < 4; ++k) ev.push_back(es.eigenvalues()(k).real());
  std::sort(ev.begin(), ev.end());
  const std::vector<double> expected{-1875.0 * kPi, -1875.0 * kPi, 0.0, 3750.0 * kPi};
  for (int k = 0; k < 4; ++k) CHECK(ev[k] == doctest::Approx(expected[k]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("rf Hamiltonian examples") {
  const Mat h1 = rf_hamiltonian(1, 1000.0, 0.0, 1.0);
  CHECK(max_abs(h1 - 1000.0 * kPi * pauli_embed(1, 1, Axis::X)) < 1e-12);
  CHECK(max_abs(step_propagator(h1, 5e-4) - (-kI) * pauli_embed(1, 1, Axis::X)) < 1e-12);
  CHECK(max_abs(rf_hamiltonian(4, 0.0, 0.0, 1.0)) == 0.0);
  const Mat h2 = rf_hamiltonian(2, 0.0, 500.0, 0.95);
  CHECK(max_abs(h2 - 475.0 * kPi * (pauli_embed(2, 1, Axis::Y) + pauli_embed(2, 2, Axis::Y))) < 1e-12);
  CHECK_THROWS_AS(rf_hamiltonian(2, 1.0, 1.0, 0.0), InvalidInput);
}

TEST_CASE("Hamiltonians conserve total Fz and are Hermitian") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const SpinSystem s = random_system(n, rng);
    const Mat h = internal_hamiltonian(s);
    CHECK(hermiticity_error(h) <= 1e-12 * max_abs(h));
    CHECK(max_abs(commutator(h, total_fz(n))) <= 1e-10 * max_abs(h));
  }
}

TEST_CASE("relabelling spins conjugates the Hamiltonian") {
  std::mt19937_64 rng(7);
  const SpinSystem s = random_system(4, rng);
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  const Mat p = qubit_permutation(4, perm);
  CHECK(unitarity_error(p) < 1e-15);
  const Mat h = internal_hamiltonian(s);
  const Mat hp = internal_hamiltonian(s.permuted(perm));
  CHECK(max_abs(hp - p * h * p.adjoint()) < 1e-9);
}

TEST_CASE("spin system validation") {
  SpinSystem s = cnb_nominal();
  s.d(0, 1) = 1.0;  // breaks symmetry
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s = cnb_nominal();
  s.j(2, 2) = 3.0;
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  s = cnb_nominal();
  s.nu[1] = std::nan("");
  CHECK_THROWS_AS(s.validate(), InvalidInput);
  CHECK_THROWS_AS(SpinSystem::uncoupled({}).validate(), InvalidInput);
}

TEST_CASE("subsystem keeps mutual couplings only") {
  const SpinSystem sub = cnb_nominal().subsystem({0, 1});
  CHECK(sub.n_spins() == 2);
  CHECK(sub.nu == std::vector<double>{115.0, -234.0});
  CHECK(sub.d(0, 1) == -729.0);
  CHECK_THROWS_AS(cnb_nominal().subsystem({0, 7}), InvalidInput);
}

TEST_CASE("collective operators") {
  const Mat fz = total_fz(3);
  CHECK(fz(0, 0) == cplx(1.5));
  CHECK(fz(7, 7) == cplx(-1.5));
  CHECK(max_abs(collective(3, Axis::Z) - 2.0 * fz) == 0.0);
  const RVec d = total_fz_diagonal(3);
  for (Eigen::Index k = 0; k < 8; ++k) CHECK(d(k) == fz(k, k).real());
}
