#include <doctest.h>

#include <random>

#include "dfs/logical.hpp"
#include "dfs/spin_model.hpp"
#include "dfs/tomography.hpp"
#include "test_util.hpp"

using namespace dfs;

TEST_CASE("observe normalization and linearity") {
  const Mat sx1 = pauli_embed(4, 1, Axis::X);
  const auto r = observe(sx1);
  CHECK(r[0].real() == doctest::Approx(8.0));
  CHECK(std::abs(r[0].imag()) < 1e-14);
  for (int k = 1; k < 4; ++k) CHECK(std::abs(r[k]) < 1e-14);

  for (const cplx& v : observe(pauli_embed(4, 1, Axis::Z))) CHECK(std::abs(v) < 1e-14);

  const auto half = observe(0.5 * (sx1 + pauli_embed(4, 1, Axis::Y)));
  CHECK(std::abs(half[0] - cplx(4.0, 4.0)) < 1e-12);

  std::mt19937_64 rng(3);
  const Mat a = test::random_hermitian(16, rng);
  const Mat b = test::random_hermitian(16, rng);
  const auto oa = observe(a), ob = observe(b), oab = observe(2.0 * a - 3.0 * b);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(oab[k] - (2.0 * oa[k] - 3.0 * ob[k])) < 1e-12);

  CHECK_THROWS_AS(observe(Mat::Identity(3, 3)), InvalidInput);
}

TEST_CASE("decoder maps the logical block onto spins 1 and 2") {
  const Mat d = decoder_unitary();
  CHECK(unitarity_error(d) < 1e-13);
  const Mat e = logical_basis().basis;
  CHECK(max_abs(d * e - decoder_isometry()) < 1e-14);
}

TEST_CASE("zero-quantum logical coherences are invisible without a readout pulse") {
  const Mat x1 = logical_pauli(1, LogicalAxis::X);
  for (const cplx& v : observe(x1)) CHECK(std::abs(v) < 1e-14);
  // After the first readout the same deviation shows up on spin 1.
  const Mat u = ideal_readout_set().readouts.front().unitary;
  const auto r = observe(u * x1 * u.adjoint());
  CHECK(std::abs(r[0]) > 1.0);
}

TEST_CASE("fourteen readouts, each a unitary exposing its design operator") {
  const auto designs = readout_designs();
  REQUIRE(designs.size() == 14);
  const ReadoutSet set = ideal_readout_set();
  REQUIRE(set.readouts.size() == 14);
  for (const auto& r : set.readouts) {
    CHECK(unitarity_error(r.unitary) < 1e-12);
    CHECK(unitarity_error(r.logical_map) < 1e-12);
  }
  // Designs cover all 15 non-identity logical Paulis exactly once.
  std::string all;
  for (const auto& d : designs) all += d.design + ",";
  for (const char* p : {"IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ"})
    CHECK(all.find(std::string(p) + ",") != std::string::npos);
}

TEST_CASE("forward model is full rank and well conditioned") {
  const ReadoutSet set = ideal_readout_set();
  const RMat m = forward_model(set);
  CHECK(m.rows() == 14 * 8);
  CHECK(m.cols() == 16);
  const double cond = forward_condition(set);
  CHECK(cond <= 100.0);
  MESSAGE("forward-model condition " << cond);
}

TEST_CASE("noiseless round trip") {
  const ReadoutSet set = ideal_readout_set();
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat rho_l = test::random_density(4, rng);
    const Reconstruction rec = reconstruct(simulate_records(embed_logical_operator(rho_l), set), set);
    CHECK(max_abs(rec.rho_l - rho_l) < 1e-10);
    CHECK(rec.residual < 1e-10);
  }
}

TEST_CASE("ideal readout ignores the complement block") {
  const ReadoutSet set = ideal_readout_set();
  std::mt19937_64 rng(5);
  const Mat rho = test::random_hermitian(16, rng);
  const Reconstruction rec = reconstruct(simulate_records(rho, set), set);
  CHECK(max_abs(rec.rho_l - project_logical(rho)) < 1e-10);
}

TEST_CASE("noisy reconstruction error is bounded by the condition number") {
  const ReadoutSet set = ideal_readout_set();
  const RMat m = forward_model(set);
  Eigen::JacobiSVD<RMat> svd(m);
  const double smin = svd.singularValues().minCoeff();
  std::mt19937_64 rng(17);
  std::normal_distribution<double> noise(0.0, 0.01);
  const Mat rho_l = test::random_density(4, rng);
  const RVec c_true = pauli_coefficients(rho_l);
  for (int seed = 0; seed < 100; ++seed) {
    auto records = simulate_records(embed_logical_operator(rho_l), set);
    double noise_norm2 = 0.0;
    for (auto& rec : records)
      for (cplx& v : rec) {
        const cplx e(noise(rng), noise(rng));
        noise_norm2 += std::norm(e);
        v += e;
      }
    const Reconstruction rec = reconstruct(records, set);
    // Least squares: ||dc|| <= ||noise|| / sigma_min.
    CHECK((rec.coefficients - c_true).norm() <= std::sqrt(noise_norm2) / smin * (1.0 + 1e-9));
  }
}

TEST_CASE("reconstruct rejects bad input") {
  const ReadoutSet set = ideal_readout_set();
  auto records = simulate_records(Mat::Identity(16, 16), set);
  records.pop_back();
  CHECK_THROWS_AS(reconstruct(records, set), InvalidInput);

  ReadoutSet single;
  single.readouts.push_back(set.readouts.front());
  CHECK_THROWS_AS(reconstruct(simulate_records(Mat::Identity(16, 16), single), single), NumericalError);
}

TEST_CASE("correlation properties") {
  std::mt19937_64 rng(23);
  const Mat a = test::random_hermitian(4, rng);
  const Mat b = test::random_hermitian(4, rng);
  CHECK(correlation(a, a) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(correlation(a, b) == doctest::Approx(correlation(b, a)).epsilon(1e-14));
  CHECK(correlation(-2.5 * a, b) == doctest::Approx(-correlation(a, b)).epsilon(1e-13));
  CHECK(correlation(3.0 * a + Mat::Identity(4, 4), a) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(std::abs(correlation(two_qubit_pauli(LogicalAxis::Z, LogicalAxis::I),
                             two_qubit_pauli(LogicalAxis::X, LogicalAxis::I))) < 1e-15);
  const double c = correlation(a, b);
  CHECK(c <= 1.0);
  CHECK(c >= -1.0);
  CHECK_THROWS_AS(correlation(Mat::Identity(4, 4), a), InvalidInput);
}

TEST_CASE("pauli coefficient round trip") {
  std::mt19937_64 rng(29);
  const Mat rho = test::random_hermitian(4, rng);
  CHECK(max_abs(from_pauli_coefficients(pauli_coefficients(rho)) - rho) < 1e-13);
}
