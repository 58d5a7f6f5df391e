#include <doctest.h>

#include <cmath>
#include <random>

#include "dfs/experiments.hpp"
#include "dfs/logical.hpp"
#include "test_util.hpp"

using namespace dfs;

namespace {

Pulse random_pulse(std::size_t n, std::uint64_t seed, double amp = 8000.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  Pulse p = Pulse::zeros(n, 1e-5);
  for (auto& a : p.amps) a = {u(rng), u(rng)};
  return p;
}

Ensemble nominal_only() { return Ensemble::single(cnb_nominal()); }

}  // namespace

TEST_CASE("ideal Bell pipeline is exact") {
  const ExperimentReport r = run_bell_pipeline(BellPipelineInputs{{cnb_nominal(), 1.0, 1.0}});
  CHECK(r.name == "bell_pipeline");
  CHECK(r.scalar("corr_bell") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.scalar("corr_input") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.scalar("fidelity_ent") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(r.scalar("leakage_ent")) < 1e-12);
  CHECK(r.scalar("condition") == doctest::Approx(std::sqrt(14.0)).epsilon(1e-10));
  CHECK_THROWS_AS(r.scalar("no_such_key"), InvalidInput);
}

TEST_CASE("Bell pipeline with an arbitrary entangler pulse reports its imperfection") {
  BellPipelineInputs in{{cnb_nominal(), 1.0, 1.0}};
  in.u_ent = random_pulse(30, 1);
  const ExperimentReport r = run_bell_pipeline(in);
  CHECK(r.scalar("corr_bell") < 0.99);
  CHECK(r.scalar("leakage_ent") > 1e-3);
  CHECK(r.scalar("corr_input") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("robustness sweep") {
  const Pulse p = random_pulse(60, 2, 5000.0);
  const ExperimentReport zero = run_robustness_sweep(p, cnb_nominal(), 0.0);
  CHECK(zero.table("sweep").rows.size() == 1);

  const ExperimentReport a = run_robustness_sweep(p, cnb_nominal(), 100.0);
  const ExperimentReport b = run_robustness_sweep(p, cnb_nominal(), 100.0);
  const ReportTable& t = a.table("sweep");
  REQUIRE(t.rows.size() == 65);
  CHECK(t.columns.size() == 10);
  CHECK(a.scalar("n_corners") == 64.0);
  for (std::size_t k = 0; k < t.rows.size(); ++k) CHECK(t.rows[k] == b.table("sweep").rows[k]);
  CHECK(t.rows[0][8] == doctest::Approx(1.0).epsilon(1e-12));  // nominal vs itself
  // Corner 0 lowers every coupling by the half width.
  CHECK(t.rows[1][1] == doctest::Approx(-729.0 - 100.0));
  CHECK(t.rows[1][6] == doctest::Approx(-1875.0 - 100.0));

  const ExperimentReport wide = run_robustness_sweep(p, cnb_nominal(), 300.0);
  CHECK(wide.scalar("mean_corr_drop") >= a.scalar("mean_corr_drop"));
  CHECK(a.scalar("max_corr_drop") >= a.scalar("mean_corr_drop"));
}

TEST_CASE("logical path is immune to collective dephasing") {
  const ExperimentReport r =
      run_logical_vs_spin(random_pulse(40, 3), random_pulse(40, 4), nominal_only(), {0.0, 0.2, 0.5, 1.0});
  const ReportTable& t = r.table("dephasing");
  REQUIRE(t.rows.size() == 4);
  for (const auto& row : t.rows) CHECK(std::abs(row[1] - t.rows[0][1]) <= 1e-10);
  CHECK(r.scalar("logical_variation") <= 1e-10);
  CHECK(r.scalar("logical_duration_s") == doctest::Approx(4e-4));
}

TEST_CASE("targets") {
  const auto names = target_names();
  CHECK(names.size() == 17);
  CHECK_THROWS_AS(make_target("cnot13"), InvalidInput);
  const SynthesisTarget spin = make_target("spin_cnot");
  CHECK(spin.spins == std::vector<std::size_t>{0, 1});
  CHECK(spin.reference.rows() == 4);
  const SynthesisTarget ent = make_target("u_ent");
  CHECK(ent.spins.size() == 4);
  CHECK(max_abs(ent.reference - u_ent_logical().block) == 0.0);
  for (const auto& n : names) CHECK_NOTHROW(make_target(n));
}

TEST_CASE("short synthesis improves the objective") {
  GrapeConfig cfg;
  cfg.n_steps = 40;
  cfg.max_iters = 20;
  const SynthesisTarget t = make_target("spin_cnot");
  const Ensemble ens = nominal_only();
  const Pulse init = random_initial_pulse(cfg);
  const OptimizeResult r = synthesize(t, cfg, ens, init);
  CHECK(r.fidelity() > target_fidelity(t, init, ens));
  CHECK(r.fidelity() == doctest::Approx(target_fidelity(t, r.pulse, ens)).epsilon(1e-12));
}

TEST_CASE("duration scan stops at the first success") {
  GrapeConfig cfg;
  cfg.max_iters = 2;
  const SynthesisTarget t = make_target("spin_cnot");
  const DurationScan s = duration_scan(t, cfg, nominal_only(), {1e-4, 2e-4, 3e-4}, 1e-6);
  REQUIRE(s.minimal_s.has_value());
  CHECK(*s.minimal_s == doctest::Approx(1e-4));
  CHECK(std::isnan(s.fidelity[1]));
  CHECK(std::isnan(s.fidelity[2]));

  const DurationScan none = duration_scan(t, cfg, nominal_only(), {1e-4, 2e-4}, 1.0 + 1e-9);
  CHECK_FALSE(none.minimal_s.has_value());
  CHECK_FALSE(std::isnan(none.fidelity[1]));

  CHECK_THROWS_AS(duration_scan(t, cfg, nominal_only(), {2e-4, 1e-4}, 0.5), InvalidInput);
}
