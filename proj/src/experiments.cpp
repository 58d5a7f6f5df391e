#include "dfs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dfs/logical.hpp"
#include "dfs/parallel.hpp"
#include "dfs/spin_model.hpp"

namespace dfs {

void ExperimentReport::set(const std::string& key, double value) {
  for (auto& [k, v] : scalars)
    if (k == key) {
      v = value;
      return;
    }
  scalars.emplace_back(key, value);
}

void ExperimentReport::param(const std::string& key, const std::string& value) {
  parameters.emplace_back(key, value);
}

double ExperimentReport::scalar(const std::string& key) const {
  for (const auto& [k, v] : scalars)
    if (k == key) return v;
  throw InvalidInput("report " + name + " has no scalar '" + key + "'");
}

bool ExperimentReport::has_scalar(const std::string& key) const {
  return std::any_of(scalars.begin(), scalars.end(), [&](const auto& kv) { return kv.first == key; });
}

const ReportTable& ExperimentReport::table(const std::string& table_name) const {
  for (const auto& t : tables)
    if (t.name == table_name) return t;
  throw InvalidInput("report " + name + " has no table '" + table_name + "'");
}

namespace {

Mat cnot() {
  Mat c = Mat::Zero(4, 4);
  c(0, 0) = c(1, 1) = c(2, 3) = c(3, 2) = 1.0;
  return c;
}

Mat pure(const Vec& psi) { return psi * psi.adjoint(); }

Vec logical_zero() { return embed_logical_state(Vec::Unit(4, 0)); }

}  // namespace

std::vector<std::string> target_names() {
  std::vector<std::string> names{"u_prep", "u_ent"};
  for (const auto& d : readout_designs()) names.push_back(d.label);
  names.emplace_back("spin_cnot");
  return names;
}

SynthesisTarget make_target(const std::string& name) {
  if (name == "u_ent") {
    const TargetGate g = u_ent_logical();
    return {name, Objective::logical_gate(g.block), {0, 1, 2, 3}, g.block};
  }
  if (name == "u_prep") {
    const TargetGate g = u_prep_logical();
    return {name, Objective::logical_state_transfer(*g.rho_in, *g.rho_target), {0, 1, 2, 3}, g.block};
  }
  if (name == "spin_cnot") return {name, Objective::full_gate(cnot()), {0, 1}, cnot()};
  for (const auto& d : readout_designs())
    if (d.label == name)
      return {name, Objective::isometry(logical_basis().basis, d.output_isometry), {0, 1, 2, 3}, d.logical_map};
  std::string known;
  for (const auto& n : target_names()) known += (known.empty() ? "" : ", ") + n;
  throw InvalidInput("unknown target '" + name + "' (expected one of: " + known + ")");
}

namespace {

Ensemble ensemble_for(const SynthesisTarget& target, const Ensemble& ens) {
  ens.validate();
  const std::size_t n = ens.members.front().system.n_spins();
  bool all = target.spins.size() == n;
  for (std::size_t k = 0; all && k < n; ++k) all = target.spins[k] == k;
  return all ? ens : ens.restricted(target.spins);
}

}  // namespace

OptimizeResult synthesize(const SynthesisTarget& target, const GrapeConfig& cfg, const Ensemble& ens) {
  return optimize(cfg, ensemble_for(target, ens), target.objective);
}

OptimizeResult synthesize(const SynthesisTarget& target, const GrapeConfig& cfg, const Ensemble& ens,
                          const Pulse& init) {
  return optimize(cfg, ensemble_for(target, ens), target.objective, init);
}

double target_fidelity(const SynthesisTarget& target, const Pulse& pulse, const Ensemble& ens) {
  return ensemble_value(pulse, ensemble_for(target, ens), target.objective);
}

ExperimentReport run_bell_pipeline(const BellPipelineInputs& in) {
  if (in.member.system.n_spins() != 4) throw InvalidInput("run_bell_pipeline: four spins required");
  ExperimentReport rep;
  rep.name = "bell_pipeline";
  rep.param("u_prep", in.u_prep ? "pulse" : "exact");
  rep.param("u_ent", in.u_ent ? "pulse" : "exact");
  rep.param("readout", in.readouts.mode == ReadoutMode::Ideal ? "ideal" : "synthesized");

  const Mat u_prep = in.u_prep ? pulse_propagator(*in.u_prep, in.member)
                               : embed_logical_unitary(u_prep_logical().block);
  const Mat u_ent = in.u_ent ? pulse_propagator(*in.u_ent, in.member)
                             : embed_logical_unitary(u_ent_logical().block);

  const Mat rho_in = prepare_pseudo_pure(u_prep);
  const Mat rho_out = u_ent * rho_in * u_ent.adjoint();

  const Reconstruction rec_in = reconstruct(simulate_records(rho_in, in.readouts), in.readouts);
  const Reconstruction rec_out = reconstruct(simulate_records(rho_out, in.readouts), in.readouts);

  const Mat ideal_in = pure(Vec::Unit(4, 0));
  const Mat ideal_bell = pure(logical_bell_state());

  rep.set("corr_input", correlation(rec_in.rho_l, ideal_in));
  rep.set("corr_bell", correlation(rec_out.rho_l, ideal_bell));
  rep.set("fidelity_ent", logical_gate_fidelity(u_ent, u_ent_logical().block));
  rep.set("leakage_ent", leakage(u_ent));
  rep.set("residual_input", rec_in.residual);
  rep.set("residual_bell", rec_out.residual);
  rep.set("condition", rec_out.condition);
  rep.matrices.emplace_back("rho_input_reconstructed", rec_in.rho_l);
  rep.matrices.emplace_back("rho_bell_reconstructed", rec_out.rho_l);
  rep.matrices.emplace_back("rho_bell_ideal", ideal_bell);
  return rep;
}

std::vector<std::pair<std::size_t, std::size_t>> coupling_pairs() {
  return {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
}

ExperimentReport run_robustness_sweep(const Pulse& u_ent, const SpinSystem& nominal, double half_width_hz,
                                      double eps) {
  nominal.validate();
  if (nominal.n_spins() != 4) throw InvalidInput("run_robustness_sweep: four spins required");
  if (!(half_width_hz >= 0.0) || !std::isfinite(half_width_hz))
    throw InvalidInput("run_robustness_sweep: half width must be finite and non-negative");
  const auto pairs = coupling_pairs();
  const std::size_t n_corners = half_width_hz > 0.0 ? std::size_t{1} << pairs.size() : 0;

  std::vector<SpinSystem> points{nominal};
  for (std::size_t c = 0; c < n_corners; ++c) {
    SpinSystem s = nominal;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const double shift = ((c >> p) & 1u) ? half_width_hz : -half_width_hz;
      const auto [a, b] = pairs[p];
      s.d(a, b) += shift;
      s.d(b, a) += shift;
    }
    points.push_back(std::move(s));
  }

  const Mat target = u_ent_logical().block;
  const Mat rho0 = pure(logical_zero());
  const Mat ideal_bell = pure(logical_bell_state());
  std::vector<double> fid(points.size());
  std::vector<Mat> out(points.size());
  parallel_for(points.size(), [&](std::size_t i) {
    const Mat u = pulse_propagator(u_ent, EnsembleMember{points[i], eps, 1.0});
    fid[i] = logical_gate_fidelity(u, target);
    out[i] = project_logical(u * rho0 * u.adjoint());
  });

  ExperimentReport rep;
  rep.name = "robustness_sweep";
  rep.param("half_width_hz", std::to_string(half_width_hz));
  rep.param("eps", std::to_string(eps));
  ReportTable table{"sweep", {"point", "d12", "d13", "d14", "d23", "d24", "d34", "fidelity",
                              "corr_vs_nominal", "corr_vs_bell"}, {}};
  double sum_drop = 0.0, max_drop = 0.0, sum_fdrop = 0.0, max_fdrop = 0.0, min_fid = fid[0];
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double c_nom = correlation(out[i], out[0]);
    const double c_bell = correlation(out[i], ideal_bell);
    std::vector<double> row{static_cast<double>(i)};
    for (const auto& [a, b] : pairs) row.push_back(points[i].d(a, b));
    row.insert(row.end(), {fid[i], c_nom, c_bell});
    table.rows.push_back(std::move(row));
    if (i == 0) continue;
    sum_drop += 1.0 - c_nom;
    max_drop = std::max(max_drop, 1.0 - c_nom);
    sum_fdrop += fid[0] - fid[i];
    max_fdrop = std::max(max_fdrop, fid[0] - fid[i]);
    min_fid = std::min(min_fid, fid[i]);
  }
  const double n = n_corners > 0 ? static_cast<double>(n_corners) : 1.0;
  rep.set("n_corners", static_cast<double>(n_corners));
  rep.set("nominal_fidelity", fid[0]);
  rep.set("nominal_corr_bell", correlation(out[0], ideal_bell));
  rep.set("mean_corr_drop", sum_drop / n);
  rep.set("max_corr_drop", max_drop);
  rep.set("mean_fidelity_drop", sum_fdrop / n);
  rep.set("max_fidelity_drop", max_fdrop);
  rep.set("min_fidelity", min_fid);
  rep.tables.push_back(std::move(table));
  return rep;
}

DurationScan duration_scan(const SynthesisTarget& target, const GrapeConfig& cfg, const Ensemble& ens,
                           const std::vector<double>& durations_s, double threshold) {
  if (durations_s.empty()) throw InvalidInput("duration_scan: no durations");
  if (!std::is_sorted(durations_s.begin(), durations_s.end()))
    throw InvalidInput("duration_scan: durations must be ascending");
  DurationScan scan;
  scan.durations_s = durations_s;
  scan.fidelity.assign(durations_s.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 0; k < durations_s.size(); ++k) {
    GrapeConfig c = cfg;
    c.n_steps = static_cast<std::size_t>(std::llround(durations_s[k] / cfg.dt));
    if (c.n_steps == 0) throw InvalidInput("duration_scan: duration shorter than one step");
    c.target_fidelity = std::max(cfg.target_fidelity, threshold);
    double f = 0.0;
    try {
      f = synthesize(target, c, ens).fidelity();
    } catch (const InvalidInput&) {
      f = ensemble_value(Pulse::zeros(c.n_steps, c.dt), ensemble_for(target, ens), target.objective);
    }
    scan.fidelity[k] = f;
    if (f >= threshold) {
      scan.minimal_s = durations_s[k];
      break;
    }
  }
  return scan;
}

ExperimentReport run_logical_vs_spin(const Pulse& logical_pulse, const Pulse& spin_pulse, const Ensemble& ens,
                                     const std::vector<double>& sigma_phi) {
  ens.validate();
  if (sigma_phi.empty()) throw InvalidInput("run_logical_vs_spin: empty sigma_phi list");
  for (double s : sigma_phi)
    if (!(s >= 0.0) || !std::isfinite(s)) throw InvalidInput("run_logical_vs_spin: sigma_phi must be >= 0");
  const EnsembleMember& member = ens.members.front();
  if (member.system.n_spins() != 4) throw InvalidInput("run_logical_vs_spin: four-spin ensemble required");
  const EnsembleMember spin_member = ens.restricted({0, 1}).members.front();

  const Mat u_l = pulse_propagator(logical_pulse, member);
  const Vec bell_l = embed_logical_state(logical_bell_state());
  const Mat rho_l = u_l * pure(logical_zero()) * u_l.adjoint();

  const Mat u_s = pulse_propagator(spin_pulse, spin_member);
  Vec plus0 = Vec::Zero(4);
  plus0(0) = plus0(2) = 1.0 / std::sqrt(2.0);
  Vec bell_s = Vec::Zero(4);
  bell_s(0) = bell_s(3) = 1.0 / std::sqrt(2.0);
  const Mat rho_s = u_s * pure(plus0) * u_s.adjoint();

  std::vector<double> fl(sigma_phi.size()), fs(sigma_phi.size());
  parallel_for(sigma_phi.size(), [&](std::size_t i) {
    fl[i] = (bell_l.adjoint() * collective_dephasing(rho_l, sigma_phi[i]) * bell_l)(0, 0).real();
    fs[i] = (bell_s.adjoint() * collective_dephasing(rho_s, sigma_phi[i]) * bell_s)(0, 0).real();
  });

  ExperimentReport rep;
  rep.name = "logical_vs_spin";
  rep.set("logical_duration_s", logical_pulse.duration());
  rep.set("spin_duration_s", spin_pulse.duration());
  rep.set("logical_gate_fidelity", logical_gate_fidelity(u_l, u_ent_logical().block));
  rep.set("spin_gate_fidelity", std::norm((cnot().adjoint() * u_s).trace()) / 16.0);
  ReportTable table{"dephasing", {"sigma_phi", "logical_bell_fidelity", "spin_bell_fidelity"}, {}};
  double lo = fl[0], hi = fl[0];
  bool decreasing = true;
  for (std::size_t i = 0; i < sigma_phi.size(); ++i) {
    table.rows.push_back({sigma_phi[i], fl[i], fs[i]});
    lo = std::min(lo, fl[i]);
    hi = std::max(hi, fl[i]);
    if (i > 0 && sigma_phi[i] > sigma_phi[i - 1] && !(fs[i] < fs[i - 1])) decreasing = false;
  }
  rep.set("logical_variation", hi - lo);
  rep.set("spin_strictly_decreasing", decreasing ? 1.0 : 0.0);
  rep.tables.push_back(std::move(table));
  return rep;
}

}  // namespace dfs
