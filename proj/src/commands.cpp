#include "dfs/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "dfs/config.hpp"
#include "dfs/experiments.hpp"
#include "dfs/io.hpp"
#include "dfs/logical.hpp"
#include "dfs/spin_model.hpp"

namespace dfs {

namespace {

template <class Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const IoError& e) {
    log << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidInput& e) {
    log << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

Config load_with_seed(const std::string& path, const std::optional<std::uint64_t>& seed) {
  Config cfg = load_config(path);
  if (seed) {
    cfg.grape.seed = *seed;
    cfg.ensemble.seed = *seed;
  }
  return cfg;
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

void write_sidecar(const std::string& out_path, const std::string& target, const std::string& hash,
                   const OptimizeResult& r, double threshold, double nominal_fidelity,
                   std::optional<double> nominal_leakage, double seconds) {
  std::ofstream rep(out_path + ".report.txt");
  if (!rep) throw IoError("cannot write '" + out_path + ".report.txt'");
  rep.precision(17);
  rep << "target = " << target << "\n";
  rep << "config_hash = " << hash << "\n";
  rep << "ensemble_fidelity = " << r.fidelity() << "\n";
  rep << "nominal_fidelity = " << nominal_fidelity << "\n";
  if (nominal_leakage) rep << "nominal_leakage = " << *nominal_leakage << "\n";
  rep << "threshold = " << threshold << "\n";
  rep << "passed = " << (r.fidelity() >= threshold ? "yes" : "no") << "\n";
  rep << "iterations = " << r.trace.iterations() << "\n";
  rep << "termination = " << to_string(r.trace.reason) << "\n";
  rep << "duration_s = " << r.pulse.duration() << "\n";
  rep << "wall_time_s = " << seconds << "\n";

  std::ofstream trace(out_path + ".trace.csv");
  if (!trace) throw IoError("cannot write '" + out_path + ".trace.csv'");
  trace.precision(17);
  trace << "iteration,fidelity,gradient_max,step_hz\n";
  for (std::size_t i = 0; i < r.trace.fidelity.size(); ++i)
    trace << i << "," << r.trace.fidelity[i] << "," << r.trace.gradient_norm[i] << "," << r.trace.step[i] << "\n";
}

// Pulses keyed by the target recorded in their headers.
std::map<std::string, PulseFile> load_pulses(const std::vector<std::string>& paths) {
  std::map<std::string, PulseFile> out;
  for (const auto& p : paths) {
    PulseFile f = read_pulse_file(p);
    if (out.count(f.target)) throw InvalidInput("two pulse files for target '" + f.target + "'");
    out.emplace(f.target, std::move(f));
  }
  return out;
}

void require(const std::map<std::string, PulseFile>& pulses, const std::vector<std::string>& names,
             const std::string& experiment) {
  std::string missing;
  for (const auto& n : names)
    if (!pulses.count(n)) missing += (missing.empty() ? "" : ", ") + n;
  if (!missing.empty()) throw InvalidInput(experiment + " needs pulse files for: " + missing);
}

void append_sweep(ExperimentReport& into, const ExperimentReport& wide) {
  for (const auto& [k, v] : wide.scalars) into.set("wide_" + k, v);
  ReportTable t = wide.table("sweep");
  t.name = "sweep_wide";
  into.tables.push_back(std::move(t));
}

}  // namespace

int cmd_validate(const std::string& config_path, std::ostream& log) {
  return guarded(log, [&] {
    const Config cfg = load_config(config_path);
    const std::size_t n = cfg.system.n_spins();
    const Mat h = internal_hamiltonian(cfg.system);
    const Mat fz = total_fz(n);
    const double h_norm = Eigen::SelfAdjointEigenSolver<Mat>(h, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
    const Ensemble ens = cfg.build_ensemble();
    log << "config " << config_path << ": ok\n";
    log << "  config_hash          " << config_hash(cfg) << "\n";
    log << "  spins                " << n << "\n";
    log << "  |H_int| (rad/s)      " << fmt(h_norm) << "\n";
    log << "  hermiticity error    " << fmt(hermiticity_error(h)) << "\n";
    log << "  [H_int, F_z] max     " << fmt(max_abs(commutator(h, fz))) << "\n";
    log << "  ensemble members     " << ens.members.size() << "\n";
    log << "  pulse grid           " << cfg.grape.n_steps << " x " << fmt(cfg.grape.dt) << " s\n";
    return kExitOk;
  });
}

int cmd_synthesize(const SynthesizeArgs& args, std::ostream& log) {
  return guarded(log, [&] {
    const Config cfg = load_with_seed(args.config_path, args.seed);
    const SynthesisTarget target = make_target(args.target);
    const Ensemble ens = cfg.build_ensemble();
    const std::string hash = config_hash(cfg);
    log << "synthesizing " << target.name << " (" << ens.members.size() << " members, " << cfg.grape.n_steps
        << " x " << cfg.grape.dt << " s, config " << hash << ")\n";

    const auto t0 = std::chrono::steady_clock::now();
    OptimizeResult r;
    if (args.init_pulse_path) {
      PulseFile init = read_pulse_file(*args.init_pulse_path);
      r = synthesize(target, cfg.grape, ens, init.pulse);
    } else {
      r = synthesize(target, cfg.grape, ens);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const Ensemble nominal = Ensemble::single(ens.members.front().system, ens.members.front().eps);
    const double nominal_f = target_fidelity(target, r.pulse, nominal);
    std::optional<double> nominal_leak;
    if (target.spins.size() == 4) nominal_leak = leakage(pulse_propagator(r.pulse, nominal.members.front()));

    write_pulse_file(args.out_path, {r.pulse, cfg.grape.amp_max, target.name, hash});
    const double threshold = cfg.threshold_for(target.name);
    write_sidecar(args.out_path, target.name, hash, r, threshold, nominal_f, nominal_leak, seconds);

    log << "  ensemble fidelity " << fmt(r.fidelity(), 8) << " after " << r.trace.iterations() << " iterations ("
        << to_string(r.trace.reason) << ", " << fmt(seconds, 4) << " s)\n";
    log << "  wrote " << args.out_path << "\n";
    if (r.fidelity() < threshold) {
      log << "  below threshold " << threshold << "\n";
      return kExitBelowThreshold;
    }
    return kExitOk;
  });
}

int cmd_run(const RunArgs& args, std::ostream& log) {
  return guarded(log, [&] {
    Config cfg = load_with_seed(args.config_path, args.seed);
    if (args.mode) {
      cfg.experiment.mode = *args.mode;
      cfg.validate();
    }
    const auto pulses = load_pulses(args.pulse_paths);
    const Ensemble ens = cfg.build_ensemble();
    const std::string hash = config_hash(cfg);
    for (const auto& [name, f] : pulses)
      if (!f.config_hash.empty() && f.config_hash != hash)
        log << "warning: pulse " << name << " was synthesized under config " << f.config_hash << "\n";

    ExperimentReport rep;
    if (args.experiment == "bell_pipeline") {
      BellPipelineInputs in{ens.members.front(), std::nullopt, std::nullopt, ideal_readout_set()};
      if (cfg.experiment.mode == "synthesized") {
        std::vector<std::string> needed{"u_prep", "u_ent"};
        for (const auto& d : readout_designs()) needed.push_back(d.label);
        require(pulses, needed, args.experiment);
        std::vector<Mat> unitaries;
        for (const auto& d : readout_designs())
          unitaries.push_back(pulse_propagator(pulses.at(d.label).pulse, in.member));
        in.readouts = readout_set_from_unitaries(unitaries);
      }
      if (pulses.count("u_prep")) in.u_prep = pulses.at("u_prep").pulse;
      if (pulses.count("u_ent")) in.u_ent = pulses.at("u_ent").pulse;
      rep = run_bell_pipeline(in);
    } else if (args.experiment == "robustness_sweep") {
      require(pulses, {"u_ent"}, args.experiment);
      const Pulse& p = pulses.at("u_ent").pulse;
      rep = run_robustness_sweep(p, ens.members.front().system, cfg.experiment.sweep_half_width_hz);
      append_sweep(rep, run_robustness_sweep(p, ens.members.front().system, cfg.experiment.sweep_wide_half_width_hz));
    } else if (args.experiment == "logical_vs_spin") {
      require(pulses, {"u_ent", "spin_cnot"}, args.experiment);
      rep = run_logical_vs_spin(pulses.at("u_ent").pulse, pulses.at("spin_cnot").pulse, ens, cfg.experiment.sigma_phi);
      if (cfg.experiment.scan_durations) {
        GrapeConfig g = cfg.grape;
        g.max_iters = cfg.experiment.scan_max_iters;
        ReportTable t{"duration_scan", {"duration_s", "logical_fidelity", "spin_fidelity"}, {}};
        const auto& ds = cfg.experiment.duration_scan_s;
        const double thr = cfg.experiment.duration_threshold;
        const DurationScan l = duration_scan(make_target("u_ent"), g, ens, ds, thr);
        const DurationScan s = duration_scan(make_target("spin_cnot"), g, ens, ds, thr);
        for (std::size_t k = 0; k < ds.size(); ++k) t.rows.push_back({ds[k], l.fidelity[k], s.fidelity[k]});
        rep.tables.push_back(std::move(t));
        const double nan = std::nan("");
        rep.set("logical_minimal_duration_s", l.minimal_s.value_or(nan));
        rep.set("spin_minimal_duration_s", s.minimal_s.value_or(nan));
      }
    } else {
      throw InvalidInput("unknown experiment '" + args.experiment +
                         "' (expected bell_pipeline, robustness_sweep or logical_vs_spin)");
    }
    rep.config_hash = hash;
    rep.param("mode", cfg.experiment.mode);
    rep.param("ensemble_seed", std::to_string(cfg.ensemble.seed));
    for (const auto& p : args.pulse_paths) rep.param("pulse", p);
    write_report(args.out_dir, rep);

    log << rep.name << " (config " << hash << ")\n";
    for (const auto& [k, v] : rep.scalars) log << "  " << k << " = " << fmt(v, 8) << "\n";
    log << "  wrote " << args.out_dir << "\n";
    return kExitOk;
  });
}

}  // namespace dfs
