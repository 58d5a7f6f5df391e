#include <CLI11.hpp>

#include <iostream>

#include "dfs/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pulse synthesis and simulation for encoded two-qubit NMR experiments"};
  app.require_subcommand(1);

  dfs::SynthesizeArgs syn;
  std::uint64_t syn_seed = 0;
  std::string syn_init;
  auto* s = app.add_subcommand("synthesize", "optimize a control pulse for one target");
  s->add_option("--config", syn.config_path, "configuration file (JSON)")->required();
  s->add_option("--target", syn.target, "u_prep, u_ent, readout_01..readout_14 or spin_cnot")->required();
  s->add_option("--out", syn.out_path, "pulse file to write")->required();
  auto* s_seed = s->add_option("--seed", syn_seed, "override the configured seeds");
  auto* s_init = s->add_option("--pulse", syn_init, "initial pulse file");

  dfs::RunArgs run;
  std::uint64_t run_seed = 0;
  std::string run_mode;
  auto* r = app.add_subcommand("run", "run an experiment and write a report directory");
  r->add_option("experiment", run.experiment, "bell_pipeline, robustness_sweep or logical_vs_spin")->required();
  r->add_option("--config", run.config_path, "configuration file (JSON)")->required();
  r->add_option("--pulse", run.pulse_paths, "pulse file (repeatable; role taken from its header)");
  r->add_option("--out", run.out_dir, "report directory")->required();
  auto* r_mode = r->add_option("--mode", run_mode, "readout mode")->check(CLI::IsMember({"ideal", "synthesized"}));
  auto* r_seed = r->add_option("--seed", run_seed, "override the configured seeds");

  std::string val_config;
  auto* v = app.add_subcommand("validate", "check a configuration file");
  v->add_option("--config", val_config, "configuration file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dfs::kExitInvalid;
  }

  if (s->parsed()) {
    if (*s_seed) syn.seed = syn_seed;
    if (*s_init) syn.init_pulse_path = syn_init;
    return dfs::cmd_synthesize(syn, std::cerr);
  }
  if (r->parsed()) {
    if (*r_seed) run.seed = run_seed;
    if (*r_mode) run.mode = run_mode;
    return dfs::cmd_run(run, std::cout);
  }
  return dfs::cmd_validate(val_config, std::cout);
}
