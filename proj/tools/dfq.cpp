// dfq: run the decoherence-free private comparison simulator from the shell.
#include <iostream>

#include <CLI11.hpp>

#include "dfq/commands.hpp"

int main(int argc, char** argv) {
  using namespace dfq::cli;

  CLI::App app{"Semi-quantum private comparison over decoherence-free states"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run the comparison protocol for a number of trials");
  run_cmd->add_option("--config", run.config_path, "JSON run configuration");
  run_cmd->add_option("--family", run.family, "dephasing | rotation");
  run_cmd->add_option("--n", run.n, "Number of participants");
  run_cmd->add_option("--l", run.l, "Secret length in bits");
  run_cmd->add_option("--delta", run.delta, "Oversampling fraction");
  run_cmd->add_option("--trials", run.trials, "Protocol runs");
  run_cmd->add_option("--seed", run.seed, "RNG seed (falls back to DFQ_SEED)");
  run_cmd->add_option("--out", run.out_dir, "Output directory");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("attack-sweep", "Monte Carlo detection vs closed form");
  sweep_cmd->add_option("--model", sweep.model,
                        "none | intercept-resend | measure-resend | entangle-identity | entangle-cnot");
  sweep_cmd->add_option("--family", sweep.family, "dephasing | rotation");
  sweep_cmd->add_option("--fake", sweep.fake, "Intercept-resend fake value (zero|one|plus|minus)");
  sweep_cmd->add_option("--basis", sweep.basis, "Measure-resend basis (z|x)");
  sweep_cmd->add_option("--m", sweep.m_values, "Attacked group counts")->delimiter(',');
  sweep_cmd->add_option("--trials", sweep.trials, "Trials per row");
  sweep_cmd->add_option("--seed", sweep.seed, "RNG seed (falls back to DFQ_SEED)");
  sweep_cmd->add_option("--out", sweep.out_dir, "Output directory");

  ReproOptions repro;
  auto* repro_cmd = app.add_subcommand("repro-figures", "Simulate the six hardware circuits");
  repro_cmd->add_option("--shots", repro.shots, "Shots per circuit");
  repro_cmd->add_option("--seed", repro.seed, "RNG seed (falls back to DFQ_SEED)");
  repro_cmd->add_option("--out", repro.out_dir, "Output directory");

  EfficiencyOptions eff;
  auto* eff_cmd = app.add_subcommand("efficiency", "Qubit efficiency accounting");
  eff_cmd->add_option("--n", eff.n, "Number of participants");
  eff_cmd->add_option("--l", eff.l, "Secret length in bits");
  eff_cmd->add_option("--trials", eff.runs, "Simulated runs for the measured counts");
  eff_cmd->add_option("--seed", eff.seed, "RNG seed (falls back to DFQ_SEED)");
  eff_cmd->add_option("--out", eff.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*run_cmd) return cmd_run(run, std::cout, std::cerr);
  if (*sweep_cmd) return cmd_attack_sweep(sweep, std::cout, std::cerr);
  if (*repro_cmd) return cmd_repro_figures(repro, std::cout, std::cerr);
  return cmd_efficiency(eff, std::cout, std::cerr);
}
