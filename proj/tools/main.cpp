#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  namespace cli = fairdiv::cli;
  CLI::App app{"Online fair division simulator and verifier"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run = app.add_subcommand("run", "Simulate one configured run; writes run.csv and summary.json");
  run->add_option("config", run_config, "INI configuration file")->required();

  cli::SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Repeat a run over parameter values and seeds; writes sweep.csv");
  sweep->add_option("config", sweep_args.config, "INI configuration file")->required();
  sweep->add_option("--param", sweep_args.param, "T, noise_sigma or policy.kind")->required();
  sweep->add_option("--values", sweep_args.values, "Comma-separated values")->delimiter(',');
  sweep->add_option("--seeds", sweep_args.seeds, "Seeds per value, counting up from the config seed");
  sweep->add_option("--workers", sweep_args.workers, "Worker threads (0 = all cores)");

  std::string suite;
  auto* verify = app.add_subcommand("verify", "Run a property suite and print a JSON report");
  verify->add_option("--suite", suite, "lp, lemmas, robust or lowerbound")->required();

  cli::LowerboundArgs lb_args;
  auto* lowerbound = app.add_subcommand("lowerbound", "Envy-freeness hard-instance statistic per seed");
  lowerbound->add_option("--T", lb_args.T, "Horizon (>= 8)")->required();
  lowerbound->add_option("--seeds", lb_args.seeds, "Number of seeds, starting at 0");
  lowerbound->add_option("--policy", lb_args.policy, "uar, oracle, etc or ucb_fair");
  lowerbound->add_option("--sigma", lb_args.noise_sigma, "Value noise standard deviation");
  lowerbound->add_option("--warmup-scale", lb_args.warmup_scale, "Warm-up length multiplier");
  lowerbound->add_option("--grid-cap", lb_args.grid_cap, "Grid points per round");
  lowerbound->add_option("--out", lb_args.out, "Write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kConfigError;
  }

  if (*run) return cli::cmd_run(run_config, std::cerr);
  if (*sweep) return cli::cmd_sweep(sweep_args, std::cerr);
  if (*verify) return cli::cmd_verify(suite, std::cout, std::cerr);
  if (*lowerbound) return cli::cmd_lowerbound(lb_args, std::cout, std::cerr);
  return cli::kConfigError;
}
