// geosched: run, validate and oracle-check geo-distributed scheduling scenarios.

#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "geosched/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Carbon-, water- and cost-aware scheduling of LLM inference across sites"};
  app.require_subcommand(1);

  geosched::RunConfig run;
  std::string modes;
  std::uint64_t seed = 0;
  std::string scheduler, normalize_against;
  bool no_metrics = false, no_summary = false, no_normalized = false;
  auto* run_cmd = app.add_subcommand("run", "simulate a scenario and emit metrics");
  run_cmd->add_option("--scenario", run.scenario, "scenario JSON")->required();
  run_cmd->add_option("--out", run.out_dir, "output directory")->capture_default_str();
  auto* sched_opt = run_cmd->add_option("--scheduler", scheduler, "admm | queue-split | flow-greedy")
                        ->check(CLI::IsMember({"admm", "queue-split", "flow-greedy"}));
  auto* modes_opt = run_cmd->add_option(
      "--modes", modes, "comma-separated ADMM modes (opt-cost,opt-carbon,opt-water,opt-ttft,opt-balance)");
  auto* seed_opt = run_cmd->add_option("--seed", seed, "overrides the scenario seed");
  auto* norm_opt = run_cmd->add_option("--normalize-against", normalize_against,
                                       "run label used as the 1.0 reference");
  run_cmd->add_flag("--no-metrics", no_metrics, "skip metrics.csv");
  run_cmd->add_flag("--no-summary", no_summary, "skip summary.json");
  run_cmd->add_flag("--no-normalized", no_normalized, "skip normalized.csv");

  std::filesystem::path validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a scenario without running it");
  validate_cmd->add_option("--scenario", validate_path, "scenario JSON")->required();

  std::filesystem::path instance;
  geosched::AdmmParams admm;
  auto* oracle_cmd = app.add_subcommand("oracle", "compare ADMM with the exact solvers");
  oracle_cmd->add_option("--instance", instance, "instance JSON")->required();
  oracle_cmd->add_option("--rho", admm.rho)->capture_default_str();
  oracle_cmd->add_option("--max-iters", admm.max_iters)->capture_default_str();
  oracle_cmd->add_option("--eps-primal", admm.eps_primal)->capture_default_str();
  oracle_cmd->add_option("--eps-dual", admm.eps_dual)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << geosched::error_json("usage", e.what()) << '\n';
    return e.get_exit_code();
  }

  if (*run_cmd) {
    if (*sched_opt) run.scheduler = scheduler;
    if (*seed_opt) run.seed = seed;
    if (*norm_opt) run.normalize_against = normalize_against;
    if (*modes_opt) {
      std::stringstream ss(modes);
      for (std::string m; std::getline(ss, m, ',');) {
        if (!m.empty()) run.modes.push_back(m);
      }
    }
    run.emit_metrics = !no_metrics;
    run.emit_summary = !no_summary;
    run.emit_normalized = !no_normalized;
    return geosched::cmd_run(run, std::cout, std::cerr);
  }
  if (*validate_cmd) return geosched::cmd_validate(validate_path, std::cout, std::cerr);
  return geosched::cmd_oracle(instance, admm, std::cout, std::cerr);
}
