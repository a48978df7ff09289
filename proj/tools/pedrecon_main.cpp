// pedrecon: Bayesian reconstruction of vehicle/pedestrian collisions from
// scene evidence, with counterfactual speed-limit analysis.
//
// Verbs:
//   reconstruct  posterior per case (MCMC, or grid quadrature with --grid)
//                plus probability-of-necessity report
//   simulate     generate synthetic (truth, case) fixtures
//   method1      deterministic midpoint reconstruction
//   diagnose     per-quantity posterior summaries and convergence checks
//
// Exit codes: 0 success, 1 any case failed, 2 configuration or parse error.

#include <iostream>

#include <CLI11.hpp>

#include "pedrecon/cli.hpp"
#include "pedrecon/errors.hpp"

namespace {

using pedrecon::cli::RunConfig;
using pedrecon::cli::RunMode;

void add_common_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--out", rc.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", rc.mcmc.seed, "Master random seed")->capture_default_str();
  cmd->add_option("--limit-kmh", rc.limit_override_kmh,
                  "Override the counterfactual speed limit (default: per-case limit)");
}

void add_mcmc_options(CLI::App* cmd, RunConfig& rc) {
  cmd->add_option("--chains", rc.mcmc.n_chains, "Number of chains")->capture_default_str();
  cmd->add_option("--iters", rc.mcmc.iterations, "Post-burn-in iterations per chain")
      ->capture_default_str();
  cmd->add_option("--burnin", rc.mcmc.burn_in, "Burn-in iterations per chain")
      ->capture_default_str();
  cmd->add_option("--thin", rc.mcmc.thin, "Keep every thin-th iteration")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian vehicle/pedestrian collision reconstruction"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string priors_path;

  auto* reconstruct = app.add_subcommand(
      "reconstruct", "Posterior reconstruction and counterfactual report for a case batch");
  reconstruct->add_option("--cases", rc.cases_path, "Case file (JSON)")->required();
  add_common_options(reconstruct, rc);
  add_mcmc_options(reconstruct, rc);
  bool use_grid = false;
  reconstruct->add_flag("--grid", use_grid, "Use grid quadrature instead of MCMC");
  reconstruct->add_option("--priors", priors_path, "Priors override file (JSON)");

  auto* simulate = app.add_subcommand("simulate", "Generate synthetic case fixtures");
  add_common_options(simulate, rc);
  simulate->add_option("--n", rc.n_simulate, "Number of cases")->capture_default_str();
  bool allow_no_collision = false;
  simulate->add_flag("--allow-no-collision", allow_no_collision,
                     "Keep cases whose vehicle stopped short");
  simulate->add_option("--priors", priors_path, "Priors override file (JSON)");

  auto* method1 = app.add_subcommand("method1", "Deterministic midpoint reconstruction");
  method1->add_option("--cases", rc.cases_path, "Case file (JSON)")->required();
  add_common_options(method1, rc);
  method1->add_option("--priors", priors_path, "Priors override file (JSON)");

  auto* diagnose = app.add_subcommand("diagnose", "Posterior summaries and convergence checks");
  diagnose->add_option("--cases", rc.cases_path, "Case file (JSON)")->required();
  add_common_options(diagnose, rc);
  add_mcmc_options(diagnose, rc);
  diagnose->add_option("--priors", priors_path, "Priors override file (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (!priors_path.empty()) {
      rc.priors = pedrecon::cli::load_priors_overrides(priors_path);
    }
    if (reconstruct->parsed()) {
      rc.mode = use_grid ? RunMode::kGrid : RunMode::kMcmc;
      return pedrecon::cli::cmd_reconstruct(rc);
    }
    if (simulate->parsed()) {
      rc.mode = RunMode::kSimulate;
      rc.require_collision = !allow_no_collision;
      return pedrecon::cli::cmd_simulate(rc);
    }
    if (method1->parsed()) {
      rc.mode = RunMode::kMethod1;
      return pedrecon::cli::cmd_method1(rc);
    }
    rc.mode = RunMode::kDiagnose;
    return pedrecon::cli::cmd_diagnose(rc);
  } catch (const pedrecon::CaseFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
