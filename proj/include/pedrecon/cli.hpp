#pragma once
// Case ingestion, batch orchestration and report emission.
//
// Case files are JSON with one top-level "cases" list; fixture files add a
// "truths" sidecar carrying the generating state of each simulated case.
// Reports are CSV with a fixed column set; speeds in km/h, lengths in
// meters.

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pedrecon/model.hpp"
#include "pedrecon/oracle.hpp"
#include "pedrecon/priors.hpp"
#include "pedrecon/sampler.hpp"

namespace pedrecon::cli {

// Parses and validates a case file. Throws ParseError (malformed JSON or
// unexpected shape, with position context) or ValidationError (a case
// violating its invariants, named by id).
std::vector<Case> load_cases(const std::filesystem::path& path);

struct CaseFixture {
  Case kase;
  std::optional<SyntheticTruth> truth;
};

// Same format as load_cases plus the optional "truths" sidecar.
std::vector<CaseFixture> load_fixtures(const std::filesystem::path& path);

void write_fixtures(const std::filesystem::path& path,
                    const std::vector<std::pair<SyntheticTruth, Case>>& fixtures);

// Applies a partial JSON override file on top of `base`. Unknown keys are
// rejected; the merged spec is validated.
PriorSpec load_priors_overrides(const std::filesystem::path& path,
                                PriorSpec base = default_priors());

enum class RunMode { kMcmc, kGrid, kSimulate, kMethod1, kDiagnose };

struct RunConfig {
  std::filesystem::path cases_path;
  std::filesystem::path out_dir = ".";
  RunMode mode = RunMode::kMcmc;
  McmcConfig mcmc;
  GridConfig grid;
  PriorSpec priors = default_priors();
  double limit_override_kmh = 0.0;  // 0 means: use each case's posted limit
  int n_simulate = 8;
  bool require_collision = true;
};

// Per-case posterior reconstruction (MCMC or grid oracle) plus the
// counterfactual report; writes <out>/report.csv with one row per case in
// input order and a TOTAL row carrying the summed probability of
// necessity. A case whose max PSRF exceeds 1.1 is flagged "nonconverged";
// a case that fails keeps its row with a failed:<reason> flag. Returns 0,
// or 1 when any case failed.
int cmd_reconstruct(const RunConfig& rc);

// Writes <out>/simulated_cases.json with n synthetic (truth, case) pairs.
int cmd_simulate(const RunConfig& rc);

// Writes <out>/method1.csv with the deterministic midpoint estimates.
int cmd_method1(const RunConfig& rc);

// Writes <out>/diagnostics.csv with per-quantity posterior summaries,
// convergence statistics and acceptance rates.
int cmd_diagnose(const RunConfig& rc);

}  // namespace pedrecon::cli
