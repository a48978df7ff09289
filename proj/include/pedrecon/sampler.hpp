#pragma once
// Posterior computation for one case by Metropolis-within-Gibbs over the
// ten scalar unknowns (x, v, tp, ts, f, b0, b1, a1, a2, b_inj).
//
// Bounded coordinates move by random-walk proposals on a logit transform of
// their range (with the Jacobian folded into the transformed target); the
// normal-prior parameters move on the natural scale. Proposal scales adapt
// during burn-in only, so the post-burn-in kernel leaves the target
// invariant. Pinned coordinates (degenerate range / zero sd) are skipped.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pedrecon/model.hpp"
#include "pedrecon/priors.hpp"

namespace pedrecon {

struct McmcConfig {
  int n_chains = 3;
  long burn_in = 5000;
  long iterations = 50000;
  long thin = 10;
  std::uint64_t seed = 0;
  long adapt_window = 50;  // sweeps per proposal-scale adjustment, burn-in only

  // Throws std::invalid_argument unless all counts are positive and thin
  // divides iterations evenly.
  void validate() const;
};

// Scalar quantities a posterior carries: the ten sampled coordinates plus
// the derived impact speed.
enum class Quantity { kX, kV, kTp, kTs, kF, kB0, kB1, kA1, kA2, kBInj, kVi };

inline constexpr std::array<Quantity, 11> kAllQuantities = {
    Quantity::kX,  Quantity::kV,  Quantity::kTp, Quantity::kTs,   Quantity::kF, Quantity::kB0,
    Quantity::kB1, Quantity::kA1, Quantity::kA2, Quantity::kBInj, Quantity::kVi};

const char* to_string(Quantity q);

inline constexpr int kNumCoords = 10;  // sampled coordinates (vi is derived)

struct ChainDraws {
  std::vector<double> x, v, tp, ts, f;
  std::vector<double> b0, b1, a1, a2, b_inj;
  std::vector<double> vi;

  // Post-burn-in acceptance rate per coordinate; NaN for pinned coordinates.
  std::array<double, kNumCoords> acceptance_rate{};

  std::size_t size() const { return v.size(); }
  const std::vector<double>& column(Quantity q) const;
};

struct Posterior {
  std::string case_id;
  McmcConfig config;
  std::vector<ChainDraws> chains;

  std::size_t total_draws() const;
  // All chains' draws of one quantity, concatenated in chain order.
  std::vector<double> pooled(Quantity q) const;
};

// One chain from an explicit seed. Initializes from prior draws until the
// posterior density is finite (throws InitializationFailure after 1e6
// attempts), runs burn_in adaptive sweeps, then `iterations` sweeps keeping
// every thin-th state.
ChainDraws run_chain(const Case& c, const PriorSpec& spec, const McmcConfig& cfg,
                     std::uint64_t chain_seed);

// cfg.n_chains independent chains with seeds derived from cfg.seed. The
// result is a pure function of (case, spec, cfg) regardless of how chains
// are scheduled.
Posterior run_inference(const Case& c, const PriorSpec& spec, const McmcConfig& cfg);

// Potential scale reduction factor sqrt(((n-1)/n * W + B/n) / W) with W the
// mean within-chain variance and B the between-chain variance of chain
// means scaled by n. Requires >= 2 chains and >= 10 draws per chain; throws
// DegenerateVariance when W == 0.
double psrf(const Posterior& post, Quantity q);

struct Summary {
  double mean;
  double sd;
  double q025;
  double q500;
  double q975;
};

// Pooled moments and order-statistic quantiles (linear interpolation).
Summary summarize(const Posterior& post, Quantity q);
Summary summarize_draws(std::vector<double> draws);

}  // namespace pedrecon
