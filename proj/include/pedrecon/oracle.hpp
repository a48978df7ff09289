#pragma once
// Independent verification machinery: a forward case simulator and a
// brute-force grid-integration posterior used to cross-check the sampler.

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "pedrecon/model.hpp"
#include "pedrecon/priors.hpp"
#include "pedrecon/sampler.hpp"

namespace pedrecon {

// Midpoint-rule resolutions per background variable. Parameters are pinned
// at their prior means, keeping the quadrature five-dimensional; a
// degenerate prior range collapses its axis to a single cell.
struct GridConfig {
  int nx = 64;
  int nv = 64;
  int ntp = 12;
  int nts = 8;
  int nf = 16;

  long total_cells() const {
    return static_cast<long>(nx) * nv * ntp * nts * nf;
  }
  // Throws std::invalid_argument when a resolution is below 8 or the grid
  // exceeds 1e8 cells.
  void validate() const;
};

struct SyntheticTruth {
  KinematicState state;
  ThrowParams throw_params;
  InjuryParams injury_params;
  CollisionOutcome outcome;
};

// Forward pass of the structural model: draw state and parameters from the
// prior (redrawing until vi > 0 when require_collision), then sample every
// measurement the state can produce. Redraws states that can produce no
// measurement at all.
std::pair<SyntheticTruth, Case> simulate_case(std::mt19937_64& rng, const PriorSpec& spec,
                                              bool require_collision = true);

struct GridEstimates {
  double v_mean;      // posterior mean initial speed (m/s)
  double vi_mean;     // posterior mean impact speed (m/s)
  double pn;          // P[counterfactual vi = 0] at the given v*
  double p_speeding;  // P[v > limit]
};

// Riemann-midpoint quadrature of the unnormalized posterior over the grid,
// parameters pinned at prior means. Throws ZeroMassPosterior when every
// cell has zero likelihood.
GridEstimates grid_posterior(const Case& c, const PriorSpec& spec, const GridConfig& grid,
                             double v_star_kmh, double limit_kmh);

struct CalibrationReport {
  int n_cases = 0;
  int n_covered = 0;
  double coverage = 0.0;
  std::vector<std::uint8_t> covered;  // per simulated case, in index order
};

inline bool interval_covers(double lo, double hi, double truth) {
  return lo <= truth && truth <= hi;
}

// End-to-end pipeline check: simulate n collision cases from the prior, run
// the full MCMC on each, and report how often the central 95% interval for
// v contains the generating truth. Cases are independent; execution order
// cannot change the result.
CalibrationReport calibration_experiment(int n_cases, const PriorSpec& spec,
                                         const McmcConfig& cfg);

}  // namespace pedrecon
