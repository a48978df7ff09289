#pragma once
// Counterfactual queries against a posterior: what would the impact speed
// have been had the driver held the speed limit, with every other
// background variable kept at its sampled value? The per-case probability
// of necessity is the posterior fraction of draws in which the limit-bound
// twin stops short; summing it over cases gives the expected number of
// accidents that strict limit adherence would have prevented.

#include <optional>
#include <string>
#include <vector>

#include "pedrecon/model.hpp"
#include "pedrecon/priors.hpp"
#include "pedrecon/sampler.hpp"

namespace pedrecon {

struct CounterfactualReport {
  std::string case_id;
  double p_speeding = 0.0;  // posterior P[v > limit]
  double pn = 0.0;          // probability of necessity, P[counterfactual vi = 0]
  Summary v_kmh{};          // posterior summary of the initial speed (km/h)
  Summary vi_kmh{};         // posterior summary of the impact speed (km/h)
  std::optional<double> method1_v_kmh;
  std::optional<double> method1_vistar_kmh;
};

struct ReductionEstimate {
  double sum_pn = 0.0;
  std::size_t n_cases = 0;
};

// Impact speed of the twin scenario: v replaced by the limit, (x, tp, ts, f)
// shared with the factual draw.
double counterfactual_impact_speed(KinematicState sample, double v_star_kmh);

// Fraction of pooled retained draws whose twin stops short (vi* exactly 0).
double probability_of_necessity(const Posterior& post, double v_star_kmh);

// Fraction of pooled draws with v strictly above the limit.
double prob_speeding(const Posterior& post, double limit_kmh);

// Sum of per-case probabilities of necessity, accumulated in input order.
ReductionEstimate accident_reduction(const std::vector<CounterfactualReport>& reports);

struct Method1Result {
  double v_kmh;                        // initial speed from the skid inversion
  std::optional<double> vi_star_kmh;   // twin impact speed; empty when x is
                                       // not recoverable from the evidence
};

// Deterministic reconstruction with f, tp, ts held at the midpoints of
// their prior ranges: inverts the skid equation at s1_m for the initial
// speed, recovers x from s2_m (or from the throw regression inverted at its
// median) and evaluates the twin impact speed at the limit. Throws
// NoSkidEvidence without s1_m and NoRealRoot when the inversion has no
// real solution.
Method1Result deterministic_method1(const Case& c, const PriorSpec& spec, double limit_kmh);

// Assembles the per-case report from a posterior (method-1 fields filled
// when the evidence supports them).
CounterfactualReport make_report(const Case& c, const Posterior& post, const PriorSpec& spec,
                                 double v_star_kmh);

}  // namespace pedrecon
