#include "pedrecon/counterfactual.hpp"

#include <cmath>

#include "pedrecon/errors.hpp"
#include "pedrecon/math_util.hpp"

namespace pedrecon {

double counterfactual_impact_speed(KinematicState sample, double v_star_kmh) {
  sample.v = v_star_kmh / kMsToKmh;
  return impact_speed(sample);
}

double probability_of_necessity(const Posterior& post, double v_star_kmh) {
  std::size_t stopped = 0;
  std::size_t total = 0;
  for (const auto& chain : post.chains) {
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const KinematicState s{chain.x[i], chain.v[i], chain.tp[i], chain.ts[i], chain.f[i]};
      if (counterfactual_impact_speed(s, v_star_kmh) == 0.0) ++stopped;
      ++total;
    }
  }
  if (total == 0) throw std::invalid_argument("probability_of_necessity: empty posterior");
  return static_cast<double>(stopped) / static_cast<double>(total);
}

double prob_speeding(const Posterior& post, double limit_kmh) {
  const double limit_ms = limit_kmh / kMsToKmh;
  std::size_t above = 0;
  std::size_t total = 0;
  for (const auto& chain : post.chains) {
    for (double v : chain.v) {
      if (v > limit_ms) ++above;
      ++total;
    }
  }
  if (total == 0) throw std::invalid_argument("prob_speeding: empty posterior");
  return static_cast<double>(above) / static_cast<double>(total);
}

ReductionEstimate accident_reduction(const std::vector<CounterfactualReport>& reports) {
  ReductionEstimate est;
  for (const auto& r : reports) {
    est.sum_pn += r.pn;
    ++est.n_cases;
  }
  return est;
}

Method1Result deterministic_method1(const Case& c, const PriorSpec& spec, double limit_kmh) {
  if (!c.s1_m) {
    throw NoSkidEvidence("method1: case '" + c.id + "' has no skidmark measurement");
  }
  const double f = spec.f_range.midpoint();
  const double tp = spec.tp_range.midpoint();
  const double ts = spec.ts_range.midpoint();
  const double fg = f * kGravity;

  // Positive root of s1(v) = s1_m, i.e. v^2/(2fg) - ts*v + (fg*ts^2/2 - s1_m) = 0.
  const double disc = sqr(ts) - 2.0 / fg * (fg * sqr(ts) / 2.0 - *c.s1_m);
  if (disc < 0.0) {
    throw NoRealRoot("method1: skid length " + std::to_string(*c.s1_m) +
                     " has no real speed solution at midpoint inputs");
  }
  const double v_est = fg * (ts + std::sqrt(disc));

  Method1Result result;
  result.v_kmh = v_est * kMsToKmh;

  // Recover the reaction distance x from the deterministic trajectory, when
  // the evidence allows, then evaluate the limit-bound twin.
  std::optional<double> x_est;
  if (c.s2_m) {
    // Impact sits s2 short of the end of the stopping path.
    x_est = std::max(0.0, v_est * tp + sqr(v_est) / (2.0 * fg) - *c.s2_m);
  } else if (c.throw_m) {
    // Invert the throw regression at its median, at the prior-mean
    // coefficients, for the factual impact speed.
    const double vi_kmh = std::exp((std::log(*c.throw_m) - spec.b0.mean) / spec.b1.mean);
    const double vi = vi_kmh / kMsToKmh;
    x_est = std::max(0.0, v_est * tp + (sqr(v_est) - sqr(vi)) / (2.0 * fg));
  }
  if (x_est) {
    const KinematicState twin{*x_est, v_est, tp, ts, f};
    result.vi_star_kmh = counterfactual_impact_speed(twin, limit_kmh) * kMsToKmh;
  }
  return result;
}

CounterfactualReport make_report(const Case& c, const Posterior& post, const PriorSpec& spec,
                                 double v_star_kmh) {
  CounterfactualReport rep;
  rep.case_id = c.id;
  rep.p_speeding = prob_speeding(post, v_star_kmh);
  rep.pn = probability_of_necessity(post, v_star_kmh);

  Summary v = summarize(post, Quantity::kV);
  Summary vi = summarize(post, Quantity::kVi);
  const auto to_kmh = [](Summary s) {
    return Summary{s.mean * kMsToKmh, s.sd * kMsToKmh, s.q025 * kMsToKmh, s.q500 * kMsToKmh,
                   s.q975 * kMsToKmh};
  };
  rep.v_kmh = to_kmh(v);
  rep.vi_kmh = to_kmh(vi);

  if (c.s1_m) {
    const Method1Result m1 = deterministic_method1(c, spec, v_star_kmh);
    rep.method1_v_kmh = m1.v_kmh;
    rep.method1_vistar_kmh = m1.vi_star_kmh;
  }
  return rep;
}

}  // namespace pedrecon
