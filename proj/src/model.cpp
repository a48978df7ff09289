#include "pedrecon/model.hpp"

#include <cmath>
#include <stdexcept>

#include "pedrecon/math_util.hpp"

namespace pedrecon {

const char* to_string(Severity s) {
  switch (s) {
    case Severity::kSlight: return "slight";
    case Severity::kSerious: return "serious";
    default: return "fatal";
  }
}

std::optional<Severity> severity_from_string(std::string_view name) {
  if (name == "slight") return Severity::kSlight;
  if (name == "serious") return Severity::kSerious;
  if (name == "fatal") return Severity::kFatal;
  return std::nullopt;
}

double impact_speed(const KinematicState& s) {
  const double reaction_dist = s.v * s.tp;
  if (s.x < reaction_dist) return s.v;
  const double stop_dist = reaction_dist + sqr(s.v) / (2.0 * s.f * kGravity);
  if (s.x >= stop_dist) return 0.0;
  const double vi2 = sqr(s.v) - 2.0 * s.f * kGravity * (s.x - reaction_dist);
  return std::sqrt(std::max(vi2, 0.0));
}

double theoretical_skid_s1(const KinematicState& s) {
  const double braking_dist = sqr(s.v) / (2.0 * s.f * kGravity);
  const double transition_dist = s.v * s.ts - s.f * kGravity * sqr(s.ts) / 2.0;
  return braking_dist - transition_dist;
}

double theoretical_skid_s2(const KinematicState& s) {
  const double vi = impact_speed(s);
  if (vi <= 0.0) return 0.0;
  // Distance covered before the tires start marking the pavement.
  const double skid_start = s.v * s.tp + s.v * s.ts - s.f * kGravity * sqr(s.ts) / 2.0;
  if (s.x < skid_start) return 0.0;
  return sqr(vi) / (2.0 * s.f * kGravity);
}

CollisionOutcome collision_outcome(const KinematicState& s) {
  return CollisionOutcome{impact_speed(s), theoretical_skid_s1(s), theoretical_skid_s2(s)};
}

SeverityProbs severity_probs(double vi_kmh, const InjuryParams& p) {
  if (!(p.a1 < p.a2)) {
    throw std::invalid_argument("severity_probs: thresholds must satisfy a1 < a2");
  }
  const double slight = logistic(p.a1 - p.b_inj * vi_kmh);
  const double slight_or_serious = logistic(p.a2 - p.b_inj * vi_kmh);
  // fatal via L(-z) = 1 - L(z), exact complement.
  const double fatal = logistic(p.b_inj * vi_kmh - p.a2);
  return SeverityProbs{slight, slight_or_serious - slight, fatal};
}

double case_log_likelihood(const KinematicState& s, const ThrowParams& throw_params,
                           const InjuryParams& injury_params, const Case& c,
                           double sigma2_s) {
  double ll = 0.0;

  if (c.s1_m) {
    const double s1_th = theoretical_skid_s1(s);
    if (s1_th <= 0.0) return kNegInf;
    ll += lognormal_logpdf(*c.s1_m, std::log(s1_th), sigma2_s);
  }
  if (c.s2_m) {
    const double s2_th = theoretical_skid_s2(s);
    if (s2_th <= 0.0) return kNegInf;
    ll += lognormal_logpdf(*c.s2_m, std::log(s2_th), sigma2_s);
  }

  if (c.throw_m || c.severity) {
    const double vi = impact_speed(s);
    if (vi <= 0.0) return kNegInf;  // no collision cannot throw or injure
    const double vi_kmh = vi * kMsToKmh;
    if (c.throw_m) {
      const double log_mean = throw_params.b0 + throw_params.b1 * std::log(vi_kmh);
      ll += lognormal_logpdf(*c.throw_m, log_mean, throw_params.sigma2_d);
    }
    if (c.severity) {
      const double p = severity_probs(vi_kmh, injury_params).prob(*c.severity);
      if (p <= 0.0) return kNegInf;
      ll += std::log(p);
    }
  }

  return ll;
}

}  // namespace pedrecon
