#include "pedrecon/priors.hpp"

#include <cmath>
#include <stdexcept>

#include "pedrecon/math_util.hpp"

namespace pedrecon {
namespace {

void check_interval(const Interval& r, const char* name) {
  if (!(r.lo <= r.hi) || !std::isfinite(r.lo) || !std::isfinite(r.hi)) {
    throw std::invalid_argument(std::string("PriorSpec: empty or non-finite range for ") + name);
  }
}

void check_normal(const NormalSpec& n, const char* name) {
  if (!(n.sd >= 0.0) || !std::isfinite(n.mean) || !std::isfinite(n.sd)) {
    throw std::invalid_argument(std::string("PriorSpec: invalid normal for ") + name);
  }
}

// Uniform log density on [lo, hi]; a degenerate interval is a point mass.
double uniform_logpdf(double v, const Interval& r) {
  if (!r.contains(v)) return kNegInf;
  return r.degenerate() ? 0.0 : -std::log(r.width());
}

double draw_uniform(std::mt19937_64& rng, const Interval& r) {
  if (r.degenerate()) return r.lo;
  return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
}

double draw_normal(std::mt19937_64& rng, const NormalSpec& n) {
  if (n.sd == 0.0) return n.mean;
  return std::normal_distribution<double>(n.mean, n.sd)(rng);
}

}  // namespace

void PriorSpec::validate() const {
  check_interval(x_range, "x");
  check_interval(v_range, "v");
  check_interval(tp_range, "tp");
  check_interval(ts_range, "ts");
  check_interval(f_range, "f");
  check_normal(b0, "b0");
  check_normal(b1, "b1");
  check_normal(a1, "a1");
  check_normal(a2, "a2");
  check_normal(b_inj, "b_inj");
  if (!(sigma2_d > 0.0) || !(sigma2_s > 0.0)) {
    throw std::invalid_argument("PriorSpec: measurement variances must be positive");
  }
  if (a1.sd == 0.0 && a2.sd == 0.0 && !(a1.mean < a2.mean)) {
    throw std::invalid_argument("PriorSpec: pinned thresholds must satisfy a1 < a2");
  }
}

PriorSpec default_priors() { return PriorSpec{}; }

double prior_log_density(const KinematicState& s, const ThrowParams& throw_params,
                         const InjuryParams& injury_params, const PriorSpec& spec) {
  double lp = 0.0;
  lp += uniform_logpdf(s.x, spec.x_range);
  lp += uniform_logpdf(s.v, spec.v_range);
  lp += uniform_logpdf(s.tp, spec.tp_range);
  lp += uniform_logpdf(s.ts, spec.ts_range);
  lp += uniform_logpdf(s.f, spec.f_range);
  if (std::isinf(lp)) return kNegInf;

  if (!(injury_params.a1 < injury_params.a2)) return kNegInf;

  lp += normal_logpdf(throw_params.b0, spec.b0.mean, spec.b0.sd);
  lp += normal_logpdf(throw_params.b1, spec.b1.mean, spec.b1.sd);
  lp += normal_logpdf(injury_params.a1, spec.a1.mean, spec.a1.sd);
  lp += normal_logpdf(injury_params.a2, spec.a2.mean, spec.a2.sd);
  lp += normal_logpdf(injury_params.b_inj, spec.b_inj.mean, spec.b_inj.sd);
  return lp;
}

PriorDraw sample_prior(std::mt19937_64& rng, const PriorSpec& spec) {
  PriorDraw d;
  d.state.x = draw_uniform(rng, spec.x_range);
  d.state.v = draw_uniform(rng, spec.v_range);
  d.state.tp = draw_uniform(rng, spec.tp_range);
  d.state.ts = draw_uniform(rng, spec.ts_range);
  d.state.f = draw_uniform(rng, spec.f_range);

  d.throw_params.b0 = draw_normal(rng, spec.b0);
  d.throw_params.b1 = draw_normal(rng, spec.b1);
  d.throw_params.sigma2_d = spec.sigma2_d;

  // Ordered thresholds by rejection.
  if (spec.a1.sd == 0.0 && spec.a2.sd == 0.0 && !(spec.a1.mean < spec.a2.mean)) {
    throw std::invalid_argument("sample_prior: pinned thresholds must satisfy a1 < a2");
  }
  do {
    d.injury_params.a1 = draw_normal(rng, spec.a1);
    d.injury_params.a2 = draw_normal(rng, spec.a2);
  } while (!(d.injury_params.a1 < d.injury_params.a2));
  d.injury_params.b_inj = draw_normal(rng, spec.b_inj);
  return d;
}

}  // namespace pedrecon
