#pragma once
// Priors for the five background variables (independent uniforms on fixed
// ranges) and the throw/injury parameters (independent normals at the
// published estimates). A degenerate range or a zero standard deviation
// pins the coordinate, which is how test fixtures hold variables fixed.

#include <random>

#include "pedrecon/model.hpp"

namespace pedrecon {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool degenerate() const { return lo == hi; }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct NormalSpec {
  double mean = 0.0;
  double sd = 0.0;
};

struct PriorSpec {
  Interval x_range{0.0, 200.0};   // m
  Interval v_range{5.0, 50.0};    // m/s
  Interval tp_range{0.5, 2.5};    // s
  Interval ts_range{0.1, 0.5};    // s
  Interval f_range{0.45, 1.0};

  NormalSpec b0{-3.43, 0.30};
  NormalSpec b1{1.61, 0.09};
  NormalSpec a1{4.07, 0.73};
  NormalSpec a2{7.21, 1.01};
  NormalSpec b_inj{0.095, 0.02};

  double sigma2_d = 0.06;  // throw measurement variance (log scale)
  double sigma2_s = 0.01;  // skid measurement variance (log scale)

  // Throws std::invalid_argument on an empty interval, a negative sd, or a
  // non-positive measurement variance.
  void validate() const;

  bool contains(const KinematicState& s) const {
    return x_range.contains(s.x) && v_range.contains(s.v) && tp_range.contains(s.tp) &&
           ts_range.contains(s.ts) && f_range.contains(s.f);
  }
};

PriorSpec default_priors();

struct PriorDraw {
  KinematicState state;
  ThrowParams throw_params;
  InjuryParams injury_params;
};

// Joint prior log density. -inf outside any range, off any pinned value, or
// when a1 >= a2 (the prior is truncated to ordered thresholds; the constant
// from the truncation is dropped).
double prior_log_density(const KinematicState& s, const ThrowParams& throw_params,
                         const InjuryParams& injury_params, const PriorSpec& spec);

// Independent draw from the prior; redraws the parameter vector until
// a1 < a2 (rejection probability about 0.6% at the default spec).
PriorDraw sample_prior(std::mt19937_64& rng, const PriorSpec& spec);

}  // namespace pedrecon
