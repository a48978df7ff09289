#pragma once
// Deterministic collision kinematics and the measurement likelihoods.
//
// Unit regime: all kinematics in SI (m, m/s, s). The impact speed is
// converted to km/h exactly where the throw-distance and injury models
// expect it; reports convert speeds to km/h at the output boundary.

#include <optional>
#include <string>
#include <string_view>

namespace pedrecon {

inline constexpr double kGravity = 9.80665;  // m/s^2
inline constexpr double kMsToKmh = 3.6;

// Default log-scale variance of the skidmark measurement error (coefficient
// of variation about 0.10 for both s1 and s2).
inline constexpr double kSkidLogVarDefault = 0.01;

// Background variables of one conflict: the driver notices the hazard at
// distance x while travelling at speed v, locks the brakes after tp, the
// tires start marking the pavement a further ts later, and braking
// decelerates the vehicle at f*g throughout.
struct KinematicState {
  double x;   // m, distance to the impact point when the hazard is noticed
  double v;   // m/s, initial speed
  double tp;  // s, perception/reaction time
  double ts;  // s, braking transition time
  double f;   // friction coefficient; braking deceleration = f*g
};

// Throw-distance regression on the log scale:
//   log(d) = b0 + b1 * log(vi_kmh) + e,  e ~ N(0, sigma2_d)
struct ThrowParams {
  double b0 = -3.43;      // intercept (log-meters)
  double b1 = 1.61;       // slope
  double sigma2_d = 0.06; // residual variance of e
};

// Ordered-logit injury model thresholds and speed coefficient (per km/h).
// a1 < a2 is required for valid category probabilities.
struct InjuryParams {
  double a1 = 4.07;
  double a2 = 7.21;
  double b_inj = 0.095;
};

enum class Severity { kSlight, kSerious, kFatal };

const char* to_string(Severity s);
std::optional<Severity> severity_from_string(std::string_view name);

// One accident's observed evidence. Any subset of the four measurements may
// be present; file loading enforces that at least one is.
struct Case {
  std::string id;
  double speed_limit_kmh = 0.0;
  std::optional<double> s1_m;      // full skidmark length (m)
  std::optional<double> s2_m;      // impact point to skid end (m)
  std::optional<double> throw_m;   // pedestrian throw distance (m)
  std::optional<Severity> severity;

  bool has_measurement() const {
    return s1_m || s2_m || throw_m || severity;
  }
};

struct CollisionOutcome {
  double vi;     // impact speed (m/s); 0 means no collision
  double s1_th;  // theoretical full skid length (m)
  double s2_th;  // theoretical post-impact skid length (m); 0 when the
                 // impact precedes the steady skid or no impact occurs
};

// Impact speed (m/s). Returns v when the impact lands inside the reaction
// phase, 0 at or beyond the total stopping distance (the boundary point is
// assigned 0), and the braking-phase root otherwise.
double impact_speed(const KinematicState& s);

// Theoretical full skidmark length: total braking distance minus the
// distance traversed during the transition phase. Callers treat <= 0 as
// "no skidmark possible".
double theoretical_skid_s1(const KinematicState& s);

// Theoretical impact-to-rest skid length: vi^2/(2fg) when the impact falls
// in the steady skid phase, otherwise 0.
double theoretical_skid_s2(const KinematicState& s);

CollisionOutcome collision_outcome(const KinematicState& s);

struct SeverityProbs {
  double slight;
  double serious;
  double fatal;

  double prob(Severity s) const {
    switch (s) {
      case Severity::kSlight: return slight;
      case Severity::kSerious: return serious;
      default: return fatal;
    }
  }
};

// Cumulative ordered-logit category probabilities at impact speed vi (km/h):
//   P[slight]          = L(a1 - b*vi)
//   P[slight or serious] = L(a2 - b*vi)
// with L the standard logistic. Throws std::invalid_argument when a1 >= a2.
SeverityProbs severity_probs(double vi_kmh, const InjuryParams& p);

// Joint log-likelihood of the case's present measurements given the state
// and parameters. Returns -inf exactly when some present measurement is
// structurally impossible under the state (no skid where one was measured,
// throw or injury evidence with no collision); this is how conditioning on
// an actual collision enters the posterior.
double case_log_likelihood(const KinematicState& s, const ThrowParams& throw_params,
                           const InjuryParams& injury_params, const Case& c,
                           double sigma2_s = kSkidLogVarDefault);

}  // namespace pedrecon
