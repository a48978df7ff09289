#include "pedrecon/oracle.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "pedrecon/counterfactual.hpp"
#include "pedrecon/errors.hpp"
#include "pedrecon/math_util.hpp"

namespace pedrecon {

void GridConfig::validate() const {
  for (int n : {nx, nv, ntp, nts, nf}) {
    if (n < 8) throw std::invalid_argument("GridConfig: every resolution must be >= 8");
  }
  if (total_cells() > 100000000L) {
    throw std::invalid_argument("GridConfig: grid exceeds 1e8 cells");
  }
}

std::pair<SyntheticTruth, Case> simulate_case(std::mt19937_64& rng, const PriorSpec& spec,
                                              bool require_collision) {
  spec.validate();
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  for (;;) {
    const PriorDraw draw = sample_prior(rng, spec);
    const CollisionOutcome outcome = collision_outcome(draw.state);
    if (require_collision && outcome.vi <= 0.0) continue;
    if (outcome.vi <= 0.0 && outcome.s1_th <= 0.0) continue;  // nothing measurable

    Case c;
    c.speed_limit_kmh = 60.0;
    if (outcome.s1_th > 0.0) {
      c.s1_m = std::exp(std::log(outcome.s1_th) +
                        std::normal_distribution<double>(0.0, std::sqrt(spec.sigma2_s))(rng));
    }
    if (outcome.s2_th > 0.0) {
      c.s2_m = std::exp(std::log(outcome.s2_th) +
                        std::normal_distribution<double>(0.0, std::sqrt(spec.sigma2_s))(rng));
    }
    if (outcome.vi > 0.0) {
      const double vi_kmh = outcome.vi * kMsToKmh;
      const double log_mean = draw.throw_params.b0 + draw.throw_params.b1 * std::log(vi_kmh);
      c.throw_m = std::exp(log_mean +
                           std::normal_distribution<double>(0.0, std::sqrt(spec.sigma2_d))(rng));

      const SeverityProbs probs = severity_probs(vi_kmh, draw.injury_params);
      const double u = unif(rng);
      if (u < probs.slight) {
        c.severity = Severity::kSlight;
      } else if (u < probs.slight + probs.serious) {
        c.severity = Severity::kSerious;
      } else {
        c.severity = Severity::kFatal;
      }
    }
    if (!c.has_measurement()) continue;

    return {SyntheticTruth{draw.state, draw.throw_params, draw.injury_params, outcome}, c};
  }
}

namespace {

// Midpoints of a range divided into n equal cells; a degenerate range is a
// single cell at its point.
std::vector<double> cell_midpoints(const Interval& r, int n) {
  if (r.degenerate()) return {r.lo};
  std::vector<double> out(static_cast<std::size_t>(n));
  const double step = r.width() / n;
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = r.lo + (i + 0.5) * step;
  return out;
}

}  // namespace

GridEstimates grid_posterior(const Case& c, const PriorSpec& spec, const GridConfig& grid,
                             double v_star_kmh, double limit_kmh) {
  grid.validate();
  spec.validate();

  const ThrowParams throw_params{spec.b0.mean, spec.b1.mean, spec.sigma2_d};
  const InjuryParams injury_params{spec.a1.mean, spec.a2.mean, spec.b_inj.mean};
  if (!(injury_params.a1 < injury_params.a2)) {
    throw std::invalid_argument("grid_posterior: prior-mean thresholds must be ordered");
  }

  const auto xs = cell_midpoints(spec.x_range, grid.nx);
  const auto vs = cell_midpoints(spec.v_range, grid.nv);
  const auto tps = cell_midpoints(spec.tp_range, grid.ntp);
  const auto tss = cell_midpoints(spec.ts_range, grid.nts);
  const auto fs = cell_midpoints(spec.f_range, grid.nf);

  // Streaming log-sum-exp over cells in fixed index order; the uniform
  // prior weight is constant across cells and cancels in every ratio.
  double max_log = kNegInf;
  double w_sum = 0.0;       // sum exp(ll - max_log)
  double wv_sum = 0.0;      // weighted v
  double wvi_sum = 0.0;     // weighted vi
  double wpn_sum = 0.0;     // weighted 1[counterfactual vi = 0]
  double wspeed_sum = 0.0;  // weighted 1[v > limit]
  const double limit_ms = limit_kmh / kMsToKmh;

  for (double x : xs) {
    for (double v : vs) {
      for (double tp : tps) {
        for (double ts : tss) {
          for (double f : fs) {
            const KinematicState s{x, v, tp, ts, f};
            const double ll = case_log_likelihood(s, throw_params, injury_params, c,
                                                  spec.sigma2_s);
            if (ll == kNegInf) continue;
            if (ll > max_log) {
              const double rescale = std::exp(max_log - ll);
              w_sum *= rescale;
              wv_sum *= rescale;
              wvi_sum *= rescale;
              wpn_sum *= rescale;
              wspeed_sum *= rescale;
              max_log = ll;
            }
            const double w = std::exp(ll - max_log);
            if (w == 0.0) continue;
            w_sum += w;
            wv_sum += w * v;
            wvi_sum += w * impact_speed(s);
            if (counterfactual_impact_speed(s, v_star_kmh) == 0.0) wpn_sum += w;
            if (v > limit_ms) wspeed_sum += w;
          }
        }
      }
    }
  }

  if (w_sum <= 0.0 || max_log == kNegInf) {
    throw ZeroMassPosterior("grid_posterior: every cell has zero likelihood for case '" +
                            c.id + "'");
  }
  return GridEstimates{wv_sum / w_sum, wvi_sum / w_sum, wpn_sum / w_sum, wspeed_sum / w_sum};
}

CalibrationReport calibration_experiment(int n_cases, const PriorSpec& spec,
                                         const McmcConfig& cfg) {
  if (n_cases < 1) throw std::invalid_argument("calibration_experiment: n_cases must be >= 1");
  spec.validate();
  cfg.validate();

  CalibrationReport report;
  report.n_cases = n_cases;
  report.covered.assign(static_cast<std::size_t>(n_cases), 0);

  // Per-case work is pure given its derived seeds, so a fixed index
  // partition over threads reproduces the sequential result.
  const auto run_case = [&](int i) {
    auto rng = seeded_rng(derive_seed(cfg.seed, 0x51D0000ULL + static_cast<std::uint64_t>(i)));
    auto [truth, c] = simulate_case(rng, spec, /*require_collision=*/true);
    c.id = "cal-" + std::to_string(i);

    McmcConfig case_cfg = cfg;
    case_cfg.seed = derive_seed(cfg.seed, 0xCA5E0000ULL + static_cast<std::uint64_t>(i));
    const Posterior post = run_inference(c, spec, case_cfg);
    const Summary v = summarize(post, Quantity::kV);
    report.covered[static_cast<std::size_t>(i)] =
        interval_covers(v.q025, v.q975, truth.state.v) ? 1 : 0;
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned n_threads = std::min<unsigned>(hw, static_cast<unsigned>(n_cases));
  if (n_threads <= 1) {
    for (int i = 0; i < n_cases; ++i) run_case(i);
  } else {
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) {
      workers.emplace_back([&, t] {
        for (int i = static_cast<int>(t); i < n_cases; i += static_cast<int>(n_threads)) {
          run_case(i);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  for (std::uint8_t b : report.covered) report.n_covered += b ? 1 : 0;
  report.coverage = static_cast<double>(report.n_covered) / n_cases;
  return report;
}

}  // namespace pedrecon
