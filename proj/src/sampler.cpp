#include "pedrecon/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "pedrecon/errors.hpp"
#include "pedrecon/math_util.hpp"

namespace pedrecon {

void McmcConfig::validate() const {
  if (n_chains < 1 || burn_in < 1 || iterations < 1 || thin < 1 || adapt_window < 1) {
    throw std::invalid_argument("McmcConfig: all counts must be positive");
  }
  if (iterations % thin != 0) {
    throw std::invalid_argument("McmcConfig: thin must divide iterations evenly");
  }
}

const char* to_string(Quantity q) {
  switch (q) {
    case Quantity::kX: return "x";
    case Quantity::kV: return "v";
    case Quantity::kTp: return "tp";
    case Quantity::kTs: return "ts";
    case Quantity::kF: return "f";
    case Quantity::kB0: return "b0";
    case Quantity::kB1: return "b1";
    case Quantity::kA1: return "a1";
    case Quantity::kA2: return "a2";
    case Quantity::kBInj: return "b_inj";
    default: return "vi";
  }
}

const std::vector<double>& ChainDraws::column(Quantity q) const {
  switch (q) {
    case Quantity::kX: return x;
    case Quantity::kV: return v;
    case Quantity::kTp: return tp;
    case Quantity::kTs: return ts;
    case Quantity::kF: return f;
    case Quantity::kB0: return b0;
    case Quantity::kB1: return b1;
    case Quantity::kA1: return a1;
    case Quantity::kA2: return a2;
    case Quantity::kBInj: return b_inj;
    default: return vi;
  }
}

std::size_t Posterior::total_draws() const {
  std::size_t n = 0;
  for (const auto& c : chains) n += c.size();
  return n;
}

std::vector<double> Posterior::pooled(Quantity q) const {
  std::vector<double> out;
  out.reserve(total_draws());
  for (const auto& c : chains) {
    const auto& col = c.column(q);
    out.insert(out.end(), col.begin(), col.end());
  }
  return out;
}

namespace {

constexpr double kTargetAcceptance = 0.44;  // coordinate-wise random walk

// Ten scalar coordinates: the five bounded background variables followed by
// the five normal-prior parameters.
struct CoordinateSpace {
  std::array<Interval, 5> ranges;
  std::array<NormalSpec, 5> normals;
  std::array<bool, kNumCoords> active{};

  explicit CoordinateSpace(const PriorSpec& spec)
      : ranges{spec.x_range, spec.v_range, spec.tp_range, spec.ts_range, spec.f_range},
        normals{spec.b0, spec.b1, spec.a1, spec.a2, spec.b_inj} {
    for (int i = 0; i < 5; ++i) active[i] = !ranges[i].degenerate();
    for (int i = 0; i < 5; ++i) active[5 + i] = normals[i].sd > 0.0;
  }
};

std::array<double, kNumCoords> pack(const PriorDraw& d) {
  return {d.state.x,        d.state.v,        d.state.tp,        d.state.ts,        d.state.f,
          d.throw_params.b0, d.throw_params.b1, d.injury_params.a1, d.injury_params.a2,
          d.injury_params.b_inj};
}

PriorDraw unpack(const std::array<double, kNumCoords>& t, double sigma2_d) {
  PriorDraw d;
  d.state = KinematicState{t[0], t[1], t[2], t[3], t[4]};
  d.throw_params = ThrowParams{t[5], t[6], sigma2_d};
  d.injury_params = InjuryParams{t[7], t[8], t[9]};
  return d;
}

// logit / inverse-logit between a coordinate's range and the real line.
double to_unbounded(double val, const Interval& r) {
  double p = (val - r.lo) / r.width();
  p = std::clamp(p, 1e-12, 1.0 - 1e-12);
  return std::log(p) - std::log1p(-p);
}

double to_natural(double u, const Interval& r) {
  return r.lo + r.width() * logistic(u);
}

// Log derivative of to_natural, up to the constant log(width) which cancels
// in every acceptance ratio.
double log_jacobian(double u) { return -log1pexp(u) - log1pexp(-u); }

class ChainRunner {
 public:
  ChainRunner(const Case& c, const PriorSpec& spec, const McmcConfig& cfg,
              std::uint64_t chain_seed)
      : case_(c), spec_(spec), cfg_(cfg), coords_(spec), rng_(seeded_rng(chain_seed)) {
    sigma_.fill(1.0);
    for (int i = 0; i < 5; ++i) {
      // The transformed uniform is standard logistic (sd ~ 1.8).
      sigma_[i] = 2.4;
      sigma_[5 + i] = std::max(2.4 * coords_.normals[i].sd, 1e-3);
    }
  }

  ChainDraws run() {
    initialize();

    // Burn-in with windowed proposal adaptation.
    std::array<long, kNumCoords> window_accepts{};
    long batch = 0;
    for (long it = 1; it <= cfg_.burn_in; ++it) {
      sweep(window_accepts);
      if (it % cfg_.adapt_window == 0) {
        ++batch;
        adapt(window_accepts, batch);
        window_accepts.fill(0);
      }
    }

    // Sampling phase: fixed kernel, every thin-th sweep retained.
    const long retained = cfg_.iterations / cfg_.thin;
    ChainDraws out;
    reserve(out, static_cast<std::size_t>(retained));
    std::array<long, kNumCoords> accepts{};
    for (long it = 1; it <= cfg_.iterations; ++it) {
      sweep(accepts);
      if (it % cfg_.thin == 0) record(out);
    }
    for (int i = 0; i < kNumCoords; ++i) {
      out.acceptance_rate[i] = coords_.active[i]
                                   ? static_cast<double>(accepts[i]) / cfg_.iterations
                                   : std::numeric_limits<double>::quiet_NaN();
    }
    return out;
  }

 private:
  void initialize() {
    constexpr long kMaxAttempts = 1000000;
    for (long attempt = 0; attempt < kMaxAttempts; ++attempt) {
      PriorDraw d = sample_prior(rng_, spec_);
      const double lt = log_target(pack(d));
      if (std::isfinite(lt)) {
        theta_ = pack(d);
        for (int i = 0; i < 5; ++i) {
          u_[i] = coords_.active[i] ? to_unbounded(theta_[i], coords_.ranges[i]) : 0.0;
        }
        log_target_ = lt;
        return;
      }
    }
    throw InitializationFailure("run_chain: no finite-density initial state for case '" +
                                case_.id + "' within 1e6 prior draws");
  }

  double log_target(const std::array<double, kNumCoords>& t) const {
    const PriorDraw d = unpack(t, spec_.sigma2_d);
    const double lp = prior_log_density(d.state, d.throw_params, d.injury_params, spec_);
    if (!std::isfinite(lp)) return kNegInf;
    const double ll =
        case_log_likelihood(d.state, d.throw_params, d.injury_params, case_, spec_.sigma2_s);
    return lp + ll;
  }

  void sweep(std::array<long, kNumCoords>& accepts) {
    for (int i = 0; i < kNumCoords; ++i) {
      if (!coords_.active[i]) continue;
      const double step = sigma_[i] * normal_(rng_);
      if (i < 5) {
        const double u_new = u_[i] + step;
        const double val_new = to_natural(u_new, coords_.ranges[i]);
        std::array<double, kNumCoords> t_new = theta_;
        t_new[i] = val_new;
        const double lt_new = log_target(t_new);
        const double log_ratio =
            (lt_new + log_jacobian(u_new)) - (log_target_ + log_jacobian(u_[i]));
        if (accept(log_ratio)) {
          theta_ = t_new;
          u_[i] = u_new;
          log_target_ = lt_new;
          ++accepts[i];
        }
      } else {
        std::array<double, kNumCoords> t_new = theta_;
        t_new[i] += step;
        const double lt_new = log_target(t_new);
        if (accept(lt_new - log_target_)) {
          theta_ = t_new;
          log_target_ = lt_new;
          ++accepts[i];
        }
      }
    }
  }

  bool accept(double log_ratio) {
    if (log_ratio >= 0.0) return true;
    if (std::isinf(log_ratio)) return false;
    return std::log(uniform_(rng_)) < log_ratio;
  }

  void adapt(const std::array<long, kNumCoords>& window_accepts, long batch) {
    const double delta = std::min(0.25, 1.0 / std::sqrt(static_cast<double>(batch)));
    for (int i = 0; i < kNumCoords; ++i) {
      if (!coords_.active[i]) continue;
      const double rate = static_cast<double>(window_accepts[i]) / cfg_.adapt_window;
      sigma_[i] *= std::exp(rate > kTargetAcceptance ? delta : -delta);
      sigma_[i] = std::clamp(sigma_[i], 1e-6, 1e3);
    }
  }

  static void reserve(ChainDraws& d, std::size_t n) {
    for (auto* col : {&d.x, &d.v, &d.tp, &d.ts, &d.f, &d.b0, &d.b1, &d.a1, &d.a2, &d.b_inj,
                      &d.vi}) {
      col->reserve(n);
    }
  }

  void record(ChainDraws& d) const {
    d.x.push_back(theta_[0]);
    d.v.push_back(theta_[1]);
    d.tp.push_back(theta_[2]);
    d.ts.push_back(theta_[3]);
    d.f.push_back(theta_[4]);
    d.b0.push_back(theta_[5]);
    d.b1.push_back(theta_[6]);
    d.a1.push_back(theta_[7]);
    d.a2.push_back(theta_[8]);
    d.b_inj.push_back(theta_[9]);
    d.vi.push_back(impact_speed(KinematicState{theta_[0], theta_[1], theta_[2], theta_[3],
                                               theta_[4]}));
  }

  const Case& case_;
  const PriorSpec& spec_;
  const McmcConfig& cfg_;
  CoordinateSpace coords_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};

  std::array<double, kNumCoords> theta_{};
  std::array<double, 5> u_{};  // transformed bounded coordinates
  std::array<double, kNumCoords> sigma_{};
  double log_target_ = kNegInf;
};

}  // namespace

ChainDraws run_chain(const Case& c, const PriorSpec& spec, const McmcConfig& cfg,
                     std::uint64_t chain_seed) {
  cfg.validate();
  spec.validate();
  return ChainRunner(c, spec, cfg, chain_seed).run();
}

Posterior run_inference(const Case& c, const PriorSpec& spec, const McmcConfig& cfg) {
  cfg.validate();
  spec.validate();

  Posterior post;
  post.case_id = c.id;
  post.config = cfg;
  post.chains.resize(cfg.n_chains);

  // Chains are independent; each owns a seed-derived stream, so concurrent
  // execution gives the same result as sequential.
  std::vector<std::future<ChainDraws>> futures;
  futures.reserve(cfg.n_chains);
  for (int chain = 0; chain < cfg.n_chains; ++chain) {
    const std::uint64_t chain_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(chain));
    futures.push_back(std::async(std::launch::async, [&, chain_seed] {
      return run_chain(c, spec, cfg, chain_seed);
    }));
  }
  for (int chain = 0; chain < cfg.n_chains; ++chain) {
    post.chains[chain] = futures[chain].get();
  }
  return post;
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) return 0.0;
  double s = 0.0;
  for (double x : xs) s += sqr(x - mean);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

double psrf(const Posterior& post, Quantity q) {
  const std::size_t m = post.chains.size();
  if (m < 2) throw std::invalid_argument("psrf: needs at least 2 chains");
  const std::size_t n = post.chains.front().size();
  for (const auto& c : post.chains) {
    if (c.size() != n) throw std::invalid_argument("psrf: chains must have equal length");
  }
  if (n < 10) throw std::invalid_argument("psrf: needs at least 10 draws per chain");

  std::vector<double> chain_means(m);
  double w = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const auto& col = post.chains[j].column(q);
    chain_means[j] = mean_of(col);
    w += sample_variance(col, chain_means[j]);
  }
  w /= static_cast<double>(m);
  if (w == 0.0) throw DegenerateVariance("psrf: zero within-chain variance for quantity " +
                                         std::string(to_string(q)));

  const double grand = mean_of(chain_means);
  double b = 0.0;
  for (double cm : chain_means) b += sqr(cm - grand);
  b *= static_cast<double>(n) / static_cast<double>(m - 1);

  const double nn = static_cast<double>(n);
  const double var_plus = (nn - 1.0) / nn * w + b / nn;
  return std::sqrt(var_plus / w);
}

Summary summarize_draws(std::vector<double> draws) {
  if (draws.empty()) throw std::invalid_argument("summarize: no draws");
  const double mean = mean_of(draws);
  const double sd = std::sqrt(sample_variance(draws, mean));

  std::sort(draws.begin(), draws.end());
  const auto quantile = [&](double p) {
    const double h = p * static_cast<double>(draws.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(h);
    const double frac = h - static_cast<double>(lo);
    if (lo + 1 >= draws.size()) return draws.back();
    return draws[lo] + frac * (draws[lo + 1] - draws[lo]);
  };
  return Summary{mean, sd, quantile(0.025), quantile(0.5), quantile(0.975)};
}

Summary summarize(const Posterior& post, Quantity q) { return summarize_draws(post.pooled(q)); }

}  // namespace pedrecon
