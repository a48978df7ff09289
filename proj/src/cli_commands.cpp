#include <cstdio>
#include <fstream>
#include <iostream>

#include "pedrecon/cli.hpp"
#include "pedrecon/counterfactual.hpp"
#include "pedrecon/errors.hpp"
#include "pedrecon/math_util.hpp"

namespace pedrecon::cli {

namespace {

constexpr double kPsrfThreshold = 1.1;

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v, int decimals) {
  return v ? fmt(*v, decimals) : std::string();
}

// Max PSRF over all quantities that have within-chain variance (pinned or
// otherwise constant coordinates are skipped).
std::optional<double> max_psrf(const Posterior& post) {
  if (post.chains.size() < 2) return std::nullopt;
  std::optional<double> out;
  for (Quantity q : kAllQuantities) {
    try {
      const double r = psrf(post, q);
      if (!out || r > *out) out = r;
    } catch (const DegenerateVariance&) {
    }
  }
  return out;
}

std::ofstream open_report(const std::filesystem::path& dir, const char* name) {
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path.string());
  return out;
}

struct ReconstructRow {
  std::string case_id;
  std::optional<int> n_chains;
  std::optional<double> psrf_max;
  std::optional<double> p_speeding, pn;
  std::optional<double> v_mean, v_q025, v_q975, vi_mean;  // km/h
  std::optional<double> method1_v, method1_vistar;        // km/h
  std::string flags;
};

void write_reconstruct_row(std::ostream& out, const ReconstructRow& r) {
  out << r.case_id << ',' << (r.n_chains ? std::to_string(*r.n_chains) : std::string()) << ','
      << fmt_opt(r.psrf_max, 4) << ',' << fmt_opt(r.p_speeding, 4) << ',' << fmt_opt(r.pn, 4)
      << ',' << fmt_opt(r.v_mean, 3) << ',' << fmt_opt(r.v_q025, 3) << ','
      << fmt_opt(r.v_q975, 3) << ',' << fmt_opt(r.vi_mean, 3) << ','
      << fmt_opt(r.method1_v, 3) << ',' << fmt_opt(r.method1_vistar, 3) << ',' << r.flags
      << '\n';
}

void fill_method1(ReconstructRow& row, const Case& c, const PriorSpec& priors, double v_star) {
  if (!c.s1_m) return;
  try {
    const Method1Result m1 = deterministic_method1(c, priors, v_star);
    row.method1_v = m1.v_kmh;
    row.method1_vistar = m1.vi_star_kmh;
  } catch (const NoRealRoot&) {
  }
}

}  // namespace

int cmd_reconstruct(const RunConfig& rc) {
  rc.priors.validate();
  const std::vector<Case> cases = load_cases(rc.cases_path);

  auto out = open_report(rc.out_dir, "report.csv");
  out << "case_id,n_chains,psrf_max,p_speeding,pn,v_mean_kmh,v_q025_kmh,v_q975_kmh,"
         "vi_mean_kmh,method1_v_kmh,method1_vistar_kmh,flags\n";

  bool any_failed = false;
  double sum_pn = 0.0;
  std::size_t case_index = 0;
  for (const Case& c : cases) {
    const double v_star = rc.limit_override_kmh > 0.0 ? rc.limit_override_kmh
                                                      : c.speed_limit_kmh;
    ReconstructRow row;
    row.case_id = c.id;
    try {
      if (rc.mode == RunMode::kGrid) {
        const GridEstimates est = grid_posterior(c, rc.priors, rc.grid, v_star, v_star);
        row.p_speeding = est.p_speeding;
        row.pn = est.pn;
        row.v_mean = est.v_mean * kMsToKmh;
        row.vi_mean = est.vi_mean * kMsToKmh;
      } else {
        McmcConfig cfg = rc.mcmc;
        cfg.seed = derive_seed(rc.mcmc.seed, case_index);
        const Posterior post = run_inference(c, rc.priors, cfg);
        const CounterfactualReport rep = make_report(c, post, rc.priors, v_star);
        row.n_chains = cfg.n_chains;
        row.psrf_max = max_psrf(post);
        row.p_speeding = rep.p_speeding;
        row.pn = rep.pn;
        row.v_mean = rep.v_kmh.mean;
        row.v_q025 = rep.v_kmh.q025;
        row.v_q975 = rep.v_kmh.q975;
        row.vi_mean = rep.vi_kmh.mean;
        row.method1_v = rep.method1_v_kmh;
        row.method1_vistar = rep.method1_vistar_kmh;
        if (row.psrf_max && *row.psrf_max > kPsrfThreshold) row.flags = "nonconverged";
      }
      if (rc.mode == RunMode::kGrid) fill_method1(row, c, rc.priors, v_star);
      sum_pn += *row.pn;
    } catch (const InitializationFailure& e) {
      row = ReconstructRow{};
      row.case_id = c.id;
      row.flags = "failed:initialization";
      std::cerr << e.what() << "\n";
      any_failed = true;
    } catch (const ZeroMassPosterior& e) {
      row = ReconstructRow{};
      row.case_id = c.id;
      row.flags = "failed:zero_mass";
      std::cerr << e.what() << "\n";
      any_failed = true;
    }
    write_reconstruct_row(out, row);
    ++case_index;
  }

  ReconstructRow total;
  total.case_id = "TOTAL";
  total.pn = sum_pn;
  write_reconstruct_row(out, total);
  return any_failed ? 1 : 0;
}

int cmd_simulate(const RunConfig& rc) {
  rc.priors.validate();
  std::filesystem::create_directories(rc.out_dir);

  auto rng = seeded_rng(derive_seed(rc.mcmc.seed, 0x51E0000ULL));
  std::vector<std::pair<SyntheticTruth, Case>> fixtures;
  fixtures.reserve(static_cast<std::size_t>(rc.n_simulate));
  for (int i = 0; i < rc.n_simulate; ++i) {
    auto [truth, c] = simulate_case(rng, rc.priors, rc.require_collision);
    c.id = "sim-" + std::to_string(i);
    if (rc.limit_override_kmh > 0.0) c.speed_limit_kmh = rc.limit_override_kmh;
    fixtures.emplace_back(truth, std::move(c));
  }
  write_fixtures(rc.out_dir / "simulated_cases.json", fixtures);
  return 0;
}

int cmd_method1(const RunConfig& rc) {
  rc.priors.validate();
  const std::vector<Case> cases = load_cases(rc.cases_path);

  auto out = open_report(rc.out_dir, "method1.csv");
  out << "case_id,method1_v_kmh,method1_vistar_kmh,flags\n";

  bool any_failed = false;
  for (const Case& c : cases) {
    const double v_star = rc.limit_override_kmh > 0.0 ? rc.limit_override_kmh
                                                      : c.speed_limit_kmh;
    std::optional<double> v_kmh, vistar_kmh;
    std::string flags;
    try {
      const Method1Result m1 = deterministic_method1(c, rc.priors, v_star);
      v_kmh = m1.v_kmh;
      vistar_kmh = m1.vi_star_kmh;
    } catch (const NoSkidEvidence&) {
      flags = "failed:no_skid_evidence";
      any_failed = true;
    } catch (const NoRealRoot&) {
      flags = "failed:no_real_root";
      any_failed = true;
    }
    out << c.id << ',' << fmt_opt(v_kmh, 3) << ',' << fmt_opt(vistar_kmh, 3) << ',' << flags
        << '\n';
  }
  return any_failed ? 1 : 0;
}

int cmd_diagnose(const RunConfig& rc) {
  rc.priors.validate();
  const std::vector<Case> cases = load_cases(rc.cases_path);

  auto out = open_report(rc.out_dir, "diagnostics.csv");
  out << "case_id,quantity,mean,sd,q025,q500,q975,psrf\n";

  bool any_failed = false;
  std::size_t case_index = 0;
  for (const Case& c : cases) {
    try {
      McmcConfig cfg = rc.mcmc;
      cfg.seed = derive_seed(rc.mcmc.seed, case_index);
      const Posterior post = run_inference(c, rc.priors, cfg);
      for (Quantity q : kAllQuantities) {
        Summary s = summarize(post, q);
        std::string name = to_string(q);
        // Report speeds in km/h, everything else in natural units.
        if (q == Quantity::kV || q == Quantity::kVi) {
          name += "_kmh";
          s = Summary{s.mean * kMsToKmh, s.sd * kMsToKmh, s.q025 * kMsToKmh,
                      s.q500 * kMsToKmh, s.q975 * kMsToKmh};
        }
        std::optional<double> r;
        if (post.chains.size() >= 2) {
          try {
            r = psrf(post, q);
          } catch (const DegenerateVariance&) {
          }
        }
        out << c.id << ',' << name << ',' << fmt(s.mean, 4) << ',' << fmt(s.sd, 4) << ','
            << fmt(s.q025, 4) << ',' << fmt(s.q500, 4) << ',' << fmt(s.q975, 4) << ','
            << fmt_opt(r, 4) << '\n';
      }
    } catch (const InitializationFailure& e) {
      out << c.id << ",,,,,,,failed:initialization\n";
      std::cerr << e.what() << "\n";
      any_failed = true;
    }
    ++case_index;
  }
  return any_failed ? 1 : 0;
}

}  // namespace pedrecon::cli
