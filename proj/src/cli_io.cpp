#include <fstream>
#include <set>

#include <json.hpp>

#include "pedrecon/cli.hpp"
#include "pedrecon/errors.hpp"

namespace pedrecon::cli {

using nlohmann::json;

namespace {

json parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open case file: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ValidationError(where + ": unknown field '" + item.key() + "'");
    }
  }
}

double require_positive_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + ": '" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v) || v <= 0.0) {
    throw ValidationError(where + ": '" + key + "' must be finite and > 0");
  }
  return v;
}

Case parse_case(const json& jc, std::size_t index) {
  const std::string where =
      jc.contains("id") && jc["id"].is_string()
          ? "case '" + jc["id"].get<std::string>() + "'"
          : "case #" + std::to_string(index);
  if (!jc.is_object()) throw ValidationError(where + ": must be an object");
  reject_unknown_keys(jc, {"id", "speed_limit_kmh", "measurements"}, where);

  Case c;
  if (!jc.contains("id") || !jc["id"].is_string() || jc["id"].get<std::string>().empty()) {
    throw ValidationError(where + ": missing or empty 'id'");
  }
  c.id = jc["id"].get<std::string>();
  if (!jc.contains("speed_limit_kmh")) {
    throw ValidationError(where + ": missing 'speed_limit_kmh'");
  }
  c.speed_limit_kmh = require_positive_number(jc["speed_limit_kmh"], "speed_limit_kmh", where);

  if (!jc.contains("measurements") || !jc["measurements"].is_object()) {
    throw ValidationError(where + ": missing 'measurements' object");
  }
  const json& m = jc["measurements"];
  reject_unknown_keys(m, {"s1_m", "s2_m", "throw_m", "severity"}, where);
  if (m.contains("s1_m")) c.s1_m = require_positive_number(m["s1_m"], "s1_m", where);
  if (m.contains("s2_m")) c.s2_m = require_positive_number(m["s2_m"], "s2_m", where);
  if (m.contains("throw_m")) c.throw_m = require_positive_number(m["throw_m"], "throw_m", where);
  if (m.contains("severity")) {
    if (!m["severity"].is_string()) {
      throw ValidationError(where + ": 'severity' must be a string");
    }
    const auto sev = severity_from_string(m["severity"].get<std::string>());
    if (!sev) {
      throw ValidationError(where + ": severity '" + m["severity"].get<std::string>() +
                            "' is not one of slight/serious/fatal");
    }
    c.severity = *sev;
  }
  if (!c.has_measurement()) {
    throw ValidationError(where + ": at least one measurement is required");
  }
  return c;
}

json case_to_json(const Case& c) {
  json m = json::object();
  if (c.s1_m) m["s1_m"] = *c.s1_m;
  if (c.s2_m) m["s2_m"] = *c.s2_m;
  if (c.throw_m) m["throw_m"] = *c.throw_m;
  if (c.severity) m["severity"] = to_string(*c.severity);
  return json{{"id", c.id}, {"speed_limit_kmh", c.speed_limit_kmh}, {"measurements", m}};
}

constexpr const char* kTruthKeys[] = {"id",   "x_m",  "v_ms", "tp_s",  "ts_s",    "f",
                                      "b0",   "b1",   "a1",   "a2",    "b_inj",   "vi_ms",
                                      "s1_th_m", "s2_th_m"};

json truth_to_json(const std::string& id, const SyntheticTruth& t) {
  return json{{"id", id},
              {"x_m", t.state.x},
              {"v_ms", t.state.v},
              {"tp_s", t.state.tp},
              {"ts_s", t.state.ts},
              {"f", t.state.f},
              {"b0", t.throw_params.b0},
              {"b1", t.throw_params.b1},
              {"a1", t.injury_params.a1},
              {"a2", t.injury_params.a2},
              {"b_inj", t.injury_params.b_inj},
              {"vi_ms", t.outcome.vi},
              {"s1_th_m", t.outcome.s1_th},
              {"s2_th_m", t.outcome.s2_th}};
}

SyntheticTruth truth_from_json(const json& jt, const std::string& where) {
  reject_unknown_keys(jt, std::set<std::string>(std::begin(kTruthKeys), std::end(kTruthKeys)),
                      where);
  for (const char* key : kTruthKeys) {
    if (!jt.contains(key)) throw ValidationError(where + ": truth missing '" + key + "'");
  }
  SyntheticTruth t;
  t.state = KinematicState{jt["x_m"].get<double>(), jt["v_ms"].get<double>(),
                           jt["tp_s"].get<double>(), jt["ts_s"].get<double>(),
                           jt["f"].get<double>()};
  t.throw_params = ThrowParams{jt["b0"].get<double>(), jt["b1"].get<double>()};
  t.injury_params = InjuryParams{jt["a1"].get<double>(), jt["a2"].get<double>(),
                                 jt["b_inj"].get<double>()};
  t.outcome = CollisionOutcome{jt["vi_ms"].get<double>(), jt["s1_th_m"].get<double>(),
                               jt["s2_th_m"].get<double>()};
  return t;
}

std::vector<CaseFixture> load_impl(const std::filesystem::path& path) try {
  const json root = parse_file(path);
  if (!root.is_object() || !root.contains("cases") || !root["cases"].is_array()) {
    throw ParseError(path.string() + ": expected a top-level object with a 'cases' list");
  }
  reject_unknown_keys(root, {"cases", "truths"}, path.string());

  std::vector<CaseFixture> out;
  out.reserve(root["cases"].size());
  std::size_t index = 0;
  for (const json& jc : root["cases"]) {
    out.push_back(CaseFixture{parse_case(jc, index++), std::nullopt});
  }

  if (root.contains("truths")) {
    if (!root["truths"].is_array()) {
      throw ParseError(path.string() + ": 'truths' must be a list");
    }
    for (const json& jt : root["truths"]) {
      if (!jt.is_object() || !jt.contains("id") || !jt["id"].is_string()) {
        throw ValidationError(path.string() + ": truth entries need a string 'id'");
      }
      const std::string id = jt["id"].get<std::string>();
      const SyntheticTruth t = truth_from_json(jt, "truth '" + id + "'");
      bool matched = false;
      for (auto& fx : out) {
        if (fx.kase.id == id) {
          fx.truth = t;
          matched = true;
          break;
        }
      }
      if (!matched) {
        throw ValidationError(path.string() + ": truth '" + id + "' has no matching case");
      }
    }
  }
  return out;
} catch (const json::exception& e) {
  throw ParseError(path.string() + ": " + e.what());
}

}  // namespace

std::vector<Case> load_cases(const std::filesystem::path& path) {
  std::vector<Case> cases;
  for (auto& fx : load_impl(path)) cases.push_back(std::move(fx.kase));
  return cases;
}

std::vector<CaseFixture> load_fixtures(const std::filesystem::path& path) {
  return load_impl(path);
}

void write_fixtures(const std::filesystem::path& path,
                    const std::vector<std::pair<SyntheticTruth, Case>>& fixtures) {
  json cases = json::array();
  json truths = json::array();
  for (const auto& [truth, c] : fixtures) {
    cases.push_back(case_to_json(c));
    truths.push_back(truth_to_json(c.id, truth));
  }
  const json root{{"cases", cases}, {"truths", truths}};
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write fixture file: " + path.string());
  out << root.dump(2) << "\n";
}

namespace {

Interval interval_from_json(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("priors override '" + key + "' must be [lo, hi]");
  }
  return Interval{j[0].get<double>(), j[1].get<double>()};
}

NormalSpec normal_from_json(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains("mean") || !j.contains("sd") || j.size() != 2 ||
      !j["mean"].is_number() || !j["sd"].is_number()) {
    throw ParseError("priors override '" + key + "' must be {\"mean\":..., \"sd\":...}");
  }
  return NormalSpec{j["mean"].get<double>(), j["sd"].get<double>()};
}

}  // namespace

PriorSpec load_priors_overrides(const std::filesystem::path& path, PriorSpec base) try {
  const json root = parse_file(path);
  if (!root.is_object()) throw ParseError(path.string() + ": priors file must be an object");

  for (const auto& item : root.items()) {
    const std::string& key = item.key();
    const json& val = item.value();
    if (key == "x_range") base.x_range = interval_from_json(val, key);
    else if (key == "v_range") base.v_range = interval_from_json(val, key);
    else if (key == "tp_range") base.tp_range = interval_from_json(val, key);
    else if (key == "ts_range") base.ts_range = interval_from_json(val, key);
    else if (key == "f_range") base.f_range = interval_from_json(val, key);
    else if (key == "b0") base.b0 = normal_from_json(val, key);
    else if (key == "b1") base.b1 = normal_from_json(val, key);
    else if (key == "a1") base.a1 = normal_from_json(val, key);
    else if (key == "a2") base.a2 = normal_from_json(val, key);
    else if (key == "b_inj") base.b_inj = normal_from_json(val, key);
    else if (key == "sigma2_d") base.sigma2_d = val.get<double>();
    else if (key == "sigma2_s") base.sigma2_s = val.get<double>();
    else throw ParseError(path.string() + ": unknown priors key '" + key + "'");
  }
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return base;
} catch (const json::exception& e) {
  throw ParseError(path.string() + ": " + e.what());
}

}  // namespace pedrecon::cli
