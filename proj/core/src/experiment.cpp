#include "nas/experiment.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "nas/chain.hpp"
#include "nas/dyn_props.hpp"
#include "nas/shadowing.hpp"
#include "nas/stability.hpp"

namespace nas {
namespace {

constexpr std::size_t kMaxHorizon = 1u << 16;

double real_or(const Json& p, const std::string& key, double def, const std::string& path, double lo, double hi) {
  return p.contains(key) ? get_real(p, key, path, lo, hi) : def;
}

std::size_t count_or(const Json& p, const std::string& key, std::size_t def, const std::string& path,
                     std::size_t lo, std::size_t hi) {
  return p.contains(key) ? get_count(p, key, path, lo, hi) : def;
}

std::optional<std::size_t> maybe_count(const Json& p, const std::string& key, const std::string& path,
                                       std::size_t hi) {
  if (!p.contains(key)) return std::nullopt;
  return get_count(p, key, path, 0, hi);
}

std::vector<double> grid_or(const Json& p, const std::string& key, std::vector<double> def,
                            const std::string& path) {
  if (!p.contains(key)) return def;
  const Json& g = p.at(key);
  if (!g.is_array() || g.empty()) throw ConfigError(path + "." + key, "expected a non-empty array of numbers");
  std::vector<double> out;
  for (const auto& v : g) {
    if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError(path + "." + key, "entries must be positive");
    out.push_back(v.get<double>());
  }
  return out;
}

std::uint64_t required_seed(const Json& p, const std::string& path) {
  if (!p.contains("seed")) throw ConfigError(path + ".seed", "sampled checker needs a seed");
  const Json& s = p.at("seed");
  if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
    throw ConfigError(path + ".seed", "expected a non-negative integer");
  }
  return s.get<std::uint64_t>();
}

const MapSequence& system_ref(const std::map<std::string, MapSequence>& systems, const Json& p,
                              const std::string& key, const std::string& path) {
  const std::string name = get_string(p, key, path);
  auto it = systems.find(name);
  if (it == systems.end()) throw ConfigError(path + "." + key, "unknown system '" + name + "'");
  return it->second;
}

PointId point_param(const Space& s, const Json& p, const std::string& key, const std::string& path) {
  const Json& v = p.at(key);
  if (v.is_number_integer()) return s.point(get_count(p, key, path, 0, s.size() - 1));
  if (v.is_number()) return s.nearest(v.get<double>());
  throw ConfigError(path + "." + key, "expected an ordinal or a coordinate");
}

}  // namespace

const std::vector<std::string>& checker_names() {
  static const std::vector<std::string> names{
      "equicontinuity", "mean_equicontinuity",      "expansivity",        "recurrent_expansivity",
      "mean_expansivity", "shadowing",              "iterate_alsp_consistency", "chain_transitivity",
      "R_delta",        "transitivity",             "commutativity",      "surjectivity",
      "stability"};
  return names;
}

CheckResult run_checker(const std::string& checker, const std::map<std::string, MapSequence>& systems,
                        const Json& params, const std::string& path, std::size_t jobs) {
  if (!params.is_object()) throw ConfigError(path, "expected an object");
  MapSequence seq = system_ref(systems, params, "system", path);
  if (params.contains("iterate")) seq = iterate_system(seq, get_count(params, "iterate", path, 1, 1 << 16));
  const Space& space = seq.space();
  const std::size_t horizon = count_or(params, "horizon", 64, path, 1, kMaxHorizon);
  CheckResult r;

  auto shadow_opts = [&]() {
    ShadowingOptions o;
    o.eps = real_or(params, "eps", o.eps, path, 1e-12, 1e6);
    o.delta_grid = grid_or(params, "delta_grid", o.delta_grid, path);
    o.sample = count_or(params, "sample", o.sample, path, 1, 1u << 20);
    o.horizon = horizon;
    o.seed = required_seed(params, path);
    if (params.contains("mode")) {
      try {
        o.mode = shadow_mode_from_string(get_string(params, "mode", path));
      } catch (const ArgumentError& e) {
        throw ConfigError(path + ".mode", e.what());
      }
    }
    o.n_delta = maybe_count(params, "n_delta", path, kMaxHorizon);
    o.tail_start = maybe_count(params, "tail_start", path, kMaxHorizon);
    o.jobs = jobs;
    return o;
  };

  try {
    if (checker == "equicontinuity") {
      r.verdict = check_equicontinuity(seq, real_or(params, "eps", 0.1, path, 1e-12, 1e6), horizon, jobs);
    } else if (checker == "mean_equicontinuity") {
      MeanEquicontinuityOptions o;
      o.eps = real_or(params, "eps", o.eps, path, 1e-12, 1e6);
      o.trials = count_or(params, "trials", o.trials, path, 1, 1u << 20);
      o.length = count_or(params, "length", o.length, path, 1, kMaxHorizon);
      o.horizon = horizon;
      o.seed = required_seed(params, path);
      o.jobs = jobs;
      r.verdict = check_mean_equicontinuity(seq, o);
    } else if (checker == "expansivity") {
      r.verdict = estimate_expansivity(seq, horizon, jobs);
    } else if (checker == "recurrent_expansivity") {
      r.verdict = estimate_recurrent_expansivity(seq, horizon, maybe_count(params, "tail_start", path, kMaxHorizon), jobs);
    } else if (checker == "mean_expansivity") {
      r.verdict = estimate_mean_expansivity(seq, horizon, maybe_count(params, "tail_start", path, kMaxHorizon), jobs);
    } else if (checker == "shadowing") {
      std::vector<ShadowRow> rows;
      r.verdict = check_shadowing_property(seq, shadow_opts(), &rows);
      std::ostringstream os;
      write_shadowing_csv(os, rows);
      r.csv = std::make_pair(std::string("shadowing.csv"), os.str());
    } else if (checker == "iterate_alsp_consistency") {
      const std::size_t k = get_count(params, "k", path, 1, 1 << 16);
      const double eq_eps = real_or(params, "equicontinuity_eps", 0.1, path, 1e-12, 1e6);
      const Verdict eq = check_equicontinuity(seq, eq_eps, horizon, jobs);
      r.details["equicontinuity"] = verdict_to_json(eq, space);
      if (!eq.holds) {
        r.hypothesis_violated = true;
        r.verdict.checker = "iterate_alsp_consistency";
        r.verdict.horizon = horizon;
        r.verdict.resolution = space.resolution();
        r.verdict.notes.push_back("HYPOTHESIS-VIOLATED: system not equicontinuous at eps " + Json(eq_eps).dump());
      } else {
        r.verdict = check_iterate_alsp_consistency(seq, k, shadow_opts(), eq);
      }
    } else if (checker == "chain_transitivity") {
      ChainOptions o;
      o.max_length = maybe_count(params, "max_length", path, 1u << 24);
      if (!seq.period()) o.horizon = horizon;
      o.jobs = jobs;
      r.verdict = check_chain_transitive(seq, grid_or(params, "delta_grid", {0.2, 0.1, 0.05}, path), o);
    } else if (checker == "R_delta") {
      ChainOptions o;
      o.max_length = maybe_count(params, "max_length", path, 1u << 24);
      if (!seq.period()) o.horizon = horizon;
      o.jobs = jobs;
      r.verdict = check_R_delta(seq, point_param(space, params, "x", path), point_param(space, params, "y", path),
                                get_real(params, "delta", path, 1e-12, 1e6), o);
    } else if (checker == "transitivity") {
      r.verdict = check_transitive(seq, grid_or(params, "eps_grid", {0.1}, path), horizon, jobs);
    } else if (checker == "commutativity") {
      r.verdict = check_commutativity(seq, horizon);
    } else if (checker == "surjectivity") {
      r.verdict = check_surjectivity(seq, horizon);
    } else if (checker == "stability") {
      const MapSequence& g = system_ref(systems, params, "partner", path);
      ConjugacyOptions o;
      o.eps = real_or(params, "eps", o.eps, path, 1e-12, 1e6);
      o.horizon = horizon;
      if (params.contains("mode")) {
        try {
          o.mode = conjugacy_mode_from_string(get_string(params, "mode", path));
        } catch (const ArgumentError& e) {
          throw ConfigError(path + ".mode", e.what());
        }
      }
      o.tail_start = maybe_count(params, "tail_start", path, kMaxHorizon);
      if (params.contains("expansivity")) o.expansivity = get_real(params, "expansivity", path, 0.0, 1e6);
      if (params.contains("delta")) o.delta = get_real(params, "delta", path, 0.0, 1e6);
      o.jobs = jobs;
      const ConjugacyMap h = construct_conjugacy(seq, g, o);
      r.verdict = verify_conjugacy(seq, g, h, o.eps);
      const Verdict uniq = check_uniqueness(seq, g, h, o.eps, jobs);
      const Verdict inj = check_injectivity(g, h, o.eps, h.expansivity.value_or(0.0));
      Json& d = r.details;
      d["mode"] = to_string(h.mode);
      d["eps"] = h.eps;
      d["gamma"] = h.gamma;
      d["expansivity"] = h.expansivity ? Json(*h.expansivity) : Json(nullptr);
      d["closeness"] = h.closeness;
      d["residual"] = h.semiconj_residual;
      d["composition_residual"] = h.composition_residual;
      d["residual_skipped"] = h.residual_skipped;
      d["residual_bound"] = h.residual_bound;
      d["residual_within_bound"] = h.residual_within_bound;
      d["widened"] = h.widened;
      d["failed_at"] = h.failed_at ? Json(space.describe(*h.failed_at)) : Json(nullptr);
      d["unique"] = uniq.holds;
      d["uniqueness"] = verdict_to_json(uniq, space);
      d["injective"] = inj.holds;
      d["injectivity"] = verdict_to_json(inj, space);
      Json mod = Json::array();
      for (const auto& [lam, alpha] : h.continuity_modulus) mod.push_back({{"lambda", lam}, {"alpha", alpha}});
      d["continuity_modulus"] = mod;
      d["hypothesis_violated"] = h.hypothesis_violated;
      d["hypothesis_notes"] = h.hypothesis_notes;
      r.hypothesis_violated = h.hypothesis_violated;
      std::ostringstream os;
      write_conjugacy_csv(os, space, h);
      r.csv = std::make_pair(std::string("conjugacy.csv"), os.str());
    } else {
      throw ConfigError(path + ".checker", "unknown checker '" + checker + "'");
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(path, e.what());
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  for (const auto& n : r.verdict.notes) {
    if (n.rfind("HYPOTHESIS-VIOLATED", 0) == 0) r.hypothesis_violated = true;
  }
  return r;
}

bool expectation_met(const Json& expect, const CheckResult& r, std::vector<std::string>& why) {
  const std::size_t before = why.size();
  const Verdict& v = r.verdict;
  if (expect.contains("holds") && expect.at("holds").get<bool>() != v.holds) {
    why.push_back("holds is " + std::string(v.holds ? "true" : "false"));
  }
  if (expect.contains("constant_min")) {
    if (!v.constant || *v.constant < expect.at("constant_min").get<double>()) {
      why.push_back("constant below " + expect.at("constant_min").dump());
    }
  }
  if (expect.contains("constant_max")) {
    if (!v.constant || *v.constant > expect.at("constant_max").get<double>()) {
      why.push_back("constant above " + expect.at("constant_max").dump());
    }
  }
  if (expect.contains("witness") && expect.at("witness").get<bool>() != v.witness.has_value()) {
    why.push_back(v.witness ? "unexpected witness" : "missing witness");
  }
  if (expect.contains("details")) {
    for (const auto& [key, want] : expect.at("details").items()) {
      auto bound = [&](const std::string& suffix) {
        return key.size() > suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0;
      };
      if (bound("_min") || bound("_max")) {
        const std::string base = key.substr(0, key.size() - 4);
        if (!r.details.contains(base) || !r.details.at(base).is_number()) {
          why.push_back("detail " + base + " missing");
        } else if (bound("_min") ? r.details.at(base).get<double>() < want.get<double>()
                                 : r.details.at(base).get<double>() > want.get<double>()) {
          why.push_back("detail " + base + " = " + r.details.at(base).dump() + " violates " + key);
        }
      } else if (!r.details.contains(key) || r.details.at(key) != want) {
        why.push_back("detail " + key + " differs from " + want.dump());
      }
    }
  }
  return why.size() == before;
}

ExperimentReport run_experiment(const Json& config_in, const RunOverrides& ov) {
  if (!config_in.is_object()) throw ConfigError("", "config must be an object");
  const int schema = static_cast<int>(get_count(config_in, "schema", "", 1, 1000));
  if (schema != kConfigSchema) throw ConfigError("schema", "unsupported schema " + std::to_string(schema));
  Json config = config_in;
  const Json& checks_in = config.contains("checks") ? config.at("checks") : Json();
  if (!checks_in.is_array() || checks_in.empty()) throw ConfigError("checks", "expected a non-empty array");

  // apply overrides so the hash describes what actually ran
  for (auto& c : config.at("checks")) {
    if (!c.is_object()) throw ConfigError("checks", "entries must be objects");
    Json& p = c["params"];
    if (p.is_null()) p = Json::object();
    const std::string checker = c.value("checker", "");
    const bool sampled = checker == "mean_equicontinuity" || checker == "shadowing" ||
                         checker == "iterate_alsp_consistency";
    if (ov.seed && sampled) p["seed"] = *ov.seed;
    if (ov.horizon) p["horizon"] = *ov.horizon;
    if (ov.eps && p.contains("eps")) p["eps"] = *ov.eps;
    if (ov.delta_grid && (checker == "shadowing" || checker == "chain_transitivity")) p["delta_grid"] = *ov.delta_grid;
  }

  const Space space = space_from_json(config.contains("space") ? config.at("space") : Json(), "space");
  const auto systems = systems_from_json(config.contains("systems") ? config.at("systems") : Json(), space);

  ExperimentReport out;
  Json& rep = out.report;
  rep["schema"] = kConfigSchema;
  rep["name"] = config.value("name", "");
  rep["config_hash"] = config_hash(config);
  rep["space"] = space_to_json(space);
  Json sys = Json::object();
  for (const auto& [name, s] : systems) {
    sys[name] = {{"describe", s.describe()},
                 {"period", s.period() ? Json(*s.period()) : Json(nullptr)},
                 {"space", s.space().name()}};
  }
  rep["systems"] = sys;
  Json seeds = Json::array();
  Json results = Json::array();
  std::set<std::string> ids;
  const Json& checks = config.at("checks");
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Json& c = checks[i];
    const std::string path = "checks[" + std::to_string(i) + "]";
    const std::string checker = get_string(c, "checker", path);
    const std::string id = c.contains("id") ? get_string(c, "id", path) : checker + "-" + std::to_string(i);
    if (!ids.insert(id).second) throw ConfigError(path + ".id", "duplicate id '" + id + "'");
    const CheckResult r = run_checker(checker, systems, c.at("params"), path + ".params", ov.jobs);
    const Space& vs = systems.at(c.at("params").at("system").get<std::string>()).space();
    Json row;
    row["id"] = id;
    row["checker"] = checker;
    row["params"] = c.at("params");
    row["verdict"] = verdict_to_json(r.verdict, vs);
    row["details"] = r.details;
    row["hypothesis_violated"] = r.hypothesis_violated;
    if (r.verdict.seed) seeds.push_back(*r.verdict.seed);
    if (c.contains("expect")) {
      std::vector<std::string> why;
      bool ok = false;
      try {
        ok = expectation_met(c.at("expect"), r, why);
      } catch (const Json::exception& e) {
        throw ConfigError(path + ".expect", e.what());
      }
      row["expect"] = c.at("expect");
      row["pass"] = ok;
      row["mismatch"] = why;
      out.all_pass = out.all_pass && ok;
    }
    if (c.contains("basis")) row["basis"] = c.at("basis");
    if (c.contains("claim")) row["claim"] = c.at("claim");
    out.hypothesis_violated = out.hypothesis_violated || r.hypothesis_violated;
    if (r.csv) out.csv.emplace_back(id + "." + r.csv->first, r.csv->second);
    results.push_back(row);
  }
  rep["seeds"] = seeds;
  rep["checks"] = results;
  rep["all_pass"] = out.all_pass;
  rep["hypothesis_violated"] = out.hypothesis_violated;
  return out;
}

Json parse_config(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // locate the byte offset as line:column
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col), "JSON syntax error");
  }
}

Json load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError(file, "cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str(), file);
}

}  // namespace nas
