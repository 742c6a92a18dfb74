// nas: batch front end for the checkers. Exit 0 when every declared
// expectation passes, 1 on a failed expectation or violated hypothesis,
// 2 on configuration errors.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "nas/fixtures.hpp"
#include "nas/parallel.hpp"

namespace fs = std::filesystem;
using namespace nas;

namespace {

struct Common {
  std::string config;
  std::string fixture;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
  std::optional<double> eps;
  std::vector<double> delta_grid;
  std::string out_dir = "nas-out";
  std::optional<std::size_t> jobs;
  bool quiet = false;
};

void add_common(CLI::App* app, Common& c, bool source) {
  if (source) {
    app->add_option("--config", c.config, "experiment config (JSON)");
    app->add_option("--fixture", c.fixture, "fixture name from the catalog");
  }
  app->add_option("--seed", c.seed, "seed for sampled checkers");
  app->add_option("--horizon", c.horizon, "horizon T for every check");
  app->add_option("--eps", c.eps, "eps for checks that take one");
  app->add_option("--delta-grid", c.delta_grid, "descending delta grid")->delimiter(',');
  app->add_option("--out-dir", c.out_dir, "directory for report.json and CSV tables");
  app->add_option("--jobs", c.jobs, "worker threads (default: NAS_JOBS or 1)");
  app->add_flag("--quiet", c.quiet, "no per-check lines on stdout");
}

RunOverrides overrides_of(const Common& c) {
  RunOverrides o;
  o.seed = c.seed;
  o.horizon = c.horizon;
  o.eps = c.eps;
  if (!c.delta_grid.empty()) o.delta_grid = c.delta_grid;
  o.jobs = c.jobs.value_or(0);
  return o;
}

Json source_config(const Common& c) {
  if (!c.config.empty() && !c.fixture.empty()) throw ConfigError("--config", "give either --config or --fixture");
  if (!c.config.empty()) return load_config(c.config);
  if (!c.fixture.empty()) {
    const auto names = list_fixtures();
    if (std::find(names.begin(), names.end(), c.fixture) == names.end()) {
      throw ConfigError("--fixture", "unknown fixture '" + c.fixture + "'");
    }
    return load_config((fs::path(fixture_dir()) / (c.fixture + ".json")).string());
  }
  throw ConfigError("--config", "a config or fixture is required");
}

void write_atomic(const fs::path& file, const std::string& text) {
  const fs::path tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw ConfigError(file.string(), "cannot write");
    out << text;
  }
  fs::rename(tmp, file);
}

int finish(const ExperimentReport& r, const Common& c) {
  fs::create_directories(c.out_dir);
  for (const auto& [name, text] : r.csv) write_atomic(fs::path(c.out_dir) / name, text);
  write_atomic(fs::path(c.out_dir) / "report.json", r.report.dump(2) + "\n");
  if (!c.quiet) {
    for (const auto& row : r.report["checks"]) {
      const bool has_expect = row.contains("pass");
      const char* tag = !has_expect ? "----" : row["pass"].get<bool>() ? "PASS" : "FAIL";
      const auto& v = row["verdict"];
      std::cout << tag << "  " << row["id"].get<std::string>() << "  holds=" << (v["holds"].get<bool>() ? "true" : "false")
                << "  constant=" << v["constant"].dump() << (row["hypothesis_violated"].get<bool>() ? "  HYPOTHESIS-VIOLATED" : "")
                << "\n";
    }
    std::cout << "report: " << (fs::path(c.out_dir) / "report.json").string() << "  hash "
              << r.report["config_hash"].get<std::string>() << "\n";
  }
  return (r.all_pass && !r.hypothesis_violated) ? 0 : 1;
}

// Keeps the config's checks of the given kinds; when there are none, adds
// one per system from `make`.
Json focus(Json cfg, const std::set<std::string>& kinds, const std::function<Json(const std::string&)>& make) {
  Json keep = Json::array();
  for (const auto& c : cfg["checks"]) {
    if (kinds.count(c.value("checker", ""))) keep.push_back(c);
  }
  if (keep.empty()) {
    for (const auto& [name, _] : cfg["systems"].items()) {
      Json c = make(name);
      if (!c.is_null()) keep.push_back(c);
    }
  }
  if (keep.empty()) throw ConfigError("checks", "nothing to run for this subcommand");
  cfg["checks"] = keep;
  return cfg;
}

std::vector<std::string> split_param(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--param", "expected key=value, got '" + kv + "'");
  return {kv.substr(0, eq), kv.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nas: checkers for non-autonomous discrete systems on finite models"};
  app.require_subcommand(1);

  Common run_c, fix_c, check_c, stab_c, chain_c, shadow_c;
  std::string fixture_name;
  bool list = false;
  std::string checker, system_name;
  std::vector<std::string> params;
  std::string mode;

  auto* run = app.add_subcommand("run", "run an experiment config");
  add_common(run, run_c, false);
  run->add_option("config,--config", run_c.config, "experiment config (JSON)");

  auto* fix = app.add_subcommand("fixture", "run a fixture from the catalog");
  add_common(fix, fix_c, false);
  fix->add_option("name", fixture_name, "fixture name");
  fix->add_flag("--list", list, "list fixture names");

  auto* check = app.add_subcommand("check", "run one checker on a system of a config");
  add_common(check, check_c, true);
  check->add_option("checker", checker, "checker name")->required();
  check->add_option("--system", system_name, "system name (default: first)");
  check->add_option("--param", params, "extra checker parameter key=value (JSON value)");

  auto* stab = app.add_subcommand("stability", "construct and verify conjugacies");
  add_common(stab, stab_c, true);
  stab->add_option("--mode", mode, "Recurrent | Plain | Mean");

  auto* chain = app.add_subcommand("chain", "chain transitivity and transitivity");
  add_common(chain, chain_c, true);

  auto* shadow = app.add_subcommand("shadow", "shadowing property in one mode");
  add_common(shadow, shadow_c, true);
  shadow->add_option("--mode", mode, "Plain | Almost | Average | StrongAverage");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Common* active = run->parsed() ? &run_c : fix->parsed() ? &fix_c : check->parsed() ? &check_c
                 : stab->parsed() ? &stab_c : chain->parsed() ? &chain_c : &shadow_c;
  if (active->jobs) set_default_jobs(*active->jobs);

  try {
    const RunOverrides ov = overrides_of(*active);
    if (run->parsed()) {
      if (run_c.config.empty()) throw ConfigError("config", "missing config path");
      return finish(run_experiment(load_config(run_c.config), ov), run_c);
    }
    if (fix->parsed()) {
      if (list) {
        for (const auto& n : list_fixtures()) std::cout << n << "\n";
        return 0;
      }
      if (fixture_name.empty()) throw ConfigError("name", "missing fixture name");
      return finish(run_fixture(fixture_name, ov), fix_c);
    }
    if (check->parsed()) {
      Json cfg = source_config(check_c);
      if (system_name.empty()) system_name = cfg.at("systems").begin().key();
      Json p = {{"system", system_name}};
      for (const auto& kv : params) {
        const auto parts = split_param(kv);
        try {
          p[parts[0]] = Json::parse(parts[1]);
        } catch (const Json::parse_error&) {
          p[parts[0]] = parts[1];
        }
      }
      if (check_c.eps) p["eps"] = *check_c.eps;
      cfg["checks"] = Json::array({Json{{"id", checker}, {"checker", checker}, {"params", p}}});
      return finish(run_experiment(cfg, ov), check_c);
    }
    if (stab->parsed()) {
      Json cfg = focus(source_config(stab_c), {"stability"}, [](const std::string&) { return Json(); });
      if (!mode.empty())
        for (auto& c : cfg["checks"]) c["params"]["mode"] = mode;
      return finish(run_experiment(cfg, ov), stab_c);
    }
    if (chain->parsed()) {
      Json cfg = focus(source_config(chain_c), {"chain_transitivity", "transitivity", "R_delta"},
                       [](const std::string& name) {
                         return Json{{"id", name + "-chain"},
                                     {"checker", "chain_transitivity"},
                                     {"params", {{"system", name}}}};
                       });
      return finish(run_experiment(cfg, ov), chain_c);
    }
    Json cfg = focus(source_config(shadow_c), {"shadowing"}, [&](const std::string& name) {
      return Json{{"id", name + "-shadowing"},
                  {"checker", "shadowing"},
                  {"params", {{"system", name}, {"eps", 0.1}, {"seed", shadow_c.seed.value_or(1)}}}};
    });
    if (!mode.empty())
      for (auto& c : cfg["checks"]) c["params"]["mode"] = mode;
    return finish(run_experiment(cfg, ov), shadow_c);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
