#include "nas/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>

namespace nas {

std::string fixture_dir() {
  if (const char* env = std::getenv("NAS_FIXTURE_DIR"); env && *env) return env;
  return NAS_DEFAULT_FIXTURE_DIR;
}

std::vector<std::string> list_fixtures(const std::string& dir) {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& e : std::filesystem::directory_iterator(dir, ec)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

ExperimentReport run_fixture(const std::string& name, const RunOverrides& overrides, const std::string& dir) {
  const auto names = list_fixtures(dir);
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string known;
    for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("fixture", "unknown fixture '" + name + "' (known: " + known + ")");
  }
  return run_experiment(load_config((std::filesystem::path(dir) / (name + ".json")).string()), overrides);
}

}  // namespace nas
