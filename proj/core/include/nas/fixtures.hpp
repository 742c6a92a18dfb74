#pragma once

#include <string>
#include <vector>

#include "nas/experiment.hpp"

namespace nas {

/// $NAS_FIXTURE_DIR when set, else the catalog shipped with the sources.
std::string fixture_dir();

/// Fixture names (file stems of *.json), sorted.
std::vector<std::string> list_fixtures(const std::string& dir = fixture_dir());

/// Loads <dir>/<name>.json and runs every expectation. Unknown names throw
/// ConfigError listing the catalog.
ExperimentReport run_fixture(const std::string& name, const RunOverrides& overrides = {},
                             const std::string& dir = fixture_dir());

}  // namespace nas
