#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nas/config.hpp"

namespace nas {

/// Outcome of one checker invocation: the verdict, checker-specific details
/// and an optional CSV table (name, contents).
struct CheckResult {
  Verdict verdict;
  Json details = Json::object();
  bool hypothesis_violated = false;
  std::optional<std::pair<std::string, std::string>> csv;
};

/// Checkers: equicontinuity, mean_equicontinuity, expansivity,
/// recurrent_expansivity, mean_expansivity, shadowing,
/// iterate_alsp_consistency, chain_transitivity, R_delta, transitivity,
/// commutativity, surjectivity, stability.
///
/// `params` holds "system" (and "partner" for stability), an optional
/// "iterate" power applied first, and the checker's numeric parameters.
/// Sampled checkers require "seed".
CheckResult run_checker(const std::string& checker, const std::map<std::string, MapSequence>& systems,
                        const Json& params, const std::string& path, std::size_t jobs);

const std::vector<std::string>& checker_names();

/// Command-line overrides applied to every check that takes the parameter.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> horizon;
  std::optional<double> eps;
  std::optional<std::vector<double>> delta_grid;
  std::size_t jobs = 0;
};

/// Does `expect` ({"holds", "constant_min", "constant_max", "witness",
/// "details": {...}}) match the result? Detail keys ending in _min/_max bound
/// the like-named detail, others compare for equality. Mismatches are
/// appended to `why`.
bool expectation_met(const Json& expect, const CheckResult& r, std::vector<std::string>& why);

struct ExperimentReport {
  Json report;
  bool all_pass = true;
  bool hypothesis_violated = false;
  std::vector<std::pair<std::string, std::string>> csv;  // file name, contents
};

/// Validates and runs a config:
///   {"schema": 1, "name": ..., "space": {...}, "systems": {...},
///    "checks": [{"id", "checker", "params", "expect", "basis", "claim"}]}
/// The report embeds the hash of the effective (overridden) config, every
/// verdict's horizon and resolution, and all seeds.
ExperimentReport run_experiment(const Json& config, const RunOverrides& overrides = {});

/// Parses JSON text; syntax errors become ConfigError with the byte offset.
Json parse_config(const std::string& text, const std::string& origin);
Json load_config(const std::string& file);

}  // namespace nas
