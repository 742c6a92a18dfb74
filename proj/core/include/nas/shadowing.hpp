#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nas/map_sequence.hpp"
#include "nas/orbits.hpp"
#include "nas/verdict.hpp"

namespace nas {

/// Acceptance functional of a candidate shadow z with errors e_n = d(F_n z, x_n):
///  Plain          max_n e_n
///  Almost         max(e_0, max_{n in tail} e_n)
///  Average        max_{n in tail} (1/n) sum_{i<n} e_i
///  StrongAverage  max(e_0, Average)
/// The tail is [tail_start, T] (default T/2); Cesaro windows run n = max(tail_start,1)..T+1.
enum class ShadowMode { Plain, Almost, Average, StrongAverage };

std::string to_string(ShadowMode mode);
ShadowMode shadow_mode_from_string(const std::string& name);

struct ShadowingResult {
  std::optional<PointId> shadow_point;
  std::vector<double> error_profile;
  double max_error = 0.0;
  double tail_error = 0.0;
  double cesaro_error = 0.0;
  double initial_closeness = 0.0;
  double functional = 0.0;
  bool success = false;
  /// Exactly one candidate met eps; only set after an exhaustive scan.
  bool unique = false;
  std::size_t qualifying = 0;
  std::size_t tail_start = 0;
  bool exhaustive = false;
  /// On failure: "initial closeness" when some candidate meets the tail
  /// clause but none also starts within eps, otherwise the tail/max clause.
  std::string failed_clause;
};

struct ShadowSearchOptions {
  std::optional<std::size_t> tail_start;
  /// Restrict the scan; all enumerated points when empty.
  std::vector<PointId> candidates;
  std::size_t jobs = 0;
};

ShadowingResult find_shadow_point(const MapSequence& seq, const PseudoOrbit& po, double eps, ShadowMode mode,
                                  const ShadowSearchOptions& opt = {});

/// Errors, summaries and functional of one given candidate.
ShadowingResult evaluate_shadow(const MapSequence& seq, const PseudoOrbit& po, const PointId& z, ShadowMode mode,
                                std::optional<std::size_t> tail_start = std::nullopt);

struct ShadowingOptions {
  double eps = 0.1;
  std::vector<double> delta_grid{0.2, 0.1, 0.05, 0.02, 0.01};
  std::size_t sample = 50;
  std::size_t horizon = 200;
  std::uint64_t seed = 1;
  ShadowMode mode = ShadowMode::Plain;
  /// Window length N of generated average pseudo-orbits; horizon/10 when unset.
  std::optional<std::size_t> n_delta;
  std::optional<std::size_t> tail_start;
  std::size_t jobs = 0;
};

/// One line of the shadowing CSV report.
struct ShadowRow {
  double delta = 0.0;
  std::size_t sample_id = 0;
  bool success = false;
  double max_error = 0.0;
  double tail_error = 0.0;
  double cesaro_error = 0.0;
  std::string shadow_point;
};

/// Largest delta of the (descending) grid for which every sampled
/// pseudo-orbit is eps-shadowed in the selected mode. Deltas at or below the
/// minimum pair distance are skipped: such pseudo-orbits are true orbits.
Verdict check_shadowing_property(const MapSequence& seq, const ShadowingOptions& opt,
                                 std::vector<ShadowRow>* rows = nullptr);

/// Runs the almost-shadowing check on seq and on its k-th iterate (horizon
/// divided by k) and holds iff both verdicts agree. Requires a holding
/// equicontinuity verdict for seq.
Verdict check_iterate_alsp_consistency(const MapSequence& seq, std::size_t k, const ShadowingOptions& opt,
                                       const std::optional<Verdict>& equicontinuity);

void write_shadowing_csv(std::ostream& out, const std::vector<ShadowRow>& rows);

}  // namespace nas
