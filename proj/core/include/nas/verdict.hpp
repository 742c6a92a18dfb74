#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nas/metric_space.hpp"

namespace nas {

/// Evidence attached to a failed (or notable) check.
struct Witness {
  std::vector<PointId> points;
  std::optional<std::size_t> index;     // orbit index, generator index or time class
  std::optional<std::size_t> window_n;  // Cesaro window length
  std::optional<std::size_t> window_k;  // Cesaro window start
  std::optional<double> value;          // the offending quantity
  std::string note;
};

/// Outcome of a property checker on a finite model.
///
/// `horizon` and `resolution` are always filled so that finite-horizon and
/// grid approximations are visible in every report.
struct Verdict {
  std::string checker;
  bool holds = false;
  std::optional<Witness> witness;
  std::optional<double> constant;
  std::size_t horizon = 0;
  double resolution = 0.0;
  bool exhaustive = false;
  /// True when the horizon provably covers every generator index (periodic
  /// systems); false for aperiodic pattern systems truncated at `horizon`.
  bool horizon_exact = false;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> notes;
};

}  // namespace nas
