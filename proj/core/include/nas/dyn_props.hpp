#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "nas/map_sequence.hpp"
#include "nas/verdict.hpp"

namespace nas {

/// Largest grid-measurable delta such that d(x,y) < delta forces
/// d(f_i x, f_i y) < eps for every generator index i in the span. The
/// estimate is the smallest distance of a violating pair; it holds when the
/// estimate exceeds the minimum pair distance of the model.
Verdict check_equicontinuity(const MapSequence& seq, double eps, std::size_t horizon, std::size_t jobs = 0);

struct MeanEquicontinuityOptions {
  double eps = 0.1;
  std::size_t trials = 200;
  std::size_t length = 200;  // sequence length T
  std::size_t horizon = 200;  // generator span for aperiodic systems
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
};

/// Randomised falsification of mean equicontinuity. Each trial pairs a random
/// base sequence with a copy perturbed inside a per-term budget; budgets run
/// from the minimum pair distance up to 2*eps across trials. A trial falsifies
/// when some pushed Cesaro average reaches eps; the delta estimate is the
/// smallest input average among falsifying trials (capped at eps).
Verdict check_mean_equicontinuity(const MapSequence& seq, const MeanEquicontinuityOptions& opt);

/// c* = min over distinct pairs of max_{0<=n<=horizon} d(F_n x, F_n y).
Verdict estimate_expansivity(const MapSequence& seq, std::size_t horizon, std::size_t jobs = 0);
/// As above with the max restricted to the tail window [tail_start, horizon]
/// (default horizon/2).
Verdict estimate_recurrent_expansivity(const MapSequence& seq, std::size_t horizon,
                                       std::optional<std::size_t> tail_start = std::nullopt, std::size_t jobs = 0);
/// c* = min over distinct pairs of max_{n in [tail_start, horizon], n>=1} of
/// (1/n) sum_{i<n} d(F_i x, F_i y).
Verdict estimate_mean_expansivity(const MapSequence& seq, std::size_t horizon,
                                  std::optional<std::size_t> tail_start = std::nullopt, std::size_t jobs = 0);

/// Threshold used by every separation-type "holds" decision: the minimum
/// distance between distinct model points.
double separation_floor(const Space& space);

}  // namespace nas
