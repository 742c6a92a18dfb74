#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nas/map_sequence.hpp"
#include "nas/verdict.hpp"

namespace nas {

/// delta-transition graph of one time class: x -> y iff d(f_j(x), y) < delta,
/// over the enumerated points. Rows are bitsets.
struct ChainGraph {
  double delta = 0.0;
  std::size_t time_class = 1;  // generator index j of this class
  std::size_t points = 0;
  std::size_t words = 0;
  std::vector<std::uint64_t> bits;

  bool edge(std::size_t from, std::size_t to) const { return (bits[from * words + to / 64] >> (to % 64)) & 1U; }
  const std::uint64_t* row(std::size_t from) const { return bits.data() + from * words; }
};

struct ChainOptions {
  /// Uniform chain-length bound; points x classes when unset.
  std::optional<std::size_t> max_length;
  /// Number of time classes for aperiodic systems, which are then treated as
  /// their periodic truncation. Required for aperiodic systems.
  std::optional<std::size_t> horizon;
  std::size_t jobs = 0;
};

/// One graph per time class of a full cycle.
std::vector<ChainGraph> build_chain_graphs(const MapSequence& seq, double delta, const ChainOptions& opt = {});

/// Smallest n <= L_max such that a delta-chain of length n runs from x to y
/// starting at every time class; constant = n.
Verdict check_R_delta(const MapSequence& seq, const PointId& x, const PointId& y, double delta,
                      const ChainOptions& opt = {});

/// x R_delta y both ways for all ordered pairs at every delta of the grid
/// (deltas at or below the minimum pair distance are skipped). constant =
/// smallest delta verified.
Verdict check_chain_transitive(const MapSequence& seq, const std::vector<double>& delta_grid,
                               const ChainOptions& opt = {});

/// Open sets are eps-balls around enumerated points; holds iff for every
/// ball pair (U, V) one n <= horizon makes F_[i, i+n-1](U) meet V for all time
/// classes i. constant = smallest eps verified.
Verdict check_transitive(const MapSequence& seq, const std::vector<double>& eps_grid, std::size_t horizon,
                         std::size_t jobs = 0);

}  // namespace nas
