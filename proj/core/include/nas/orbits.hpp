#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nas/map_sequence.hpp"
#include "nas/verdict.hpp"

namespace nas {

enum class OrbitKind { Plain, Average };

std::string to_string(OrbitKind kind);

/// x_0, ..., x_T with the tolerance it was built for. Average orbits carry
/// the window length N from which the Cesaro bound must hold.
struct PseudoOrbit {
  std::vector<PointId> points;
  double delta = 0.0;
  OrbitKind kind = OrbitKind::Plain;
  std::size_t n_delta = 1;
  std::string source;

  std::size_t horizon() const { return points.empty() ? 0 : points.size() - 1; }
};

/// Exact orbit F_0(x), ..., F_T(x); delta is set to the grid step.
PseudoOrbit true_orbit(const MapSequence& seq, const PointId& x, std::size_t T);

/// Each step applies f_{i+1} and then jumps to a uniformly chosen point of the
/// strict delta-ball around the image.
PseudoOrbit perturbed_orbit(const MapSequence& seq, const PointId& x, std::size_t T, double delta,
                            std::uint64_t seed);

/// Average pseudo-orbit: exact steps except for one jump every `n_delta`
/// steps, with jumps of size < delta*(n_delta+1)/2 so every window of length
/// >= n_delta averages below delta. Individual jumps may exceed delta.
PseudoOrbit average_pseudo_orbit(const MapSequence& seq, const PointId& x, std::size_t T, double delta,
                                 std::size_t n_delta, std::uint64_t seed);

/// Step errors d(f_{i+1}(x_i), x_{i+1}) for i = 0..T-1.
std::vector<double> step_errors(const MapSequence& seq, const PseudoOrbit& po);

/// Checks the defining inequality at every index (Plain) or every window
/// (n, k) with n >= n_delta inside the horizon (Average). The witness carries
/// the first violation.
Verdict validate_pseudo_orbit(const MapSequence& seq, const PseudoOrbit& po);

/// CSV with a comment header carrying delta/kind/N and one row per index:
/// index,a,b,coordinate.
void write_orbit_csv(std::ostream& out, const Space& space, const PseudoOrbit& po);
PseudoOrbit read_orbit_csv(std::istream& in, const Space& space);

}  // namespace nas
