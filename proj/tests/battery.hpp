#pragma once

// Shared by the property tests and the acceptance binary: a battery of small
// systems plus the cross-checker implications evaluated over it.

#include <string>
#include <vector>

#include "nas/map_sequence.hpp"

namespace nas::battery {

struct Entry {
  std::string name;
  MapSequence seq;
  std::size_t horizon = 96;  // divisible by 2, 3, 4 and 6 so tails line up under iteration
};

/// Systems of every catalog fixture whose space has at most 256 points, plus
/// a few analytic extras (rotations, odd-grid doubling, periodic scaling).
std::vector<Entry> fixture_battery();

/// Families of systems sharing one small space, for product laws.
struct Family {
  std::string name;
  std::vector<Entry> members;
};
std::vector<Family> product_families();

/// Outcome of one implication over the battery. `applicable` counts the
/// cases whose premises held; `violations` names every case where the
/// conclusion then failed.
struct Outcome {
  std::string name;
  std::size_t cases = 0;
  std::size_t applicable = 0;
  std::vector<std::string> violations;
  std::vector<std::string> log;

  bool ok() const { return violations.empty() && applicable > 0; }
};

// Expansivity family
Outcome expansivity_product_law();         // plain, recurrent and mean
Outcome mean_equicontinuity_product_law();
Outcome mean_equicontinuity_passes_to_iterates();
Outcome recurrent_expansivity_iterates_under_equicontinuity();
Outcome mean_expansivity_from_iterate();
Outcome periodic_mean_expansivity_to_iterates();
// Shadowing family
Outcome almost_shadowing_iterates_under_equicontinuity();
Outcome shadowing_product_law();           // strong average and almost
// The two designated counterexamples fail exactly their advertised clause.
Outcome block_shift_counterexample();
Outcome power_pairs_counterexample();

std::vector<Outcome> implication_suite();
/// Equicontinuous and transitive implies chain transitive; surjective, chain
/// transitive and shadowing implies transitive. One verdict table feeds both.
std::vector<Outcome> chain_suite();

}  // namespace nas::battery
