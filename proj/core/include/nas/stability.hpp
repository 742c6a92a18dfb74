#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nas/map_sequence.hpp"
#include "nas/shadowing.hpp"
#include "nas/verdict.hpp"

namespace nas {

/// Which shadowing notion builds h:
///  Recurrent  almost shadowing (initial + tail closeness)
///  Plain      ordinary shadowing
///  Mean       strong average shadowing
enum class ConjugacyMode { Recurrent, Plain, Mean };

std::string to_string(ConjugacyMode mode);
ConjugacyMode conjugacy_mode_from_string(const std::string& name);
ShadowMode shadow_mode_of(ConjugacyMode mode);

/// h tabulated on the enumerated points of the space; images may be lattice
/// labels outside the enumerated sample (LineWindow).
///
/// Diagnostics are recomputed from the table by `conjugacy_diagnostics`, never
/// carried over from the construction.
struct ConjugacyMap {
  ConjugacyMode mode = ConjugacyMode::Plain;
  double eps = 0.0;
  std::size_t horizon = 0;
  std::optional<std::size_t> tail_start;
  std::vector<PointId> domain;
  std::vector<PointId> table;  // table[i] = h(domain[i])

  // construction record
  std::vector<double> shadow_error;     // functional of h(x) against {G_n x}
  std::vector<std::size_t> qualifying;  // candidates meeting eps per point
  std::size_t widened = 0;              // points whose search left B(x, eps)
  std::optional<PointId> failed_at;     // first x without a qualifying shadow
  double gamma = 0.0;
  std::optional<double> expansivity;
  bool hypothesis_violated = false;
  std::vector<std::string> hypothesis_notes;

  // diagnostics
  double closeness = 0.0;
  double semiconj_residual = 0.0;
  double composition_residual = 0.0;
  std::size_t residual_skipped = 0;  // (i, x) with g_i(x) outside the table
  double residual_bound = 0.0;
  bool residual_within_bound = true;
  std::vector<std::pair<double, double>> continuity_modulus;  // (lambda, alpha)
  bool injective = true;
  std::optional<std::pair<PointId, PointId>> collision;

  std::optional<PointId> at(const Space& space, const PointId& x) const;
};

struct ConjugacyOptions {
  double eps = 0.05;
  std::size_t horizon = 12;
  ConjugacyMode mode = ConjugacyMode::Plain;
  std::optional<std::size_t> tail_start;
  /// Expansivity constant of F; estimated with the mode's estimator over the
  /// horizon when unset.
  std::optional<double> expansivity;
  /// delta the shadowing checker derived for eps; gamma(F, G) is compared
  /// against it when given.
  std::optional<double> delta;
  std::vector<double> lambdas{0.5, 0.2, 0.1, 0.05, 0.02, 0.01};
  std::size_t jobs = 0;
};

/// h(x) = shadow of {G_n(x)}_{n<=T} as a pseudo-orbit of F in the mode's
/// sense, searched in B(x, eps) first and in the whole space if that ball has
/// no qualifying point. Runs even when hypotheses fail; the map is then
/// stamped `hypothesis_violated`.
ConjugacyMap construct_conjugacy(const MapSequence& f, const MapSequence& g, const ConjugacyOptions& opt);

/// Recomputes closeness, residuals, continuity modulus and injectivity from
/// the table.
void conjugacy_diagnostics(const MapSequence& f, const MapSequence& g, ConjugacyMap& h,
                           const std::vector<double>& lambdas = {0.5, 0.2, 0.1, 0.05, 0.02, 0.01},
                           std::size_t jobs = 0);

/// Holds iff f_i o h = h o g_i up to 2 * resolution, F_n o h = h o G_n for
/// n <= T up to the same tolerance, and closeness < eps.
Verdict verify_conjugacy(const MapSequence& f, const MapSequence& g, const ConjugacyMap& h, double eps);

/// Holds iff at every point h(x) is the only candidate in B(x, eps) that
/// shadows {G_n x} in the mode's sense, i.e. no table differing from h at a
/// single point meets both contracts.
Verdict check_uniqueness(const MapSequence& f, const MapSequence& g, const ConjugacyMap& h, double eps,
                         std::size_t jobs = 0);

/// Holds iff the table has no collisions. A collision under c_prime >= 3 eps
/// points at the grid when resolution >= eps, at the hypotheses otherwise.
Verdict check_injectivity(const MapSequence& g, const ConjugacyMap& h, double eps, double c_prime);

/// Conjugacy for (H, G) obtained through a uniform equivalence j with
/// f_i o j = j o h_i: builds G' = j g_i j^-1, constructs k for (F, G') and
/// returns k' = j^-1 k j with diagnostics for (H, G). `j[i]` is the image of
/// the i-th enumerated point.
ConjugacyMap transport_conjugacy(const MapSequence& f, const MapSequence& h, const std::vector<PointId>& j,
                                 const MapSequence& g, const ConjugacyOptions& opt);

/// "point,image,shadow_error,qualifying"
void write_conjugacy_csv(std::ostream& out, const Space& space, const ConjugacyMap& h);

}  // namespace nas
