#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nas/metric_space.hpp"
#include "nas/verdict.hpp"

namespace nas {

enum class PrimitiveKind { Identity, Affine, AffineMod1, Tent, CyclicShift, Successor, Table };

std::string to_string(PrimitiveKind kind);

/// One self-map of a space model. Analytic maps are evaluated on the real
/// coordinate and rounded to the nearest model point (ties toward the lower
/// index); shifts and successor moves are exact.
class MapPrimitive {
 public:
  static MapPrimitive identity();
  static MapPrimitive affine(double a, double b);
  static MapPrimitive affine_mod1(double a, double b);
  static MapPrimitive tent();
  static MapPrimitive cyclic_shift(std::int64_t e);
  static MapPrimitive successor(std::int64_t e);
  /// Tabulated map; `images[i]` is the image of `space.point(i)`.
  static MapPrimitive table(const Space& space, std::vector<PointId> images);
  static MapPrimitive constant(const Space& space, const PointId& target);

  PrimitiveKind kind() const { return kind_; }
  double a() const { return a_; }
  double b() const { return b_; }
  std::int64_t exponent() const { return e_; }
  std::int64_t repeats() const { return reps_; }
  const std::vector<PointId>& images() const;

  PointId apply(const Space& space, const PointId& x) const;

  /// f^p by integer exponent arithmetic: closed forms for identity, affine,
  /// shifts and successor moves; repetition for tent and tables. Negative
  /// powers need an invertible primitive.
  MapPrimitive power(std::int64_t p) const;
  bool invertible() const;
  MapPrimitive inverse() const;

  std::string describe() const;

 private:
  PrimitiveKind kind_ = PrimitiveKind::Identity;
  double a_ = 1.0;
  double b_ = 0.0;
  std::int64_t e_ = 0;
  std::int64_t reps_ = 1;
  std::shared_ptr<const std::vector<PointId>> table_;
  std::shared_ptr<const Space> table_space_;
};

/// Integer exponents e_1, e_2, ... of a power-word system {f^{e_i}}.
class ExponentRule {
 public:
  /// Named constructions:
  ///  - "signed_pairs":   f, f^-1, f^-2, f^2, f^3, f^-3, f^-4, f^4, ...
  ///  - "ascending_pairs": f, f^-1, f^2, f^-2, f^3, f^-3, ...
  ///  - "doubling_blocks_powers": blocks b = 1, 2, ... each running signed_pairs for k = 1..2^b
  ///  - "doubling_blocks_runs":  blocks b = 1, 2, ... each running k = 1..2^(b-1) as
  ///    k-fold runs of f / f^-1 with the signed_pairs orientation
  static ExponentRule named(const std::string& name);
  static ExponentRule explicit_list(std::vector<std::int64_t> exponents, bool repeat);

  std::int64_t exponent(std::size_t i) const;
  std::optional<std::size_t> period() const;
  std::size_t defined_length() const { return exps_.size(); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::vector<std::int64_t> exps_;
  bool repeat_ = false;
};

/// A non-autonomous system {f_i}_{i>=1} on a space model. Immutable value type.
class MapSequence {
 public:
  struct Impl;

  static MapSequence autonomous(const Space& space, MapPrimitive map);
  static MapSequence periodic(const Space& space, std::vector<MapPrimitive> maps);
  static MapSequence pattern_word(const Space& space, MapPrimitive base, ExponentRule rule);
  /// Generators given by a callback; used for derived systems (conjugates,
  /// tabulated perturbations).
  static MapSequence from_function(const Space& space, std::function<PointId(std::size_t, const PointId&)> gen,
                                   std::optional<std::size_t> period, std::string description);

  const Space& space() const;
  /// i-th generator at x, i >= 1. No argument checks (hot path).
  PointId generator(std::size_t i, const PointId& x) const;
  /// Smallest cycle of generator indices, when the representation is periodic.
  std::optional<std::size_t> period() const;
  bool commutative_claimed() const { return commutative_; }
  MapSequence claim_commutative(bool flag = true) const;
  std::string describe() const;
  /// Primitive behind the i-th generator for the three base representations.
  std::optional<MapPrimitive> primitive_at(std::size_t i) const;

  /// Number of generator indices a checker must visit to see every distinct
  /// generator: the period when known, `horizon` otherwise.
  std::size_t index_span(std::size_t horizon) const;

 private:
  explicit MapSequence(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
  bool commutative_ = false;
};

using PointMap = std::function<PointId(const PointId&)>;

PointId apply_f(const MapSequence& seq, std::size_t i, const PointId& x);
/// F_n(x) = f_n(...f_1(x)...), F_0 = id.
PointId compose_Fn(const MapSequence& seq, std::size_t n, const PointId& x);
/// F_[j,k](x) = f_k(...f_j(x)...), 1 <= j <= k.
PointId compose_block(const MapSequence& seq, std::size_t j, std::size_t k, const PointId& x);
/// F^k = {F_[(i-1)k+1, ik]}.
MapSequence iterate_system(const MapSequence& seq, std::size_t k);
/// F x G on Product(space_F, space_G).
MapSequence product_system(const MapSequence& f, const MapSequence& g);

/// Orbits F_0(x), ..., F_T(x) for every enumerated point, row-major by ordinal.
struct OrbitTable {
  std::size_t points = 0;
  std::size_t horizon = 0;
  std::vector<PointId> data;
  const PointId& at(std::size_t ordinal, std::size_t n) const { return data[ordinal * (horizon + 1) + n]; }
};
OrbitTable orbit_table(const MapSequence& seq, std::size_t horizon);

/// sup_x d_1(f(x), g(x)) over the enumerated points.
double eta_distance(const Space& space, const PointMap& f, const PointMap& g);
double eta_distance(const Space& space, const MapPrimitive& f, const MapPrimitive& g);

struct GammaResult {
  double value = 0.0;
  std::size_t horizon = 0;
  std::size_t argmax_index = 0;
  bool exact = false;  // horizon covers a full cycle of both systems
};
/// max_{1<=i<=horizon} eta(f_i, g_i).
GammaResult gamma_distance(const MapSequence& f, const MapSequence& g, std::size_t horizon);

/// Pointwise f_i o f_j == f_j o f_i for all generator pairs in a cycle (or up
/// to `horizon` for aperiodic systems).
Verdict check_commutativity(const MapSequence& seq, std::size_t horizon);
/// Each generator maps the enumerated sample onto itself.
Verdict check_surjectivity(const MapSequence& seq, std::size_t horizon);

}  // namespace nas
