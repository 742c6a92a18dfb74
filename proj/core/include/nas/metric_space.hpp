#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nas {

/// Absolute tolerance for real comparisons across the library.
inline constexpr double kTol = 1e-9;

/// Strict `value < bound` with the library tolerance folded in.
inline bool strictly_below(double value, double bound) { return value <= bound - kTol; }

/// SuccessorSet labels: chain coordinate c maps to 1/(2-c) for c <= 0 and to
/// 1 - 1/(2+c) for c > 0; the endpoints 0 and 1 use sentinels.
inline constexpr std::int64_t kSuccessorZero = -(std::int64_t{1} << 62);
inline constexpr std::int64_t kSuccessorOne = std::int64_t{1} << 62;
inline constexpr std::int64_t kSuccessorChainLimit = std::int64_t{1} << 60;

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point label. Base spaces use `a` only; product spaces use (a, b) as the
/// labels of the two components. For IntervalGrid, CircleGrid and LineWindow
/// `a` is the lattice index; for CyclicWordSpace it is the binary word with
/// bit p holding cyclic position p; for SuccessorSet it is the chain
/// coordinate (or one of the two endpoint sentinels).
struct PointId {
  std::int64_t a = 0;
  std::int64_t b = 0;

  friend bool operator==(const PointId&, const PointId&) = default;
  friend auto operator<=>(const PointId&, const PointId&) = default;
};

enum class SpaceKind { IntervalGrid, CircleGrid, CyclicWordSpace, SuccessorSet, LineWindow, Product };

std::string to_string(SpaceKind kind);

/// Finite metric-space model. Immutable; cheap to copy (shared state).
///
/// Every model enumerates a finite sample of points (`size()` / `point(i)`).
/// LineWindow and SuccessorSet additionally accept labels outside the sample:
/// LineWindow is a window on the lattice a + step*Z standing in for the real
/// line, and SuccessorSet(M) is the truncation of the full set
/// {1/m, 1-1/m : m >= 1}, whose chain coordinates extend past the window.
/// Maps may therefore leave the window without being clamped.
class Space {
 public:
  static Space interval_grid(double a, double b, std::size_t n);
  static Space circle_grid(std::size_t n);
  static Space cyclic_words(std::size_t length);
  static Space successor_set(std::size_t m);
  static Space line_window(double a, double b, std::size_t n);
  static Space product(const Space& left, const Space& right);

  SpaceKind kind() const;
  std::size_t size() const;
  PointId point(std::size_t ordinal) const;
  /// Enumeration index of `p`, or nullopt when `p` lies outside the sample.
  std::optional<std::size_t> ordinal(const PointId& p) const;
  bool contains(const PointId& p) const;

  double dist(const PointId& x, const PointId& y) const;

  /// Smallest distance between distinct enumerated points.
  double min_separation() const;
  /// Half the smallest separation: the rounding radius of grid models and the
  /// finest meaningful scale of the discrete ones.
  double resolution() const;
  double diameter() const;
  bool compact() const;

  /// Real coordinate of a point of a one-dimensional model
  /// (Interval/Circle/Line/Successor). Domain error otherwise.
  double value(const PointId& p) const;
  /// Nearest model point to a real coordinate, ties toward the lower index.
  /// Interval grids clamp, circles wrap, line windows extend the lattice.
  PointId nearest(double v) const;
  bool is_real_line_like() const;

  /// All model points within distance < r of `center` (strict), in
  /// deterministic order. For LineWindow the ball is taken on the full
  /// lattice; elsewhere on the enumerated sample plus the center itself.
  std::vector<PointId> ball(const PointId& center, double r) const;

  /// Human-readable coordinates, e.g. "0.25", "01100101", "(0.1,0.3)".
  std::string describe(const PointId& p) const;
  std::string name() const;

  const Space& left() const;
  const Space& right() const;
  PointId left_part(const PointId& p) const { return {p.a, 0}; }
  PointId right_part(const PointId& p) const { return {p.b, 0}; }

  /// Parameters (for reports).
  double lower() const;
  double upper() const;
  std::size_t count_param() const;
  double step() const;

  friend bool operator==(const Space& x, const Space& y);

  struct State;  // opaque

 private:
  explicit Space(std::shared_ptr<const State> state);
  std::shared_ptr<const State> state_;
};

/// d(x, y) with a membership check on both points.
double dist(const Space& space, const PointId& x, const PointId& y);
/// min(d(x, y), 1).
double bounded_dist(const Space& space, const PointId& x, const PointId& y);

/// Calls `visit(x, y)` for every unordered distinct pair of enumerated points,
/// lexicographic by enumeration index.
void enumerate_pairs(const Space& space, const std::function<void(std::size_t, std::size_t)>& visit);
std::vector<std::pair<std::size_t, std::size_t>> all_pairs(const Space& space);

}  // namespace nas
