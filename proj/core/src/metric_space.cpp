#include "nas/metric_space.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace nas {
namespace {

constexpr std::int64_t kLatticeLimit = std::int64_t{1} << 52;
constexpr std::int64_t kChainLimit = kSuccessorChainLimit;
constexpr std::int64_t kSuccZero = kSuccessorZero;
constexpr std::int64_t kSuccOne = kSuccessorOne;
constexpr std::size_t kMaxWordLength = 20;

std::int64_t saturate(double x, std::int64_t limit) {
  if (!(x > -static_cast<double>(limit))) return -limit;
  if (!(x < static_cast<double>(limit))) return limit;
  return static_cast<std::int64_t>(x);
}

// Lattice index nearest to t, ties toward the lower index.
double round_half_down(double t) { return std::ceil(t - 0.5); }

std::string fmt_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

double successor_value(std::int64_t c) {
  if (c == kSuccZero) return 0.0;
  if (c == kSuccOne) return 1.0;
  if (c <= 0) return 1.0 / (2.0 - static_cast<double>(c));
  return 1.0 - 1.0 / (2.0 + static_cast<double>(c));
}

}  // namespace

struct Space::State {
  SpaceKind kind{};
  double a = 0.0;
  double b = 1.0;
  std::size_t n = 0;  // grid points, word length, or successor truncation M
  double step = 0.0;
  std::vector<double> word_dist;  // CyclicWordSpace: distance by xor pattern
  std::vector<double> position_weight;
  std::vector<std::int64_t> successor_labels;  // enumeration order (sorted by value)
  std::shared_ptr<const State> left;
  std::shared_ptr<const State> right;
  std::vector<Space> parts;
  double min_sep = 0.0;
  double diam = 0.0;
};

namespace {

using StatePtr = std::shared_ptr<const Space::State>;

std::size_t state_size(const Space::State& s) {
  switch (s.kind) {
    case SpaceKind::IntervalGrid:
    case SpaceKind::CircleGrid:
    case SpaceKind::LineWindow:
      return s.n;
    case SpaceKind::CyclicWordSpace:
      return std::size_t{1} << s.n;
    case SpaceKind::SuccessorSet:
      return s.successor_labels.size();
    case SpaceKind::Product:
      return state_size(*s.left) * state_size(*s.right);
  }
  return 0;
}

double state_dist(const Space::State& s, const PointId& x, const PointId& y) {
  switch (s.kind) {
    case SpaceKind::IntervalGrid:
    case SpaceKind::LineWindow:
      return std::abs(static_cast<double>(x.a - y.a)) * s.step;
    case SpaceKind::CircleGrid: {
      const auto n = static_cast<std::int64_t>(s.n);
      std::int64_t d = (x.a - y.a) % n;
      if (d < 0) d += n;
      return static_cast<double>(std::min(d, n - d)) / static_cast<double>(n);
    }
    case SpaceKind::CyclicWordSpace:
      return s.word_dist[static_cast<std::size_t>(x.a ^ y.a)];
    case SpaceKind::SuccessorSet:
      return std::abs(successor_value(x.a) - successor_value(y.a));
    case SpaceKind::Product:
      return std::max(state_dist(*s.left, {x.a, 0}, {y.a, 0}), state_dist(*s.right, {x.b, 0}, {y.b, 0}));
  }
  return 0.0;
}

PointId state_point(const Space::State& s, std::size_t i) {
  switch (s.kind) {
    case SpaceKind::SuccessorSet:
      return {s.successor_labels[i], 0};
    case SpaceKind::Product: {
      const std::size_t nr = state_size(*s.right);
      return {state_point(*s.left, i / nr).a, state_point(*s.right, i % nr).a};
    }
    default:
      return {static_cast<std::int64_t>(i), 0};
  }
}

std::optional<std::size_t> state_ordinal(const Space::State& s, const PointId& p) {
  switch (s.kind) {
    case SpaceKind::IntervalGrid:
    case SpaceKind::CircleGrid:
    case SpaceKind::LineWindow:
    case SpaceKind::CyclicWordSpace:
      if (p.b != 0 || p.a < 0 || static_cast<std::size_t>(p.a) >= state_size(s)) return std::nullopt;
      return static_cast<std::size_t>(p.a);
    case SpaceKind::SuccessorSet: {
      if (p.b != 0) return std::nullopt;
      auto it = std::find(s.successor_labels.begin(), s.successor_labels.end(), p.a);
      if (it == s.successor_labels.end()) return std::nullopt;
      return static_cast<std::size_t>(it - s.successor_labels.begin());
    }
    case SpaceKind::Product: {
      auto l = state_ordinal(*s.left, {p.a, 0});
      auto r = state_ordinal(*s.right, {p.b, 0});
      if (!l || !r) return std::nullopt;
      return *l * state_size(*s.right) + *r;
    }
  }
  return std::nullopt;
}

bool state_contains(const Space::State& s, const PointId& p) {
  switch (s.kind) {
    case SpaceKind::LineWindow:
      return p.b == 0 && p.a >= -kLatticeLimit && p.a <= kLatticeLimit;
    case SpaceKind::SuccessorSet:
      return p.b == 0 && (p.a == kSuccZero || p.a == kSuccOne || (p.a >= -kChainLimit && p.a <= kChainLimit));
    case SpaceKind::Product:
      return state_contains(*s.left, {p.a, 0}) && state_contains(*s.right, {p.b, 0});
    default:
      return state_ordinal(s, p).has_value();
  }
}

void finalize_metric(Space::State& s) {
  const std::size_t n = state_size(s);
  if (s.kind == SpaceKind::Product) {
    s.min_sep = std::min(s.left->min_sep, s.right->min_sep);
    s.diam = std::max(s.left->diam, s.right->diam);
    return;
  }
  if (n < 2) {
    s.min_sep = 0.0;
    s.diam = 0.0;
    return;
  }
  switch (s.kind) {
    case SpaceKind::IntervalGrid:
    case SpaceKind::LineWindow:
      s.min_sep = s.step;
      s.diam = s.step * static_cast<double>(n - 1);
      break;
    case SpaceKind::CircleGrid:
      s.min_sep = 1.0 / static_cast<double>(n);
      s.diam = static_cast<double>(n / 2) / static_cast<double>(n);
      break;
    case SpaceKind::CyclicWordSpace:
      s.min_sep = *std::min_element(s.position_weight.begin(), s.position_weight.end());
      s.diam = s.word_dist.back();
      break;
    case SpaceKind::SuccessorSet: {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < n; ++i) {
        best = std::min(best, successor_value(s.successor_labels[i]) - successor_value(s.successor_labels[i - 1]));
      }
      s.min_sep = best;
      s.diam = 1.0;
      break;
    }
    case SpaceKind::Product:
      break;
  }
}

}  // namespace

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::IntervalGrid: return "IntervalGrid";
    case SpaceKind::CircleGrid: return "CircleGrid";
    case SpaceKind::CyclicWordSpace: return "CyclicWordSpace";
    case SpaceKind::SuccessorSet: return "SuccessorSet";
    case SpaceKind::LineWindow: return "LineWindow";
    case SpaceKind::Product: return "Product";
  }
  return "?";
}

Space::Space(std::shared_ptr<const State> state) : state_(std::move(state)) {}

Space Space::interval_grid(double a, double b, std::size_t n) {
  if (n < 2 || !(b > a)) throw ArgumentError("IntervalGrid needs b > a and at least 2 points");
  auto s = std::make_shared<State>();
  s->kind = SpaceKind::IntervalGrid;
  s->a = a;
  s->b = b;
  s->n = n;
  s->step = (b - a) / static_cast<double>(n - 1);
  finalize_metric(*s);
  return Space(std::move(s));
}

Space Space::line_window(double a, double b, std::size_t n) {
  if (n < 2 || !(b > a)) throw ArgumentError("LineWindow needs b > a and at least 2 points");
  auto s = std::make_shared<State>();
  s->kind = SpaceKind::LineWindow;
  s->a = a;
  s->b = b;
  s->n = n;
  s->step = (b - a) / static_cast<double>(n - 1);
  finalize_metric(*s);
  return Space(std::move(s));
}

Space Space::circle_grid(std::size_t n) {
  if (n < 1) throw ArgumentError("CircleGrid needs at least one point");
  auto s = std::make_shared<State>();
  s->kind = SpaceKind::CircleGrid;
  s->n = n;
  s->a = 0.0;
  s->b = 1.0;
  s->step = 1.0 / static_cast<double>(n);
  finalize_metric(*s);
  return Space(std::move(s));
}

Space Space::cyclic_words(std::size_t length) {
  if (length < 1 || length > kMaxWordLength) throw ArgumentError("CyclicWordSpace length must be in [1, 20]");
  auto s = std::make_shared<State>();
  s->kind = SpaceKind::CyclicWordSpace;
  s->n = length;
  // Window of size L centred at 0: i in [-(L-1)/2, L/2], cyclic position p = i mod L.
  const auto len = static_cast<std::int64_t>(length);
  const std::int64_t lo = -((len - 1) / 2);
  s->position_weight.assign(length, 0.0);
  for (std::int64_t i = lo; i < lo + len; ++i) {
    const auto p = static_cast<std::size_t>(((i % len) + len) % len);
    s->position_weight[p] = std::ldexp(1.0, -static_cast<int>(std::abs(i)));
  }
  const std::size_t words = std::size_t{1} << length;
  s->word_dist.assign(words, 0.0);
  for (std::size_t w = 1; w < words; ++w) {
    const auto low = static_cast<std::size_t>(std::countr_zero(w));
    s->word_dist[w] = s->word_dist[w & (w - 1)] + s->position_weight[low];
  }
  finalize_metric(*s);
  return Space(std::move(s));
}

Space Space::successor_set(std::size_t m) {
  if (m < 1) throw ArgumentError("SuccessorSet needs M >= 1");
  auto s = std::make_shared<State>();
  s->kind = SpaceKind::SuccessorSet;
  s->n = m;
  s->successor_labels.push_back(kSuccZero);
  if (m >= 2) {
    const auto reach = static_cast<std::int64_t>(m) - 2;
    for (std::int64_t c = -reach; c <= reach; ++c) s->successor_labels.push_back(c);
  }
  s->successor_labels.push_back(kSuccOne);
  finalize_metric(*s);
  return Space(std::move(s));
}

Space Space::product(const Space& left, const Space& right) {
  if (left.kind() == SpaceKind::Product || right.kind() == SpaceKind::Product) {
    throw ArgumentError("nested products are not supported");
  }
  auto s = std::make_shared<State>();
  s->kind = SpaceKind::Product;
  s->left = left.state_;
  s->right = right.state_;
  s->parts = {left, right};
  finalize_metric(*s);
  return Space(std::move(s));
}

SpaceKind Space::kind() const { return state_->kind; }
std::size_t Space::size() const { return state_size(*state_); }

PointId Space::point(std::size_t ordinal) const {
  if (ordinal >= size()) throw DomainError("point ordinal out of range");
  return state_point(*state_, ordinal);
}

std::optional<std::size_t> Space::ordinal(const PointId& p) const { return state_ordinal(*state_, p); }
bool Space::contains(const PointId& p) const { return state_contains(*state_, p); }
double Space::dist(const PointId& x, const PointId& y) const { return state_dist(*state_, x, y); }
double Space::min_separation() const { return state_->min_sep; }
double Space::resolution() const { return state_->min_sep / 2.0; }
double Space::diameter() const { return state_->diam; }
bool Space::compact() const { return kind() != SpaceKind::LineWindow; }

bool Space::is_real_line_like() const {
  switch (kind()) {
    case SpaceKind::IntervalGrid:
    case SpaceKind::CircleGrid:
    case SpaceKind::LineWindow:
    case SpaceKind::SuccessorSet:
      return true;
    default:
      return false;
  }
}

double Space::value(const PointId& p) const {
  const State& s = *state_;
  switch (s.kind) {
    case SpaceKind::IntervalGrid:
    case SpaceKind::LineWindow:
      return s.a + static_cast<double>(p.a) * s.step;
    case SpaceKind::CircleGrid:
      return static_cast<double>(p.a) / static_cast<double>(s.n);
    case SpaceKind::SuccessorSet:
      return successor_value(p.a);
    default:
      throw DomainError("value() needs a one-dimensional space, got " + to_string(s.kind));
  }
}

PointId Space::nearest(double v) const {
  const State& s = *state_;
  if (!std::isfinite(v)) throw DomainError("non-finite coordinate");
  switch (s.kind) {
    case SpaceKind::IntervalGrid: {
      const double t = round_half_down((v - s.a) / s.step);
      const double hi = static_cast<double>(s.n - 1);
      return {static_cast<std::int64_t>(std::clamp(t, 0.0, hi)), 0};
    }
    case SpaceKind::LineWindow:
      return {saturate(round_half_down((v - s.a) / s.step), kLatticeLimit), 0};
    case SpaceKind::CircleGrid: {
      const double frac = v - std::floor(v);
      const auto n = static_cast<std::int64_t>(s.n);
      auto k = static_cast<std::int64_t>(round_half_down(frac * static_cast<double>(n)));
      k %= n;
      if (k < 0) k += n;
      return {k, 0};
    }
    case SpaceKind::SuccessorSet: {
      std::int64_t best = s.successor_labels.front();
      double best_d = std::abs(successor_value(best) - v);
      for (auto label : s.successor_labels) {
        const double d = std::abs(successor_value(label) - v);
        if (d < best_d - kTol) {
          best = label;
          best_d = d;
        }
      }
      return {best, 0};
    }
    default:
      throw DomainError("nearest() needs a one-dimensional space, got " + to_string(s.kind));
  }
}

std::vector<PointId> Space::ball(const PointId& center, double r) const {
  const State& s = *state_;
  std::vector<PointId> out;
  if (!(r > 0.0)) return out;
  switch (s.kind) {
    case SpaceKind::IntervalGrid:
    case SpaceKind::LineWindow: {
      const auto reach = static_cast<std::int64_t>(std::floor((r - kTol) / s.step + 1e-12));
      std::int64_t lo = center.a - reach;
      std::int64_t hi = center.a + reach;
      if (s.kind == SpaceKind::IntervalGrid) {
        lo = std::max<std::int64_t>(lo, 0);
        hi = std::min<std::int64_t>(hi, static_cast<std::int64_t>(s.n) - 1);
      }
      for (std::int64_t k = lo; k <= hi; ++k) {
        if (strictly_below(std::abs(static_cast<double>(k - center.a)) * s.step, r)) out.push_back({k, 0});
      }
      return out;
    }
    case SpaceKind::CircleGrid: {
      const auto n = static_cast<std::int64_t>(s.n);
      const auto reach = static_cast<std::int64_t>(std::floor((r - kTol) / s.step + 1e-12));
      if (2 * reach + 1 < n) {
        for (std::int64_t k = -reach; k <= reach; ++k) {
          const PointId p{((center.a + k) % n + n) % n, 0};
          if (strictly_below(state_dist(s, p, center), r)) out.push_back(p);
        }
        std::sort(out.begin(), out.end());
        return out;
      }
      for (std::size_t i = 0; i < s.n; ++i) {
        const PointId p{static_cast<std::int64_t>(i), 0};
        if (strictly_below(state_dist(s, p, center), r)) out.push_back(p);
      }
      return out;
    }
    case SpaceKind::Product: {
      const auto lb = s.parts[0].ball({center.a, 0}, r);
      const auto rb = s.parts[1].ball({center.b, 0}, r);
      out.reserve(lb.size() * rb.size());
      for (const auto& p : lb)
        for (const auto& q : rb) out.push_back({p.a, q.a});
      return out;
    }
    default: {
      bool has_center = false;
      for (std::size_t i = 0, n = state_size(s); i < n; ++i) {
        const PointId p = state_point(s, i);
        if (p == center) has_center = true;
        if (strictly_below(state_dist(s, p, center), r)) out.push_back(p);
      }
      if (!has_center) out.insert(out.begin(), center);
      return out;
    }
  }
}

std::string Space::describe(const PointId& p) const {
  const State& s = *state_;
  switch (s.kind) {
    case SpaceKind::CyclicWordSpace: {
      std::string w(s.n, '0');
      for (std::size_t i = 0; i < s.n; ++i)
        if ((p.a >> i) & 1) w[i] = '1';
      return w;
    }
    case SpaceKind::Product:
      return "(" + left().describe({p.a, 0}) + "," + right().describe({p.b, 0}) + ")";
    default:
      return fmt_real(value(p));
  }
}

std::string Space::name() const {
  const State& s = *state_;
  std::ostringstream os;
  switch (s.kind) {
    case SpaceKind::IntervalGrid:
    case SpaceKind::LineWindow:
      os << to_string(s.kind) << "(" << fmt_real(s.a) << "," << fmt_real(s.b) << "," << s.n << ")";
      break;
    case SpaceKind::CircleGrid:
    case SpaceKind::CyclicWordSpace:
    case SpaceKind::SuccessorSet:
      os << to_string(s.kind) << "(" << s.n << ")";
      break;
    case SpaceKind::Product:
      os << "Product(" << left().name() << "," << right().name() << ")";
      break;
  }
  return os.str();
}

const Space& Space::left() const {
  if (kind() != SpaceKind::Product) throw DomainError("left() on a non-product space");
  return state_->parts[0];
}

const Space& Space::right() const {
  if (kind() != SpaceKind::Product) throw DomainError("right() on a non-product space");
  return state_->parts[1];
}

double Space::lower() const { return state_->a; }
double Space::upper() const { return state_->b; }
std::size_t Space::count_param() const { return state_->n; }
double Space::step() const { return state_->step; }

bool operator==(const Space& x, const Space& y) {
  if (x.state_ == y.state_) return true;
  const auto& s = *x.state_;
  const auto& t = *y.state_;
  if (s.kind != t.kind) return false;
  if (s.kind == SpaceKind::Product) return s.parts[0] == t.parts[0] && s.parts[1] == t.parts[1];
  return s.n == t.n && s.a == t.a && s.b == t.b;
}

double dist(const Space& space, const PointId& x, const PointId& y) {
  if (!space.contains(x) || !space.contains(y)) throw DomainError("point not in " + space.name());
  return space.dist(x, y);
}

double bounded_dist(const Space& space, const PointId& x, const PointId& y) {
  return std::min(dist(space, x, y), 1.0);
}

void enumerate_pairs(const Space& space, const std::function<void(std::size_t, std::size_t)>& visit) {
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) visit(i, j);
}

std::vector<std::pair<std::size_t, std::size_t>> all_pairs(const Space& space) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = space.size();
  out.reserve(n * (n - 1) / 2);
  enumerate_pairs(space, [&](std::size_t i, std::size_t j) { out.emplace_back(i, j); });
  return out;
}

}  // namespace nas
