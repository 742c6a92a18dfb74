#include "nas/map_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nas {
namespace {

constexpr std::size_t kRuleLength = std::size_t{1} << 16;

std::int64_t mod_floor(std::int64_t x, std::int64_t m) {
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

PointId rotate_word(std::int64_t word, std::int64_t e, std::size_t length) {
  const auto len = static_cast<std::int64_t>(length);
  const std::int64_t s = mod_floor(e, len);
  if (s == 0) return {word, 0};
  const std::uint64_t mask = (std::uint64_t{1} << length) - 1;
  const auto w = static_cast<std::uint64_t>(word);
  const std::uint64_t out = ((w >> s) | (w << (len - s))) & mask;
  return {static_cast<std::int64_t>(out), 0};
}

void require_real(const Space& space, PrimitiveKind kind) {
  if (!space.is_real_line_like()) {
    throw DomainError(to_string(kind) + " is not defined on " + space.name());
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(PrimitiveKind kind) {
  switch (kind) {
    case PrimitiveKind::Identity: return "Identity";
    case PrimitiveKind::Affine: return "Affine";
    case PrimitiveKind::AffineMod1: return "AffineMod1";
    case PrimitiveKind::Tent: return "Tent";
    case PrimitiveKind::CyclicShift: return "CyclicShift";
    case PrimitiveKind::Successor: return "Successor";
    case PrimitiveKind::Table: return "Table";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// MapPrimitive

MapPrimitive MapPrimitive::identity() { return {}; }

MapPrimitive MapPrimitive::affine(double a, double b) {
  MapPrimitive m;
  m.kind_ = PrimitiveKind::Affine;
  m.a_ = a;
  m.b_ = b;
  return m;
}

MapPrimitive MapPrimitive::affine_mod1(double a, double b) {
  MapPrimitive m = affine(a, b);
  m.kind_ = PrimitiveKind::AffineMod1;
  return m;
}

MapPrimitive MapPrimitive::tent() {
  MapPrimitive m;
  m.kind_ = PrimitiveKind::Tent;
  return m;
}

MapPrimitive MapPrimitive::cyclic_shift(std::int64_t e) {
  MapPrimitive m;
  m.kind_ = PrimitiveKind::CyclicShift;
  m.e_ = e;
  return m;
}

MapPrimitive MapPrimitive::successor(std::int64_t e) {
  MapPrimitive m;
  m.kind_ = PrimitiveKind::Successor;
  m.e_ = e;
  return m;
}

MapPrimitive MapPrimitive::table(const Space& space, std::vector<PointId> images) {
  if (images.size() != space.size()) throw ArgumentError("table must list one image per enumerated point");
  for (const auto& p : images) {
    if (!space.contains(p)) throw ArgumentError("table image outside " + space.name());
  }
  MapPrimitive m;
  m.kind_ = PrimitiveKind::Table;
  m.table_ = std::make_shared<const std::vector<PointId>>(std::move(images));
  m.table_space_ = std::make_shared<const Space>(space);
  return m;
}

MapPrimitive MapPrimitive::constant(const Space& space, const PointId& target) {
  return table(space, std::vector<PointId>(space.size(), target));
}

const std::vector<PointId>& MapPrimitive::images() const {
  if (!table_) throw DomainError("not a table map");
  return *table_;
}

PointId MapPrimitive::apply(const Space& space, const PointId& x) const {
  switch (kind_) {
    case PrimitiveKind::Identity:
      return x;
    case PrimitiveKind::Affine:
      require_real(space, kind_);
      return space.nearest(a_ * space.value(x) + b_);
    case PrimitiveKind::AffineMod1: {
      require_real(space, kind_);
      const double v = a_ * space.value(x) + b_;
      return space.nearest(v - std::floor(v));
    }
    case PrimitiveKind::Tent: {
      require_real(space, kind_);
      PointId y = x;
      for (std::int64_t r = 0; r < reps_; ++r) {
        const double v = space.value(y);
        y = space.nearest(2.0 * std::min(v, 1.0 - v));
      }
      return y;
    }
    case PrimitiveKind::CyclicShift:
      if (space.kind() != SpaceKind::CyclicWordSpace) throw DomainError("CyclicShift needs a CyclicWordSpace");
      return rotate_word(x.a, e_, space.count_param());
    case PrimitiveKind::Successor: {
      if (space.kind() != SpaceKind::SuccessorSet) throw DomainError("Successor needs a SuccessorSet");
      if (x.a == kSuccessorZero || x.a == kSuccessorOne) return x;
      const std::int64_t c = std::clamp(x.a + e_, -kSuccessorChainLimit, kSuccessorChainLimit);
      return {c, 0};
    }
    case PrimitiveKind::Table: {
      PointId y = x;
      for (std::int64_t r = 0; r < reps_; ++r) {
        const auto ord = space.ordinal(y);
        if (!ord) throw DomainError("table map applied outside the enumerated sample");
        y = (*table_)[*ord];
      }
      return y;
    }
  }
  return x;
}

bool MapPrimitive::invertible() const {
  switch (kind_) {
    case PrimitiveKind::Identity:
    case PrimitiveKind::CyclicShift:
    case PrimitiveKind::Successor:
      return true;
    case PrimitiveKind::Affine:
      return a_ != 0.0;
    case PrimitiveKind::AffineMod1:
      return std::abs(a_) == 1.0;
    case PrimitiveKind::Tent:
      return false;
    case PrimitiveKind::Table: {
      std::vector<PointId> sorted = *table_;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
      return std::all_of(sorted.begin(), sorted.end(),
                         [&](const PointId& p) { return table_space_->ordinal(p).has_value(); });
    }
  }
  return false;
}

MapPrimitive MapPrimitive::inverse() const {
  if (!invertible()) throw ArgumentError("inverse requested for non-bijective " + describe());
  switch (kind_) {
    case PrimitiveKind::Identity:
      return *this;
    case PrimitiveKind::CyclicShift:
      return cyclic_shift(-e_);
    case PrimitiveKind::Successor:
      return successor(-e_);
    case PrimitiveKind::Affine:
      return affine(1.0 / a_, -b_ / a_);
    case PrimitiveKind::AffineMod1:
      return affine_mod1(1.0 / a_, -b_ / a_);
    case PrimitiveKind::Table: {
      const Space& space = *table_space_;
      std::vector<PointId> inv(space.size());
      for (std::size_t i = 0; i < space.size(); ++i) inv[*space.ordinal((*table_)[i])] = space.point(i);
      MapPrimitive m = table(space, std::move(inv));
      m.reps_ = reps_;
      return m;
    }
    case PrimitiveKind::Tent:
      break;
  }
  throw ArgumentError("inverse requested for non-bijective " + describe());
}

MapPrimitive MapPrimitive::power(std::int64_t p) const {
  if (p == 0 || kind_ == PrimitiveKind::Identity) return identity();
  if (p < 0) return inverse().power(-p);
  switch (kind_) {
    case PrimitiveKind::CyclicShift:
      return cyclic_shift(e_ * p);
    case PrimitiveKind::Successor:
      return successor(e_ * p);
    case PrimitiveKind::Affine:
    case PrimitiveKind::AffineMod1: {
      const double ap = std::pow(a_, static_cast<double>(p));
      const double bp = (a_ == 1.0) ? b_ * static_cast<double>(p) : b_ * (ap - 1.0) / (a_ - 1.0);
      MapPrimitive m = *this;
      m.a_ = ap;
      m.b_ = bp;
      return m;
    }
    case PrimitiveKind::Tent:
    case PrimitiveKind::Table: {
      MapPrimitive m = *this;
      m.reps_ = reps_ * p;
      return m;
    }
    case PrimitiveKind::Identity:
      break;
  }
  return identity();
}

std::string MapPrimitive::describe() const {
  std::string core;
  switch (kind_) {
    case PrimitiveKind::Identity: core = "Identity"; break;
    case PrimitiveKind::Affine: core = "Affine(" + fmt(a_) + "," + fmt(b_) + ")"; break;
    case PrimitiveKind::AffineMod1: core = "AffineMod1(" + fmt(a_) + "," + fmt(b_) + ")"; break;
    case PrimitiveKind::Tent: core = "Tent"; break;
    case PrimitiveKind::CyclicShift: core = "CyclicShift(" + std::to_string(e_) + ")"; break;
    case PrimitiveKind::Successor: core = "Successor(" + std::to_string(e_) + ")"; break;
    case PrimitiveKind::Table: core = "Table[" + std::to_string(table_->size()) + "]"; break;
  }
  if (reps_ != 1) core += "^" + std::to_string(reps_);
  return core;
}

// ---------------------------------------------------------------------------
// ExponentRule

ExponentRule ExponentRule::named(const std::string& name) {
  ExponentRule r;
  r.name_ = name;
  auto& out = r.exps_;
  auto signed_pair = [&](std::int64_t k) {
    if (k % 2 == 1) {
      out.push_back(k);
      out.push_back(-k);
    } else {
      out.push_back(-k);
      out.push_back(k);
    }
  };
  if (name == "signed_pairs") {
    for (std::int64_t k = 1; out.size() < kRuleLength; ++k) signed_pair(k);
  } else if (name == "ascending_pairs") {
    for (std::int64_t k = 1; out.size() < kRuleLength; ++k) {
      out.push_back(k);
      out.push_back(-k);
    }
  } else if (name == "doubling_blocks_powers") {
    for (int b = 1; out.size() < kRuleLength; ++b)
      for (std::int64_t k = 1; k <= (std::int64_t{1} << b) && out.size() < kRuleLength; ++k) signed_pair(k);
  } else if (name == "doubling_blocks_runs") {
    for (int b = 1; out.size() < kRuleLength; ++b) {
      for (std::int64_t k = 1; k <= (std::int64_t{1} << (b - 1)) && out.size() < kRuleLength; ++k) {
        const std::int64_t first = (k % 2 == 1) ? 1 : -1;
        for (std::int64_t t = 0; t < k; ++t) out.push_back(first);
        for (std::int64_t t = 0; t < k; ++t) out.push_back(-first);
      }
    }
  } else {
    throw ArgumentError("unknown exponent rule '" + name + "'");
  }
  out.resize(kRuleLength);
  return r;
}

ExponentRule ExponentRule::explicit_list(std::vector<std::int64_t> exponents, bool repeat) {
  if (exponents.empty()) throw ArgumentError("explicit exponent list is empty");
  ExponentRule r;
  r.name_ = repeat ? "explicit_repeating" : "explicit";
  r.exps_ = std::move(exponents);
  r.repeat_ = repeat;
  return r;
}

std::int64_t ExponentRule::exponent(std::size_t i) const {
  if (i == 0) throw ArgumentError("exponent index starts at 1");
  if (repeat_) return exps_[(i - 1) % exps_.size()];
  if (i > exps_.size()) throw ArgumentError("exponent rule '" + name_ + "' is only defined up to index " +
                                            std::to_string(exps_.size()) + "; truncate the horizon");
  return exps_[i - 1];
}

std::optional<std::size_t> ExponentRule::period() const {
  if (repeat_) return exps_.size();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// MapSequence

struct MapSequence::Impl {
  explicit Impl(Space s) : space(std::move(s)) {}
  virtual ~Impl() = default;
  virtual PointId generator(std::size_t i, const PointId& x) const = 0;
  virtual std::optional<std::size_t> period() const = 0;
  virtual std::string describe() const = 0;
  virtual std::optional<MapPrimitive> primitive_at(std::size_t) const { return std::nullopt; }
  Space space;
};

namespace {

struct AutonomousImpl final : MapSequence::Impl {
  AutonomousImpl(Space s, MapPrimitive m) : Impl(std::move(s)), map(std::move(m)) {}
  PointId generator(std::size_t, const PointId& x) const override { return map.apply(space, x); }
  std::optional<std::size_t> period() const override { return 1; }
  std::string describe() const override { return "Autonomous(" + map.describe() + ")"; }
  std::optional<MapPrimitive> primitive_at(std::size_t) const override { return map; }
  MapPrimitive map;
};

struct PeriodicImpl final : MapSequence::Impl {
  PeriodicImpl(Space s, std::vector<MapPrimitive> m) : Impl(std::move(s)), maps(std::move(m)) {}
  PointId generator(std::size_t i, const PointId& x) const override {
    return maps[(i - 1) % maps.size()].apply(space, x);
  }
  std::optional<std::size_t> period() const override { return maps.size(); }
  std::string describe() const override {
    std::string s = "Periodic[";
    for (std::size_t i = 0; i < maps.size(); ++i) s += (i ? "," : "") + maps[i].describe();
    return s + "]";
  }
  std::optional<MapPrimitive> primitive_at(std::size_t i) const override { return maps[(i - 1) % maps.size()]; }
  std::vector<MapPrimitive> maps;
};

struct PatternImpl final : MapSequence::Impl {
  PatternImpl(Space s, MapPrimitive b, ExponentRule r) : Impl(std::move(s)), base(std::move(b)), rule(std::move(r)) {
    const std::size_t n = rule.period().value_or(rule.defined_length());
    bool negative = false;
    for (std::size_t i = 1; i <= n && !negative; ++i) negative = rule.exponent(i) < 0;
    if (negative && !base.invertible()) throw ArgumentError("pattern uses negative powers of non-invertible " + base.describe());
  }
  PointId generator(std::size_t i, const PointId& x) const override {
    return base.power(rule.exponent(i)).apply(space, x);
  }
  std::optional<std::size_t> period() const override { return rule.period(); }
  std::string describe() const override { return "PatternWord(" + base.describe() + "," + rule.name() + ")"; }
  std::optional<MapPrimitive> primitive_at(std::size_t i) const override { return base.power(rule.exponent(i)); }
  MapPrimitive base;
  ExponentRule rule;
};

struct FunctionImpl final : MapSequence::Impl {
  FunctionImpl(Space s, std::function<PointId(std::size_t, const PointId&)> g, std::optional<std::size_t> p,
               std::string d)
      : Impl(std::move(s)), gen(std::move(g)), per(p), desc(std::move(d)) {}
  PointId generator(std::size_t i, const PointId& x) const override { return gen(i, x); }
  std::optional<std::size_t> period() const override { return per; }
  std::string describe() const override { return desc; }
  std::function<PointId(std::size_t, const PointId&)> gen;
  std::optional<std::size_t> per;
  std::string desc;
};

}  // namespace

MapSequence::MapSequence(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

MapSequence MapSequence::autonomous(const Space& space, MapPrimitive map) {
  return MapSequence(std::make_shared<AutonomousImpl>(space, std::move(map)));
}

MapSequence MapSequence::periodic(const Space& space, std::vector<MapPrimitive> maps) {
  if (maps.empty()) throw ArgumentError("periodic system needs at least one map");
  return MapSequence(std::make_shared<PeriodicImpl>(space, std::move(maps)));
}

MapSequence MapSequence::pattern_word(const Space& space, MapPrimitive base, ExponentRule rule) {
  return MapSequence(std::make_shared<PatternImpl>(space, std::move(base), std::move(rule)));
}

MapSequence MapSequence::from_function(const Space& space, std::function<PointId(std::size_t, const PointId&)> gen,
                                       std::optional<std::size_t> period, std::string description) {
  return MapSequence(std::make_shared<FunctionImpl>(space, std::move(gen), period, std::move(description)));
}

const Space& MapSequence::space() const { return impl_->space; }
PointId MapSequence::generator(std::size_t i, const PointId& x) const { return impl_->generator(i, x); }
std::optional<std::size_t> MapSequence::period() const { return impl_->period(); }
std::string MapSequence::describe() const { return impl_->describe(); }
std::optional<MapPrimitive> MapSequence::primitive_at(std::size_t i) const { return impl_->primitive_at(i); }

MapSequence MapSequence::claim_commutative(bool flag) const {
  MapSequence copy = *this;
  copy.commutative_ = flag;
  return copy;
}

std::size_t MapSequence::index_span(std::size_t horizon) const {
  if (auto p = period()) return *p;
  return std::max<std::size_t>(horizon, 1);
}

// ---------------------------------------------------------------------------
// Algebra

PointId apply_f(const MapSequence& seq, std::size_t i, const PointId& x) {
  if (i == 0) throw ArgumentError("generator index starts at 1; use compose_Fn(seq, 0, x) for f_0");
  if (!seq.space().contains(x)) throw DomainError("point not in " + seq.space().name());
  return seq.generator(i, x);
}

PointId compose_Fn(const MapSequence& seq, std::size_t n, const PointId& x) {
  if (!seq.space().contains(x)) throw DomainError("point not in " + seq.space().name());
  PointId y = x;
  for (std::size_t i = 1; i <= n; ++i) y = seq.generator(i, y);
  return y;
}

PointId compose_block(const MapSequence& seq, std::size_t j, std::size_t k, const PointId& x) {
  if (j == 0 || j > k) throw ArgumentError("compose_block needs 1 <= j <= k");
  if (!seq.space().contains(x)) throw DomainError("point not in " + seq.space().name());
  PointId y = x;
  for (std::size_t i = j; i <= k; ++i) y = seq.generator(i, y);
  return y;
}

MapSequence iterate_system(const MapSequence& seq, std::size_t k) {
  if (k == 0) throw ArgumentError("iterate_system needs k >= 1");
  if (k == 1) return seq;
  std::optional<std::size_t> period;
  if (auto p = seq.period()) period = *p / std::gcd(*p, k);
  auto gen = [seq, k](std::size_t i, const PointId& x) {
    PointId y = x;
    for (std::size_t t = (i - 1) * k + 1; t <= i * k; ++t) y = seq.generator(t, y);
    return y;
  };
  auto out = MapSequence::from_function(seq.space(), gen, period,
                                        "Iterate(" + seq.describe() + "," + std::to_string(k) + ")");
  return out.claim_commutative(seq.commutative_claimed());
}

MapSequence product_system(const MapSequence& f, const MapSequence& g) {
  const Space space = Space::product(f.space(), g.space());
  std::optional<std::size_t> period;
  if (f.period() && g.period()) period = std::lcm(*f.period(), *g.period());
  auto gen = [f, g](std::size_t i, const PointId& x) {
    return PointId{f.generator(i, {x.a, 0}).a, g.generator(i, {x.b, 0}).a};
  };
  auto out = MapSequence::from_function(space, gen, period, "Product(" + f.describe() + "," + g.describe() + ")");
  return out.claim_commutative(f.commutative_claimed() && g.commutative_claimed());
}

OrbitTable orbit_table(const MapSequence& seq, std::size_t horizon) {
  OrbitTable t;
  t.points = seq.space().size();
  t.horizon = horizon;
  t.data.resize(t.points * (horizon + 1));
  for (std::size_t o = 0; o < t.points; ++o) {
    PointId y = seq.space().point(o);
    PointId* row = &t.data[o * (horizon + 1)];
    row[0] = y;
    for (std::size_t n = 1; n <= horizon; ++n) {
      y = seq.generator(n, y);
      row[n] = y;
    }
  }
  return t;
}

double eta_distance(const Space& space, const PointMap& f, const PointMap& g) {
  double sup = 0.0;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const PointId x = space.point(i);
    sup = std::max(sup, std::min(space.dist(f(x), g(x)), 1.0));
  }
  return sup;
}

double eta_distance(const Space& space, const MapPrimitive& f, const MapPrimitive& g) {
  return eta_distance(
      space, [&](const PointId& x) { return f.apply(space, x); }, [&](const PointId& x) { return g.apply(space, x); });
}

GammaResult gamma_distance(const MapSequence& f, const MapSequence& g, std::size_t horizon) {
  if (!(f.space() == g.space())) throw ArgumentError("gamma_distance needs systems on the same space");
  GammaResult r;
  r.horizon = horizon;
  if (f.period() && g.period()) r.exact = horizon >= std::lcm(*f.period(), *g.period());
  const Space& space = f.space();
  for (std::size_t i = 1; i <= horizon; ++i) {
    const double e = eta_distance(
        space, [&](const PointId& x) { return f.generator(i, x); }, [&](const PointId& x) { return g.generator(i, x); });
    if (e > r.value) {
      r.value = e;
      r.argmax_index = i;
    }
  }
  return r;
}

Verdict check_commutativity(const MapSequence& seq, std::size_t horizon) {
  Verdict v;
  v.checker = "commutativity";
  const Space& space = seq.space();
  const std::size_t span = seq.index_span(horizon);
  v.horizon = span;
  v.resolution = space.resolution();
  v.exhaustive = true;
  v.horizon_exact = seq.period().has_value();
  v.holds = true;
  for (std::size_t i = 1; i <= span && v.holds; ++i) {
    for (std::size_t j = i + 1; j <= span && v.holds; ++j) {
      for (std::size_t o = 0; o < space.size(); ++o) {
        const PointId x = space.point(o);
        const PointId ij = seq.generator(i, seq.generator(j, x));
        const PointId ji = seq.generator(j, seq.generator(i, x));
        if (!(ij == ji)) {
          v.holds = false;
          Witness w;
          w.points = {x, ij, ji};
          w.index = i;
          w.window_k = j;
          w.note = "f_i(f_j(x)) != f_j(f_i(x)) with i=" + std::to_string(i) + ", j=" + std::to_string(j);
          v.witness = w;
          break;
        }
      }
    }
  }
  return v;
}

Verdict check_surjectivity(const MapSequence& seq, std::size_t horizon) {
  Verdict v;
  v.checker = "surjectivity";
  const Space& space = seq.space();
  const std::size_t span = seq.index_span(horizon);
  v.horizon = span;
  v.resolution = space.resolution();
  v.exhaustive = true;
  v.horizon_exact = seq.period().has_value();
  v.holds = true;
  std::vector<char> hit(space.size());
  for (std::size_t i = 1; i <= span; ++i) {
    std::fill(hit.begin(), hit.end(), 0);
    for (std::size_t o = 0; o < space.size(); ++o) {
      if (auto ord = space.ordinal(seq.generator(i, space.point(o)))) hit[*ord] = 1;
    }
    auto miss = std::find(hit.begin(), hit.end(), 0);
    if (miss != hit.end()) {
      v.holds = false;
      Witness w;
      w.points = {space.point(static_cast<std::size_t>(miss - hit.begin()))};
      w.index = i;
      w.note = "point not in the image of generator " + std::to_string(i);
      v.witness = w;
      break;
    }
  }
  return v;
}

}  // namespace nas
