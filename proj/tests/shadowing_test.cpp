#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "nas/dyn_props.hpp"
#include "nas/shadowing.hpp"

using namespace nas;

namespace {

MapSequence doubling(std::size_t n = 4096) {
  return MapSequence::autonomous(Space::circle_grid(n), MapPrimitive::affine_mod1(2.0, 0.0));
}

MapSequence stabilizing_line(std::size_t n = 201) {
  return MapSequence::periodic(Space::line_window(-1.0, 1.0, n),
                               {MapPrimitive::affine(2.0, 0.0), MapPrimitive::identity(), MapPrimitive::identity()});
}

double circle_gap(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

double signed_wrap(double v) { return v - std::round(v); }

}  // namespace

TEST(FindShadow, TrueOrbitShadowsItself) {
  const auto seq = doubling(256);
  for (ShadowMode m : {ShadowMode::Plain, ShadowMode::Almost, ShadowMode::Average, ShadowMode::StrongAverage}) {
    const auto po = true_orbit(seq, seq.space().point(77), 6);
    const auto r = find_shadow_point(seq, po, 0.05, m);
    ASSERT_TRUE(r.shadow_point.has_value());
    EXPECT_EQ(*r.shadow_point, seq.space().point(77)) << to_string(m);
    EXPECT_EQ(r.functional, 0.0);
    EXPECT_TRUE(r.success);
    EXPECT_TRUE(r.exhaustive);
  }
  PseudoOrbit empty;
  EXPECT_THROW(find_shadow_point(seq, empty, 0.1, ShadowMode::Plain), ArgumentError);
}

TEST(FindShadow, DoublingMatchesGeometricSeriesConstruction) {
  const auto seq = doubling();
  const Space& s = seq.space();
  const std::size_t T = 6;
  const double delta = 0.01;
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const auto po = perturbed_orbit(seq, s.point(seed * 301), T, delta, seed);
    // Backward-contracting construction: z = x_0 + sum_i c_i / 2^{i+1}
    // where c_i = x_{i+1} - 2 x_i (mod 1, signed).
    double z = s.value(po.points[0]);
    for (std::size_t i = 0; i < T; ++i) {
      const double c = signed_wrap(s.value(po.points[i + 1]) - 2.0 * s.value(po.points[i]));
      z += c / std::pow(2.0, static_cast<double>(i + 1));
    }
    z -= std::floor(z);
    double oracle = 0.0;
    double w = z;
    for (std::size_t n = 0; n <= T; ++n) {
      oracle = std::max(oracle, circle_gap(w, s.value(po.points[n])));
      w = std::fmod(2.0 * w, 1.0);
    }
    EXPECT_LE(oracle, delta + 1e-12);

    const auto r = find_shadow_point(seq, po, 0.03, ShadowMode::Plain);
    EXPECT_TRUE(r.success);
    // the grid point nearest z inherits at most 2^T rounding cells of error
    const double bound = delta + std::pow(2.0, static_cast<double>(T)) * s.resolution();
    EXPECT_LE(r.max_error, bound);
    EXPECT_EQ(r.functional, r.max_error);
  }
}

TEST(FindShadow, AlmostModeReportsInitialClause) {
  const Space s = Space::interval_grid(0.0, 1.0, 101);
  const auto ident = MapSequence::autonomous(s, MapPrimitive::identity());
  PseudoOrbit po;
  po.points.assign(11, s.nearest(0.3));
  po.points[0] = s.nearest(0.8);
  po.delta = 0.6;
  const auto r = find_shadow_point(ident, po, 0.1, ShadowMode::Almost);
  EXPECT_FALSE(r.success);
  EXPECT_EQ(r.failed_clause, "initial closeness");
  // the tail alone is shadowed by 0.3
  const auto tail_only = evaluate_shadow(ident, po, s.nearest(0.3), ShadowMode::Almost);
  EXPECT_EQ(tail_only.tail_error, 0.0);
  EXPECT_NEAR(tail_only.initial_closeness, 0.5, 1e-12);
}

TEST(FindShadow, SummariesAreConsistent) {
  const auto seq = doubling(512);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto po = perturbed_orbit(seq, seq.space().point(seed * 41), 8, 0.04, seed);
    const auto r = find_shadow_point(seq, po, 0.2, ShadowMode::Plain);
    double mx = 0.0, tail = 0.0;
    for (std::size_t n = 0; n < r.error_profile.size(); ++n) {
      mx = std::max(mx, r.error_profile[n]);
      if (n >= r.tail_start) tail = std::max(tail, r.error_profile[n]);
    }
    EXPECT_EQ(r.max_error, mx);
    EXPECT_EQ(r.tail_error, tail);
    EXPECT_LE(r.tail_error, r.max_error);
    EXPECT_LE(r.cesaro_error, r.max_error + 1e-15);
    EXPECT_EQ(r.initial_closeness, r.error_profile[0]);
    // a Plain success also passes the almost clause
    if (r.success) EXPECT_TRUE(strictly_below(std::max(r.initial_closeness, r.tail_error), 0.2));
  }
}

TEST(FindShadow, JobsDoNotChangeTheResult) {
  const auto seq = doubling(2048);
  const auto po = perturbed_orbit(seq, seq.space().point(5), 7, 0.05, 3);
  ShadowSearchOptions one, four;
  one.jobs = 1;
  four.jobs = 4;
  const auto a = find_shadow_point(seq, po, 0.1, ShadowMode::Average, one);
  const auto b = find_shadow_point(seq, po, 0.1, ShadowMode::Average, four);
  EXPECT_EQ(a.shadow_point, b.shadow_point);
  EXPECT_EQ(a.qualifying, b.qualifying);
  EXPECT_EQ(a.functional, b.functional);
}

TEST(FindShadow, UniqueUnderRecurrentExpansivity) {
  const auto f = MapSequence::pattern_word(Space::cyclic_words(8), MapPrimitive::cyclic_shift(1),
                                           ExponentRule::named("doubling_blocks_powers"));
  const Verdict re = estimate_recurrent_expansivity(f, 64);
  ASSERT_TRUE(re.holds);
  const double eps = *re.constant / 3.0 - 0.01;
  for (std::size_t o = 0; o < 256; o += 37) {
    const auto po = true_orbit(f, f.space().point(o), 64);
    const auto r = find_shadow_point(f, po, eps, ShadowMode::Almost);
    EXPECT_TRUE(r.success);
    EXPECT_TRUE(r.unique);
    EXPECT_EQ(r.qualifying, 1u);
  }
}

TEST(ShadowingProperty, DoublingHoldsWithUsefulDelta) {
  ShadowingOptions opt;
  opt.eps = 0.1;
  opt.sample = 20;
  opt.horizon = 6;
  opt.seed = 11;
  std::vector<ShadowRow> rows;
  const Verdict v = check_shadowing_property(doubling(), opt, &rows);
  EXPECT_TRUE(v.holds);
  ASSERT_TRUE(v.constant.has_value());
  EXPECT_GE(*v.constant, 0.04);
  EXPECT_EQ(v.seed, 11u);
  EXPECT_FALSE(rows.empty());
  std::ostringstream csv;
  write_shadowing_csv(csv, rows);
  EXPECT_EQ(csv.str().rfind("delta,sample_id,success,max_error,tail_error,cesaro_error,shadow_point\n", 0), 0u);
}

TEST(ShadowingProperty, IdentityDriftFails) {
  ShadowingOptions opt;
  opt.eps = 0.05;
  opt.delta_grid = {0.02, 0.01};
  opt.sample = 10;
  opt.horizon = 200;
  const auto ident = MapSequence::autonomous(Space::interval_grid(0.0, 1.0, 201), MapPrimitive::identity());
  const Verdict v = check_shadowing_property(ident, opt);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->points.size(), 201u);
}

TEST(ShadowingProperty, StabilizingSystemHasAlmostShadowing) {
  ShadowingOptions opt;
  opt.eps = 0.1;
  opt.mode = ShadowMode::Almost;
  opt.sample = 20;
  opt.horizon = 9;
  const Verdict v = check_shadowing_property(stabilizing_line(), opt);
  EXPECT_TRUE(v.holds);
}

TEST(ShadowingProperty, DeterministicUnderSeed) {
  ShadowingOptions opt;
  opt.eps = 0.1;
  opt.sample = 6;
  opt.horizon = 6;
  opt.mode = ShadowMode::StrongAverage;
  std::vector<ShadowRow> a, b;
  opt.jobs = 1;
  check_shadowing_property(doubling(1024), opt, &a);
  opt.jobs = 3;
  check_shadowing_property(doubling(1024), opt, &b);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].shadow_point, b[i].shadow_point);
    EXPECT_EQ(a[i].max_error, b[i].max_error);
  }
}

TEST(IterateConsistency, StabilizingAndIdentity) {
  ShadowingOptions opt;
  opt.eps = 0.1;
  opt.sample = 10;
  opt.horizon = 9;
  const auto f = stabilizing_line();
  const Verdict eq = check_equicontinuity(f, 0.1, 10);
  const Verdict v = check_iterate_alsp_consistency(f, 3, opt, eq);
  EXPECT_TRUE(v.holds);
  ASSERT_EQ(v.notes.size(), 2u);
  EXPECT_NE(v.notes[0].find("holds"), std::string::npos);
  EXPECT_NE(v.notes[1].find("holds"), std::string::npos);

  const auto ident = MapSequence::autonomous(Space::interval_grid(0.0, 1.0, 201), MapPrimitive::identity());
  ShadowingOptions drift = opt;
  drift.eps = 0.05;
  drift.delta_grid = {0.02};
  drift.horizon = 800;
  const Verdict vi = check_iterate_alsp_consistency(ident, 2, drift, check_equicontinuity(ident, 0.05, 1));
  EXPECT_TRUE(vi.holds);
  EXPECT_NE(vi.notes[0].find("fails"), std::string::npos);
  EXPECT_NE(vi.notes[1].find("fails"), std::string::npos);

  EXPECT_THROW(check_iterate_alsp_consistency(f, 3, opt, std::nullopt), ArgumentError);
}
