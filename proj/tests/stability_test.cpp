#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <sstream>

#include "nas/stability.hpp"

using namespace nas;

namespace {

MapSequence doubling(std::size_t n, double b = 0.0) {
  return MapSequence::autonomous(Space::circle_grid(n), MapPrimitive::affine_mod1(2.0, b));
}

MapSequence scaling_triplet(const Space& s, double b) {
  return MapSequence::periodic(s, {MapPrimitive::affine(2.0, b), MapPrimitive::identity(), MapPrimitive::identity()});
}

double circle_gap(double a, double b) {
  const double d = std::abs(a - b);
  return std::min(d, 1.0 - d);
}

std::vector<PointId> table_of(const Space& s, const std::function<PointId(const PointId&)>& fn) {
  std::vector<PointId> out;
  for (std::size_t i = 0; i < s.size(); ++i) out.push_back(fn(s.point(i)));
  return out;
}

}  // namespace

TEST(Conjugacy, SameSystemGivesIdentity) {
  const auto f = doubling(256);
  ConjugacyOptions opt;
  opt.eps = 0.05;
  opt.horizon = 8;
  const auto h = construct_conjugacy(f, f, opt);
  for (std::size_t i = 0; i < h.domain.size(); ++i) EXPECT_EQ(h.table[i], h.domain[i]);
  EXPECT_EQ(h.closeness, 0.0);
  EXPECT_EQ(h.semiconj_residual, 0.0);
  EXPECT_FALSE(h.failed_at.has_value());
  EXPECT_TRUE(verify_conjugacy(f, f, h, 0.05).holds);
  EXPECT_TRUE(check_uniqueness(f, f, h, 0.05).holds);
}

TEST(Conjugacy, DoublingTranslationOracle) {
  const auto f = doubling(4096);
  const auto g = doubling(4096, 0.01);
  const Space& s = f.space();
  ConjugacyOptions opt;
  opt.eps = 0.05;
  opt.horizon = 11;
  const auto t0 = std::chrono::steady_clock::now();
  const auto h = construct_conjugacy(f, g, opt);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 60.0);
  ASSERT_FALSE(h.failed_at.has_value());
  EXPECT_FALSE(h.hypothesis_violated);
  // f(h x) = h(g x) with f = 2x, g = 2x + b forces h(x) = x + b
  double worst = 0.0;
  for (std::size_t i = 0; i < h.domain.size(); ++i)
    worst = std::max(worst, circle_gap(s.value(h.table[i]), std::fmod(s.value(h.domain[i]) + 0.01, 1.0)));
  EXPECT_LE(worst, 2.0 * s.resolution());
  EXPECT_LE(h.semiconj_residual, 3.0 * s.resolution());
  EXPECT_TRUE(h.injective);
  EXPECT_TRUE(h.residual_within_bound);
  EXPECT_NEAR(h.gamma, 0.01, s.resolution());
  EXPECT_TRUE(verify_conjugacy(f, g, h, 0.05).holds);
  EXPECT_TRUE(check_uniqueness(f, g, h, 0.05).holds);
  EXPECT_TRUE(check_injectivity(g, h, 0.05, *h.expansivity).holds);
}

TEST(Conjugacy, ScalingTripletOracle) {
  const Space s = Space::line_window(-1.0, 1.0, 2001);
  const auto f = scaling_triplet(s, 0.0);
  const auto g = scaling_triplet(s, 0.01);
  ConjugacyOptions opt;
  opt.eps = 0.05;
  opt.horizon = 36;
  opt.mode = ConjugacyMode::Recurrent;
  const auto h = construct_conjugacy(f, g, opt);
  ASSERT_FALSE(h.failed_at.has_value());
  // 2 h(x) = h(2x + b) forces h(x) = x + b / (2 - 1)
  double worst = 0.0;
  for (std::size_t i = 0; i < h.domain.size(); ++i)
    worst = std::max(worst, std::abs(s.value(h.table[i]) - (s.value(h.domain[i]) + 0.01)));
  EXPECT_LE(worst, 2.0 * s.resolution());
  EXPECT_LT(h.closeness, 0.05);
  EXPECT_GT(h.residual_skipped, 0u);
  EXPECT_TRUE(verify_conjugacy(f, g, h, 0.05).holds);
  EXPECT_TRUE(check_uniqueness(f, g, h, 0.05).holds);
}

TEST(Conjugacy, IdentityTableAgainstLargePerturbation) {
  const auto f = doubling(512);
  const auto g = doubling(512, 0.3);
  ConjugacyMap h;
  h.eps = 0.05;
  h.horizon = 4;
  h.domain = table_of(f.space(), [](const PointId& p) { return p; });
  h.table = h.domain;
  h.shadow_error.assign(h.domain.size(), 0.0);
  h.qualifying.assign(h.domain.size(), 1);
  // closeness and residual come from the table, not from the stale fields
  h.semiconj_residual = 0.0;
  const Verdict v = verify_conjugacy(f, g, h, 0.05);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_NEAR(*v.constant, 0.3, f.space().resolution() * 2);
  EXPECT_NEAR(*v.witness->value, 0.3, f.space().resolution() * 2);
}

TEST(Conjugacy, UniquenessNeedsExpansivity) {
  const auto ident = MapSequence::autonomous(Space::interval_grid(0.0, 1.0, 101), MapPrimitive::identity());
  ConjugacyOptions opt;
  opt.eps = 0.05;
  opt.horizon = 10;
  const auto h = construct_conjugacy(ident, ident, opt);
  EXPECT_TRUE(h.hypothesis_violated);
  const Verdict u = check_uniqueness(ident, ident, h, 0.05);
  EXPECT_FALSE(u.holds);
  ASSERT_TRUE(u.witness.has_value());
  EXPECT_EQ(u.witness->points.size(), 3u);
  EXPECT_GT(*u.constant, 1.0);
}

TEST(Conjugacy, HypothesisStampWhenEpsTooLarge) {
  const auto f = doubling(256);
  ConjugacyOptions opt;
  opt.eps = 0.2;
  opt.horizon = 8;
  const auto h = construct_conjugacy(f, f, opt);
  ASSERT_TRUE(h.expansivity.has_value());
  EXPECT_GE(opt.eps, *h.expansivity / 3.0);
  EXPECT_TRUE(h.hypothesis_violated);
  EXPECT_FALSE(h.hypothesis_notes.empty());
  opt.eps = 0.05;
  opt.delta = 0.001;
  const auto far = construct_conjugacy(f, doubling(256, 0.01), opt);
  EXPECT_TRUE(far.hypothesis_violated);
}

TEST(Conjugacy, InjectivityWitness) {
  const auto g = doubling(64);
  ConjugacyMap h;
  h.domain = table_of(g.space(), [](const PointId& p) { return p; });
  h.table.assign(h.domain.size(), g.space().point(0));
  const Verdict v = check_injectivity(g, h, 0.05, 0.5);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->points[0], g.space().point(0));
  EXPECT_EQ(v.witness->points[1], g.space().point(1));

  const auto coarse = doubling(8);
  ConjugacyMap hc;
  hc.domain = table_of(coarse.space(), [](const PointId& p) { return p; });
  hc.table = hc.domain;
  hc.table[1] = hc.table[0];
  const Verdict vc = check_injectivity(coarse, hc, 0.05, 0.5);
  EXPECT_FALSE(vc.holds);
  EXPECT_NE(vc.witness->note.find("resolution"), std::string::npos);
}

TEST(Conjugacy, ContinuityModulusIsMonotone) {
  const auto f = doubling(1024);
  ConjugacyOptions opt;
  opt.eps = 0.05;
  opt.horizon = 10;
  const auto h = construct_conjugacy(f, doubling(1024, 0.01), opt);
  ASSERT_EQ(h.continuity_modulus.size(), opt.lambdas.size());
  for (std::size_t i = 0; i < h.continuity_modulus.size(); ++i) {
    const auto [lam, alpha] = h.continuity_modulus[i];
    EXPECT_GT(alpha, 0.0);
    if (i > 0) {
      EXPECT_GT(lam, h.continuity_modulus[i - 1].first);
      EXPECT_GE(alpha, h.continuity_modulus[i - 1].second);
    }
    // the modulus claim itself, checked on all pairs
    for (std::size_t a = 0; a < h.domain.size(); a += 7)
      for (std::size_t b = 0; b < h.domain.size(); ++b)
        if (f.space().dist(h.domain[a], h.domain[b]) < alpha) {
          ASSERT_LT(f.space().dist(h.table[a], h.table[b]), lam + kTol);
        }
  }
}

TEST(Conjugacy, JobsDoNotChangeTheTable) {
  ConjugacyOptions opt;
  opt.eps = 0.05;
  opt.horizon = 10;
  opt.jobs = 1;
  const auto a = construct_conjugacy(doubling(1024), doubling(1024, 0.01), opt);
  opt.jobs = 4;
  const auto b = construct_conjugacy(doubling(1024), doubling(1024, 0.01), opt);
  EXPECT_EQ(a.table, b.table);
  EXPECT_EQ(a.shadow_error, b.shadow_error);
  EXPECT_EQ(a.continuity_modulus, b.continuity_modulus);
}

TEST(Transport, IdentityEquivalenceMatchesDirectConstruction) {
  const auto f = doubling(512);
  const auto g = doubling(512, 0.01);
  ConjugacyOptions opt;
  opt.eps = 0.05;
  opt.horizon = 9;
  const auto direct = construct_conjugacy(f, g, opt);
  const auto moved = transport_conjugacy(f, f, table_of(f.space(), [](const PointId& p) { return p; }), g, opt);
  EXPECT_EQ(direct.table, moved.table);
  EXPECT_TRUE(verify_conjugacy(f, g, moved, 0.05).holds);
}

TEST(Transport, ReflectionCarriesTentToFlippedTent) {
  const Space s = Space::interval_grid(0.0, 1.0, 21);
  const auto tent = MapSequence::autonomous(s, MapPrimitive::tent());
  const auto reflect = table_of(s, [&](const PointId& p) { return s.nearest(1.0 - s.value(p)); });
  const auto flipped = MapSequence::autonomous(
      s, MapPrimitive::table(s, table_of(s, [&](const PointId& p) {
                               return s.nearest(1.0 - s.value(MapPrimitive::tent().apply(s, p)));
                             })));
  ConjugacyOptions opt;
  opt.eps = 0.03;
  opt.horizon = 5;
  const auto k = transport_conjugacy(tent, flipped, reflect, flipped, opt);
  EXPECT_TRUE(verify_conjugacy(flipped, flipped, k, 0.03).holds);
  // the reflection does not intertwine the tent with itself
  EXPECT_THROW(transport_conjugacy(tent, tent, reflect, tent, opt), ArgumentError);
  auto folded = reflect;
  folded[0] = folded[1];
  EXPECT_THROW(transport_conjugacy(tent, flipped, folded, flipped, opt), ArgumentError);
}

TEST(Transport, ShiftEquivalenceOnWords) {
  const Space s = Space::cyclic_words(6);
  const auto shift = MapSequence::autonomous(s, MapPrimitive::cyclic_shift(1));
  const auto j = table_of(s, [&](const PointId& p) { return MapPrimitive::cyclic_shift(1).apply(s, p); });
  ConjugacyOptions opt;
  opt.eps = 0.1;
  opt.horizon = 6;
  const auto k = transport_conjugacy(shift, shift, j, shift, opt);
  EXPECT_TRUE(verify_conjugacy(shift, shift, k, 0.1).holds);
  for (std::size_t i = 0; i < k.domain.size(); ++i) EXPECT_EQ(k.table[i], k.domain[i]);
}

TEST(Conjugacy, CsvHeader) {
  const auto f = doubling(16);
  ConjugacyOptions opt;
  opt.eps = 0.05;
  opt.horizon = 4;
  std::ostringstream os;
  write_conjugacy_csv(os, f.space(), construct_conjugacy(f, f, opt));
  const std::string text = os.str();
  EXPECT_EQ(text.rfind("point,image,shadow_error,qualifying\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 17);
}
