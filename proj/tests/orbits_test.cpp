#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "nas/orbits.hpp"

using namespace nas;

namespace {

MapSequence doubling(std::size_t n) { return MapSequence::autonomous(Space::circle_grid(n), MapPrimitive::affine_mod1(2.0, 0.0)); }

}  // namespace

TEST(Orbits, TrueOrbitValues) {
  const Space s = Space::interval_grid(0.0, 1.0, 101);
  const auto ident = MapSequence::autonomous(s, MapPrimitive::identity());
  const auto still = true_orbit(ident, s.nearest(0.37), 5);
  ASSERT_EQ(still.points.size(), 6u);
  for (const auto& p : still.points) EXPECT_EQ(p, s.nearest(0.37));

  const auto tent = MapSequence::autonomous(s, MapPrimitive::tent());
  const auto t = true_orbit(tent, s.nearest(0.25), 2);
  EXPECT_DOUBLE_EQ(s.value(t.points[1]), 0.5);
  EXPECT_DOUBLE_EQ(s.value(t.points[2]), 1.0);

  const Space line = Space::line_window(-1.0, 1.0, 201);
  const auto stab = MapSequence::periodic(line, {MapPrimitive::affine(2.0, 0.0), MapPrimitive::identity(), MapPrimitive::identity()});
  const auto o = true_orbit(stab, line.nearest(0.5), 3);
  const std::vector<double> want{0.5, 1.0, 1.0, 1.0};
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(line.value(o.points[i]), want[i], 1e-12);
}

TEST(Orbits, TrueOrbitValidates) {
  const auto seq = doubling(256);
  for (std::size_t o = 0; o < 256; o += 17) {
    auto po = true_orbit(seq, seq.space().point(o), 40);
    EXPECT_TRUE(validate_pseudo_orbit(seq, po).holds);
    po.kind = OrbitKind::Average;
    EXPECT_TRUE(validate_pseudo_orbit(seq, po).holds);
  }
}

TEST(Orbits, PerturbedOrbitIsDeterministicAndValid) {
  const auto seq = doubling(256);
  const auto a = perturbed_orbit(seq, seq.space().point(3), 50, 0.05, 42);
  const auto b = perturbed_orbit(seq, seq.space().point(3), 50, 0.05, 42);
  EXPECT_EQ(a.points, b.points);
  EXPECT_TRUE(validate_pseudo_orbit(seq, a).holds);
  const auto c = perturbed_orbit(seq, seq.space().point(3), 50, 0.05, 43);
  EXPECT_NE(a.points, c.points);
  // the step errors are the oracle: recomputed independently
  for (std::size_t i = 0; i < 50; ++i) {
    const double v = seq.space().value(a.points[i]);
    const double image = std::fmod(2.0 * v, 1.0);
    const double w = seq.space().value(a.points[i + 1]);
    const double d = std::min(std::abs(image - w), 1.0 - std::abs(image - w));
    EXPECT_LT(d, 0.05);
  }
}

TEST(Orbits, PerturbationJustAboveResolutionStaysOnOrbit) {
  const auto seq = doubling(256);
  const double delta = seq.space().resolution() * 1.5;
  const auto po = perturbed_orbit(seq, seq.space().point(5), 20, delta, 1);
  EXPECT_EQ(po.points, true_orbit(seq, seq.space().point(5), 20).points);
  EXPECT_THROW(perturbed_orbit(seq, seq.space().point(5), 20, seq.space().resolution(), 1), ArgumentError);
}

TEST(Orbits, DisplacedStepIsReported) {
  const auto seq = doubling(256);
  auto po = true_orbit(seq, seq.space().point(9), 20);
  po.delta = 0.02;
  // displace x_7 by about 3 delta
  po.points[7] = seq.space().nearest(seq.space().value(po.points[7]) + 0.06);
  const Verdict v = validate_pseudo_orbit(seq, po);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->index, 6u);
}

TEST(Orbits, AverageOrbitToleratesEarlyJump) {
  const Space s = Space::interval_grid(0.0, 1.0, 101);
  const auto ident = MapSequence::autonomous(s, MapPrimitive::identity());
  PseudoOrbit po;
  po.points.assign(41, s.nearest(0.8));
  po.points[0] = s.nearest(0.3);  // one step of size 0.5
  po.delta = 0.1;
  po.kind = OrbitKind::Average;
  po.n_delta = 10;
  EXPECT_TRUE(validate_pseudo_orbit(ident, po).holds);
  po.kind = OrbitKind::Plain;
  EXPECT_FALSE(validate_pseudo_orbit(ident, po).holds);
  po.kind = OrbitKind::Average;
  po.n_delta = 4;
  const Verdict v = validate_pseudo_orbit(ident, po);
  EXPECT_FALSE(v.holds);
  EXPECT_EQ(v.witness->window_n, 4u);
  EXPECT_EQ(v.witness->window_k, 0u);
}

TEST(Orbits, GeneratedAverageOrbitsValidate) {
  const auto seq = doubling(512);
  for (std::size_t p : {1u, 3u, 8u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto po = average_pseudo_orbit(seq, seq.space().point(11), 60, 0.05, p, seed);
      EXPECT_TRUE(validate_pseudo_orbit(seq, po).holds) << p;
    }
  }
}

TEST(Orbits, PlainImpliesAverageAndMonotoneInDelta) {
  const auto seq = doubling(256);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto po = perturbed_orbit(seq, seq.space().point(seed * 7), 30, 0.03, seed);
    ASSERT_TRUE(validate_pseudo_orbit(seq, po).holds);
    po.kind = OrbitKind::Average;
    po.n_delta = 1;
    EXPECT_TRUE(validate_pseudo_orbit(seq, po).holds);
    po.kind = OrbitKind::Plain;
    po.delta = 0.05;
    EXPECT_TRUE(validate_pseudo_orbit(seq, po).holds);
  }
}

TEST(Orbits, CsvRoundTrip) {
  const Space words = Space::cyclic_words(6);
  const auto seq = MapSequence::autonomous(words, MapPrimitive::cyclic_shift(1));
  auto po = perturbed_orbit(seq, {13, 0}, 12, 0.3, 5);
  std::stringstream buf;
  write_orbit_csv(buf, words, po);
  const auto back = read_orbit_csv(buf, words);
  EXPECT_EQ(back.points, po.points);
  EXPECT_DOUBLE_EQ(back.delta, po.delta);
  EXPECT_EQ(back.kind, po.kind);
}
