#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "nas/dyn_props.hpp"

using namespace nas;

namespace {

MapSequence shift_word(std::size_t L, const char* rule) {
  return MapSequence::pattern_word(Space::cyclic_words(L), MapPrimitive::cyclic_shift(1), ExponentRule::named(rule));
}

MapSequence doubling_line_pairs(std::size_t n = 201) {
  return MapSequence::pattern_word(Space::line_window(-1.0, 1.0, n), MapPrimitive::affine(2.0, 0.0),
                                   ExponentRule::named("ascending_pairs"));
}

// Unpruned min-over-pairs of max-over-window, written independently of the
// library scan.
double brute_separation(const MapSequence& seq, std::size_t H, std::size_t lo, bool cesaro) {
  const Space& s = seq.space();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      PointId x = s.point(i), y = s.point(j);
      double top = 0.0, sum = 0.0;
      for (std::size_t n = 0; n <= H; ++n) {
        const double d = s.dist(x, y);
        if (cesaro) {
          if (n >= 1 && n >= lo) top = std::max(top, sum / static_cast<double>(n));
          sum += d;
        } else if (n >= lo) {
          top = std::max(top, d);
        }
        if (n < H) {
          x = seq.generator(n + 1, x);
          y = seq.generator(n + 1, y);
        }
      }
      best = std::min(best, top);
    }
  }
  return best;
}

}  // namespace

TEST(Equicontinuity, IdentityGivesEps) {
  const Space s = Space::interval_grid(0.0, 1.0, 101);
  const Verdict v = check_equicontinuity(MapSequence::autonomous(s, MapPrimitive::identity()), 0.1, 10);
  EXPECT_TRUE(v.holds);
  EXPECT_NEAR(*v.constant, 0.1, 1e-9);
  EXPECT_TRUE(v.horizon_exact);
}

TEST(Equicontinuity, LipschitzTwoHalvesDelta) {
  const Space line = Space::line_window(-1.0, 1.0, 201);
  const auto slots = MapSequence::periodic(line, {MapPrimitive::identity(), MapPrimitive::affine(2.0, 0.0)});
  const Verdict a = check_equicontinuity(slots, 0.1, 10);
  EXPECT_TRUE(a.holds);
  EXPECT_NEAR(*a.constant, 0.05, line.resolution());
  ASSERT_TRUE(a.witness.has_value());
  EXPECT_EQ(a.witness->index, 2u);

  const Space s = Space::interval_grid(0.0, 1.0, 101);
  const Verdict t = check_equicontinuity(MapSequence::autonomous(s, MapPrimitive::tent()), 0.1, 10);
  EXPECT_TRUE(t.holds);
  EXPECT_NEAR(*t.constant, 0.05, s.resolution());
}

TEST(Equicontinuity, GrowingPowersFail) {
  const Verdict v = check_equicontinuity(doubling_line_pairs(), 0.1, 30);
  EXPECT_FALSE(v.holds);
  EXPECT_FALSE(v.horizon_exact);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->points.size(), 2u);
}

TEST(MeanEquicontinuity, IsometryAndContraction) {
  MeanEquicontinuityOptions opt;
  opt.eps = 0.1;
  opt.trials = 60;
  opt.length = 60;
  const Space circle = Space::circle_grid(200);
  const Verdict rot = check_mean_equicontinuity(MapSequence::autonomous(circle, MapPrimitive::affine_mod1(1.0, 0.25)), opt);
  EXPECT_TRUE(rot.holds);
  EXPECT_NEAR(*rot.constant, 0.1, 1e-9);

  const Verdict id = check_mean_equicontinuity(MapSequence::autonomous(circle, MapPrimitive::identity()), opt);
  EXPECT_TRUE(id.holds);
  EXPECT_NEAR(*id.constant, 0.1, 1e-9);

  const Space grid = Space::interval_grid(0.0, 1.0, 101);
  const Verdict con = check_mean_equicontinuity(MapSequence::autonomous(grid, MapPrimitive::affine(0.5, 0.0)), opt);
  EXPECT_TRUE(con.holds);
  EXPECT_DOUBLE_EQ(*con.constant, 0.1);
  EXPECT_FALSE(con.witness.has_value());
  EXPECT_EQ(con.seed, opt.seed);
}

TEST(MeanEquicontinuity, ShiftIsTwoLipschitz) {
  MeanEquicontinuityOptions opt;
  opt.eps = 0.3;
  opt.trials = 60;
  opt.length = 40;
  const Verdict v = check_mean_equicontinuity(
      MapSequence::autonomous(Space::cyclic_words(8), MapPrimitive::cyclic_shift(1)), opt);
  EXPECT_TRUE(v.holds);
  EXPECT_GE(*v.constant, 0.15 - 1e-9);
}

TEST(MeanEquicontinuity, GrowingPowersFail) {
  MeanEquicontinuityOptions opt;
  opt.eps = 0.1;
  opt.trials = 40;
  opt.length = 40;
  opt.horizon = 20;
  const Verdict v = check_mean_equicontinuity(doubling_line_pairs(), opt);
  EXPECT_FALSE(v.holds);
  EXPECT_TRUE(v.witness.has_value());
}

TEST(MeanEquicontinuity, DeterministicAcrossJobs) {
  MeanEquicontinuityOptions opt;
  opt.eps = 0.2;
  opt.trials = 30;
  opt.length = 30;
  const auto seq = MapSequence::autonomous(Space::circle_grid(128), MapPrimitive::affine_mod1(2.0, 0.0));
  opt.jobs = 1;
  const Verdict a = check_mean_equicontinuity(seq, opt);
  opt.jobs = 4;
  const Verdict b = check_mean_equicontinuity(seq, opt);
  EXPECT_EQ(*a.constant, *b.constant);
  EXPECT_EQ(a.holds, b.holds);
}

TEST(Expansivity, SuccessorWordMeetsBound) {
  const auto g = MapSequence::pattern_word(Space::successor_set(12), MapPrimitive::successor(1),
                                           ExponentRule::named("signed_pairs"));
  const Verdict v = estimate_expansivity(g, 40);
  EXPECT_TRUE(v.holds);
  EXPECT_GE(*v.constant, 1.0 / 6 - 1e-9);
}

TEST(Expansivity, ShiftWordMeetsBound) {
  const Verdict v = estimate_expansivity(shift_word(8, "signed_pairs"), 64);
  EXPECT_TRUE(v.holds);
  EXPECT_GE(*v.constant, 0.5 - 1e-9);
  const Verdict runs = estimate_expansivity(shift_word(8, "doubling_blocks_runs"), 64);
  EXPECT_GE(*runs.constant, 0.5 - 1e-9);
}

TEST(Expansivity, IdentityOnlyReachesMinimumPairDistance) {
  const Space s = Space::interval_grid(0.0, 1.0, 21);
  const Verdict v = estimate_expansivity(MapSequence::autonomous(s, MapPrimitive::identity()), 10);
  EXPECT_FALSE(v.holds);
  EXPECT_NEAR(*v.constant, s.min_separation(), 1e-12);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->points[0], s.point(0));
  EXPECT_EQ(v.witness->points[1], s.point(1));
}

TEST(RecurrentExpansivity, BlockWordHoldsButSquareFails) {
  const auto f = shift_word(8, "doubling_blocks_powers");
  const Verdict v = estimate_recurrent_expansivity(f, 64);
  EXPECT_TRUE(v.holds);
  EXPECT_GE(*v.constant, 0.5 - 1e-9);
  const Verdict sq = estimate_recurrent_expansivity(iterate_system(f, 2), 32);
  EXPECT_FALSE(sq.holds);
  EXPECT_TRUE(sq.witness.has_value());
  const Verdict id = estimate_recurrent_expansivity(
      MapSequence::autonomous(Space::cyclic_words(6), MapPrimitive::identity()), 10);
  EXPECT_FALSE(id.holds);
}

TEST(MeanExpansivity, PowerPairsHoldButSquareFails) {
  const auto f = doubling_line_pairs();
  const Verdict v = estimate_mean_expansivity(f, 20);
  EXPECT_TRUE(v.holds);
  const Verdict sq = estimate_mean_expansivity(iterate_system(f, 2), 10);
  EXPECT_FALSE(sq.holds);
  // every block is the identity: the averages equal d(x, y)
  EXPECT_NEAR(*sq.constant, f.space().min_separation(), 1e-12);
}

TEST(Expansivity, MatchesBruteForce) {
  const std::vector<MapSequence> systems{
      shift_word(6, "signed_pairs"),
      shift_word(6, "doubling_blocks_powers"),
      MapSequence::autonomous(Space::circle_grid(40), MapPrimitive::affine_mod1(2.0, 0.0)),
      MapSequence::periodic(Space::interval_grid(0.0, 1.0, 31), {MapPrimitive::tent(), MapPrimitive::identity()}),
      doubling_line_pairs(41),
  };
  for (const auto& seq : systems) {
    const std::size_t H = 12;
    EXPECT_DOUBLE_EQ(*estimate_expansivity(seq, H).constant, brute_separation(seq, H, 0, false)) << seq.describe();
    EXPECT_DOUBLE_EQ(*estimate_recurrent_expansivity(seq, H).constant, brute_separation(seq, H, H / 2, false))
        << seq.describe();
    EXPECT_NEAR(*estimate_mean_expansivity(seq, H, 3).constant, brute_separation(seq, H, 3, true), 1e-12)
        << seq.describe();
  }
}

TEST(Expansivity, TailNeverExceedsFullWindowAndJobsInvariant) {
  const std::vector<MapSequence> systems{shift_word(8, "signed_pairs"), shift_word(8, "doubling_blocks_powers"),
                                         doubling_line_pairs()};
  for (const auto& seq : systems) {
    const Verdict full = estimate_expansivity(seq, 40, 1);
    const Verdict tail = estimate_recurrent_expansivity(seq, 40, std::nullopt, 1);
    EXPECT_LE(*tail.constant, *full.constant + 1e-12);
    const Verdict tail4 = estimate_recurrent_expansivity(seq, 40, std::nullopt, 4);
    EXPECT_EQ(*tail.constant, *tail4.constant);
    EXPECT_EQ(tail.witness->points, tail4.witness->points);
  }
  EXPECT_THROW(estimate_recurrent_expansivity(shift_word(6, "signed_pairs"), 10, 10), ArgumentError);
}
