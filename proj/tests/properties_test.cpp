#include <gtest/gtest.h>

#include "battery.hpp"

using namespace nas::battery;

namespace {

void expect_ok(const Outcome& o) {
  std::string log;
  for (const auto& l : o.log) log += "  " + l + "\n";
  EXPECT_GT(o.applicable, 0u) << o.name << ": no case met the premises\n" << log;
  for (const auto& v : o.violations) ADD_FAILURE() << o.name << ": " << v << "\n" << log;
  if (std::getenv("NAS_PROPERTY_LOG")) std::cout << o.name << "\n" << log;
}

}  // namespace

TEST(ProductLaws, ExpansivityVariants) { expect_ok(expansivity_product_law()); }
TEST(ProductLaws, MeanEquicontinuity) { expect_ok(mean_equicontinuity_product_law()); }
TEST(ProductLaws, StrongAverageAndAlmostShadowing) { expect_ok(shadowing_product_law()); }

TEST(IterateLaws, MeanEquicontinuityPassesToIterates) { expect_ok(mean_equicontinuity_passes_to_iterates()); }
TEST(IterateLaws, RecurrentExpansivityUnderEquicontinuity) {
  expect_ok(recurrent_expansivity_iterates_under_equicontinuity());
}
TEST(IterateLaws, MeanExpansivityFromIterate) { expect_ok(mean_expansivity_from_iterate()); }
TEST(IterateLaws, PeriodicMeanExpansivityToIterates) { expect_ok(periodic_mean_expansivity_to_iterates()); }
TEST(IterateLaws, AlmostShadowingUnderEquicontinuity) { expect_ok(almost_shadowing_iterates_under_equicontinuity()); }

TEST(Counterexamples, BlockShiftWord) { expect_ok(block_shift_counterexample()); }
TEST(Counterexamples, PowerPairsWord) { expect_ok(power_pairs_counterexample()); }

const std::vector<Outcome>& chain_outcomes() {
  static const std::vector<Outcome> o = chain_suite();
  return o;
}

TEST(ChainImplications, EquicontinuousTransitiveIsChainTransitive) { expect_ok(chain_outcomes().at(0)); }
TEST(ChainImplications, SurjectiveChainTransitiveShadowingIsTransitive) { expect_ok(chain_outcomes().at(1)); }
