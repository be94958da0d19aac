#include <gtest/gtest.h>

#include "micro.hpp"
#include "mind/dd.hpp"
#include "oracles.hpp"

using namespace mind;
using mind::testing::micro_instance;

namespace {

double rel(double v) { return 1e-6 * std::max(1.0, std::abs(v)); }

DDResult run(const Problem& pb, bool ils, PricingMode mode = PricingMode::Exact, bool heuristic_first = true) {
  DDOptions o;
  o.ils = ils;
  o.pricing = mode;
  o.heuristic_first = heuristic_first;
  o.max_iter = 200;
  return solve_dd(pb, o);
}

}  // namespace

TEST(Decomposition, TriangleOptimum) {
  Problem pb(tri1_instance());
  for (bool ils : {false, true}) {
    DDResult r = run(pb, ils);
    EXPECT_TRUE(r.converged);
    EXPECT_TRUE(r.certified);
    EXPECT_NEAR(r.lower_bound, -9988.5, 1e-6);
    EXPECT_NEAR(r.solution.objective, -9988.5, 1e-6);
    ASSERT_EQ(r.solution.routes.size(), 1u);
  }
}

TEST(Decomposition, BoundEqualsMixedRelaxation) {
  for (std::uint64_t seed : {3, 9, 10, 15, 23}) {
    Problem pb(micro_instance(seed));
    ExtensiveOptions o;
    o.relax_second = true;
    const double mixed = solve_extensive(pb, Method::Subpath, o).solution.objective;
    DDResult r = run(pb, false);
    ASSERT_TRUE(r.converged) << seed;
    EXPECT_NEAR(r.lower_bound, mixed, rel(mixed)) << seed;
    EXPECT_LE(r.lower_bound, r.solution.objective + rel(mixed));
  }
}

TEST(Decomposition, IntegerLShapedMatchesBruteForce) {
  for (std::uint64_t seed : {2, 10, 13, 21}) {
    Problem pb(micro_instance(seed));
    const double oracle = mind::testing::brute_force_optimum(pb);
    DDResult r = run(pb, true);
    ASSERT_TRUE(r.converged) << seed;
    EXPECT_NEAR(r.solution.objective, oracle, rel(oracle)) << seed;
    EXPECT_NEAR(r.lower_bound, oracle, rel(oracle)) << seed;
  }
}

TEST(Decomposition, PositiveGapClosedByIntegerCuts) {
  Problem pb(micro_instance(10));
  DDResult plain = run(pb, false);
  DDResult ils = run(pb, true);
  EXPECT_GT(plain.integer_value - plain.lower_bound, 0.5);
  EXPECT_GT(ils.ils_cuts, 0);
  EXPECT_NEAR(ils.solution.objective, ils.lower_bound, rel(ils.lower_bound));
  EXPECT_LT(ils.solution.objective, plain.solution.objective + rel(plain.lower_bound));
}

TEST(Decomposition, PricingModesAgree) {
  for (std::uint64_t seed : {3, 15}) {
    Problem pb(micro_instance(seed));
    DDResult exact = run(pb, false, PricingMode::Exact, false);
    DDResult mixed = run(pb, false, PricingMode::Exact, true);
    DDResult milp = run(pb, false, PricingMode::Milp, false);
    DDResult heur = run(pb, false, PricingMode::Heuristic, false);
    EXPECT_NEAR(exact.lower_bound, mixed.lower_bound, rel(exact.lower_bound));
    EXPECT_NEAR(exact.lower_bound, milp.lower_bound, rel(exact.lower_bound));
    EXPECT_TRUE(exact.certified);
    EXPECT_FALSE(heur.certified);
    // A partial column set can only overestimate the second stage.
    EXPECT_GE(heur.lower_bound, exact.lower_bound - rel(exact.lower_bound));
  }
}

TEST(Decomposition, ThreadsDoNotChangeResults) {
  Problem pb(micro_instance(23));
  DDOptions o;
  o.ils = true;
  o.deterministic = true;
  DDResult one = solve_dd(pb, o);
  o.threads = 4;
  DDResult four = solve_dd(pb, o);
  EXPECT_NEAR(one.lower_bound, four.lower_bound, rel(one.lower_bound));
  EXPECT_NEAR(one.solution.objective, four.solution.objective, rel(one.lower_bound));
}

TEST(Decomposition, DeterministicLogIsReproducible) {
  Problem pb(micro_instance(9));
  DDOptions o;
  o.ils = true;
  o.deterministic = true;
  const std::string a = iterations_csv(solve_dd(pb, o));
  const std::string b = iterations_csv(solve_dd(pb, o));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "iter,phase,lower,upper,cuts,columns,seconds");
}

TEST(Decomposition, IterationLimitIsReported) {
  Problem pb(micro_instance(9));
  DDOptions o;
  o.max_iter = 1;
  DDResult r = solve_dd(pb, o);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations.size(), 1u);
  EXPECT_LE(r.lower_bound, r.solution.objective + rel(r.lower_bound));
}
