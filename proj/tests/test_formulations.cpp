#include <gtest/gtest.h>

#include <filesystem>

#include "micro.hpp"
#include "mind/formulations.hpp"
#include "oracles.hpp"

using namespace mind;
using mind::testing::micro_instance;

namespace {

const Method kExtensive[] = {Method::Compact, Method::Segment, Method::Path, Method::Subpath};

// Only p2 (already at checkpoint B at 300 s) is worth serving: 10 minutes of
// trip cost, 300 s of riding over a 200 s direct drive, minus the reward.
constexpr double kTriangleOptimum = 10.0 + 1.5 - 10000.0;

}  // namespace

TEST(Formulations, MethodNamesRoundTrip) {
  for (Method m : {Method::Compact, Method::Segment, Method::Path, Method::Subpath, Method::DD, Method::DDILS})
    EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_FALSE(parse_method("nope").has_value());
}

TEST(Formulations, TriangleOptimumEveryFormulation) {
  Problem pb(tri1_instance());
  for (Method m : kExtensive) {
    auto r = solve_extensive(pb, m);
    ASSERT_EQ(r.solution.status, SolveStatus::Optimal) << to_string(m);
    EXPECT_NEAR(r.solution.objective, kTriangleOptimum, 1e-6) << to_string(m);
    EXPECT_EQ(r.solution.x, std::vector<int>{1});
    EXPECT_EQ(r.solution.z[0], (std::vector<int>{0, 0, 1})) << to_string(m);
  }
}

TEST(Formulations, TriangleBruteForce) {
  Problem pb(tri1_instance());
  EXPECT_NEAR(mind::testing::brute_force_optimum(pb), kTriangleOptimum, 1e-6);
}

TEST(Formulations, MicroInstancesAgreeWithBruteForce) {
  for (std::uint64_t seed : {2, 5, 8, 11, 13, 16, 21, 24}) {
    Problem pb(micro_instance(seed));
    const double oracle = mind::testing::brute_force_optimum(pb);
    for (Method m : kExtensive) {
      auto r = solve_extensive(pb, m);
      ASSERT_EQ(r.solution.status, SolveStatus::Optimal) << seed << " " << to_string(m);
      EXPECT_NEAR(r.solution.objective, oracle, 1e-6 * std::max(1.0, std::abs(oracle))) << seed << " " << to_string(m);
    }
  }
}

TEST(Formulations, SecondStageLpOrderingAtFixedFirstStage) {
  for (std::uint64_t seed : {3, 10, 15, 20}) {
    Problem pb(micro_instance(seed));
    const Solution ref = solve_extensive(pb, Method::Subpath).solution;
    std::map<Method, double> v;
    for (Method m : kExtensive) {
      ExtensiveOptions o;
      o.relax_second = true;
      o.fix_x = ref.x;
      o.fix_z = ref.z;
      v[m] = solve_extensive(pb, m, o).solution.objective;
    }
    const double tol = 1e-6 * std::max(1.0, std::abs(ref.objective));
    EXPECT_LE(v[Method::Compact], v[Method::Segment] + tol) << seed;
    EXPECT_LE(v[Method::Segment], v[Method::Path] + tol) << seed;
    EXPECT_NEAR(v[Method::Path], v[Method::Subpath], tol) << seed;
    EXPECT_LE(v[Method::Subpath], ref.objective + tol) << seed;
  }
}

TEST(Formulations, RelaxationIsALowerBound) {
  for (std::uint64_t seed : {3, 9, 18}) {
    Problem pb(micro_instance(seed));
    const double opt = solve_extensive(pb, Method::Subpath).solution.objective;
    for (Method m : kExtensive) {
      ExtensiveOptions o;
      o.relax = true;
      EXPECT_LE(solve_extensive(pb, m, o).solution.objective, opt + 1e-6 * std::abs(opt)) << to_string(m);
    }
  }
}

TEST(Formulations, FirstStageRowCount) {
  for (std::uint64_t seed : {2, 3, 9}) {
    Problem pb(micro_instance(seed));
    auto m = make_model();
    FirstStage fs = add_first_stage(pb, *m);
    EXPECT_EQ(fs.rows, first_stage_row_count(pb));
    EXPECT_EQ(m->num_rows(), fs.rows);
    EXPECT_EQ(static_cast<int>(fs.x.size()), static_cast<int>(pb.trips().size()));
  }
}

TEST(Formulations, FixedFirstStageEvaluationMatchesObjective) {
  for (std::uint64_t seed : {3, 10, 23}) {
    Problem pb(micro_instance(seed));
    const Solution s = solve_extensive(pb, Method::Path).solution;
    const Solution e = evaluate_first_stage(pb, s.x, s.z);
    EXPECT_NEAR(e.objective, s.objective, 1e-6 * std::abs(s.objective));
    const Solution f = solve_with_fixed_x(pb, s.x);
    EXPECT_NEAR(f.objective, s.objective, 1e-6 * std::abs(s.objective));
  }
}

TEST(Formulations, CoarseSegmentGridIsRejected) {
  Problem pb(tri1_instance());
  ExtensiveOptions o;
  o.segment_rho = 120;
  EXPECT_THROW(solve_extensive(pb, Method::Segment, o), DiscretizationError);
}

TEST(Formulations, PathCountsMatchEnumeration) {
  Problem pb(micro_instance(15));
  for (size_t b = 0; b < pb.blocks().size(); ++b) {
    LoadNetwork net = build_load_network(pb, static_cast<int>(b), full_subpaths(pb, static_cast<int>(b)), true);
    auto paths = enumerate_paths(net, 1000000);
    ASSERT_TRUE(paths.has_value());
    // Each path is a source-to-sink arc chain.
    for (const auto& p : *paths) {
      ASSERT_FALSE(p.empty());
      EXPECT_EQ(net.arcs[p.front()].tail, net.source());
      EXPECT_EQ(net.arcs[p.back()].head, net.sink());
      for (size_t k = 1; k < p.size(); ++k) EXPECT_EQ(net.arcs[p[k - 1]].head, net.arcs[p[k]].tail);
    }
    EXPECT_FALSE(enumerate_paths(net, 0).has_value() && !paths->empty());
  }
}

TEST(Formulations, ModelExport) {
  Problem pb(tri1_instance());
  const auto path = std::filesystem::temp_directory_path() / "mind_tri1_subpath.lp";
  ExtensiveOptions o;
  o.write_path = path.string();
  solve_extensive(pb, Method::Subpath, o);
  EXPECT_TRUE(std::filesystem::exists(path));
  EXPECT_GT(std::filesystem::file_size(path), 0u);
  std::filesystem::remove(path);
}
