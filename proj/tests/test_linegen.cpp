#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "mind/linegen.hpp"

using namespace mind;

namespace {

Instance grid(int rows, int cols) { return generate_grid_instance(rows, cols, 500, 1, 0, 1, 1); }

// Optimal medoid objective by trying every subset of the given size.
double brute_force_medoids(const std::vector<CandidateLine>& c, int budget, double lambda) {
  const int n = static_cast<int>(c.size());
  double best = 1e300;
  for (int mask = 0; mask < (1 << n); ++mask) {
    if (__builtin_popcount(mask) != budget) continue;
    double v = 0;
    for (int l = 0; l < n; ++l)
      if (mask >> l & 1) v += c[l].q;
    for (int k = 0; k < n; ++k) {
      double d = 1e300;
      for (int l = 0; l < n; ++l)
        if (mask >> l & 1) d = std::min(d, dissimilarity(c[k].checkpoints, c[l].checkpoints));
      v += lambda * d;
    }
    best = std::min(best, v);
  }
  return best;
}

}  // namespace

TEST(Linegen, DissimilarityValues) {
  EXPECT_DOUBLE_EQ(dissimilarity({1, 2, 3}, {1, 2, 3}), 0.0);
  EXPECT_DOUBLE_EQ(dissimilarity({1, 2, 3}, {4, 5}), 1.0);
  EXPECT_DOUBLE_EQ(dissimilarity({1, 2, 3, 4}, {3, 4}), 0.0);
  EXPECT_DOUBLE_EQ(dissimilarity({1, 2, 3, 4}, {1, 5, 6, 4}), 0.5);
  EXPECT_DOUBLE_EQ(dissimilarity({1, 2}, {2, 1}), dissimilarity({2, 1}, {1, 2}));
}

TEST(Linegen, CandidatesEndAtTerminalWithoutRepeats) {
  Instance g = grid(4, 4);
  const int term = g.terminal();
  auto c = bfs_candidate_lines(g.road, term, 3);
  ASSERT_FALSE(c.empty());
  for (const auto& l : c) {
    EXPECT_EQ(l.checkpoints.back(), term);
    EXPECT_GE(l.checkpoints.size(), 3u);
    std::set<int> s(l.checkpoints.begin(), l.checkpoints.end());
    EXPECT_EQ(s.size(), l.checkpoints.size());
    EXPECT_EQ(std::count(l.checkpoints.begin(), l.checkpoints.end(), term), 1);
  }
}

TEST(Linegen, CandidatesAreReproducible) {
  Instance g = grid(3, 4);
  auto a = bfs_candidate_lines(g.road, g.terminal(), 3);
  auto b = bfs_candidate_lines(g.road, g.terminal(), 3);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].checkpoints, b[i].checkpoints);
}

TEST(Linegen, DisconnectedRoadIsRejected) {
  RoadNetwork road;
  for (int i = 0; i < 4; ++i) road.stations.push_back({i, i * 100.0, 0, true});
  road.edges = {{0, 1, 10}, {1, 0, 10}, {2, 3, 10}, {3, 2, 10}};
  EXPECT_THROW(bfs_candidate_lines(road, 3, 2), std::exception);
}

TEST(Linegen, ScoreOfStraightLine) {
  Instance g = grid(2, 4);
  DriveTimes dt(g.road);
  // The top row 4-5-6-7 runs straight into the terminal 7.
  CandidateLine straight{0, {4, 5, 6, 7}};
  score_line(straight, g.road, dt, {}, QualityThresholds{});
  EXPECT_NEAR(straight.max_detour, 1.0, 1e-9);
  EXPECT_NEAR(straight.mean_detour, 1.0, 1e-9);
  EXPECT_NEAR(straight.wrong_way, 0.0, 1e-9);
  CandidateLine back{1, {5, 4, 0, 1, 2, 3, 7}};
  score_line(back, g.road, dt, {}, QualityThresholds{});
  EXPECT_GT(back.max_detour, 1.0);
  EXPECT_GT(back.wrong_way, 0.0);
  EXPECT_GT(back.q, straight.q);
}

TEST(Linegen, PopularityCountsNearbyOrigins) {
  Instance g = grid(2, 4);
  DriveTimes dt(g.road);
  QualityThresholds th;
  th.mode = QualityMode::Popular;
  th.walk_radius_s = 60;  // 80 m
  CandidateLine l{0, {4, 5, 6, 7}};
  score_line(l, g.road, dt, {4, 4, 5, 0}, th);
  EXPECT_NEAR(l.popularity, 3.0 / 4.0, 1e-9);
  EXPECT_NEAR(l.q, -l.popularity, 1e-12);
}

TEST(Linegen, QualityFilterRespectsThresholds) {
  Instance g = grid(4, 4);
  auto all = bfs_candidate_lines(g.road, g.terminal(), 3);
  QualityThresholds th;
  th.max_wrong_way = 0.0;
  th.max_max_detour = 1.3;
  auto kept = quality_filter(all, g.road, {}, th);
  for (const auto& l : kept) {
    EXPECT_LE(l.wrong_way, 0.0);
    EXPECT_LE(l.max_detour, 1.3 + 1e-9);
    EXPECT_LE(l.mean_detour, th.max_mean_detour + 1e-9);
  }
  EXPECT_LE(kept.size(), all.size());
}

TEST(Linegen, DuplicateCoverBreaksEveryZeroPair) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<CandidateLine> c;
    for (int i = 0; i < 10; ++i) {
      std::vector<int> cps;
      for (int k = 0; k < 6; ++k)
        if (rng() % 2) cps.push_back(k);
      cps.push_back(9);
      c.push_back({i, cps});
    }
    auto drop = duplicate_cover(c);
    std::set<int> gone(drop.begin(), drop.end());
    for (int a = 0; a < 10; ++a)
      for (int b = a + 1; b < 10; ++b)
        if (!gone.count(a) && !gone.count(b)) EXPECT_GT(dissimilarity(c[a].checkpoints, c[b].checkpoints), 0);
  }
}

TEST(Linegen, MedoidSelectionMatchesBruteForce) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> q(0, 2);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<CandidateLine> c;
    std::set<std::vector<int>> seen;
    while (c.size() < 8) {
      std::vector<int> cps;
      for (int k = 0; k < 8; ++k)
        if (rng() % 3 == 0) cps.push_back(k);
      cps.push_back(20);
      if (cps.size() < 3 || !seen.insert(cps).second) continue;
      CandidateLine l{static_cast<int>(c.size()), cps};
      l.q = q(rng);
      c.push_back(l);
    }
    // The oracle works on distinct candidates.
    std::vector<CandidateLine> kept;
    auto drop = duplicate_cover(c);
    for (size_t i = 0; i < c.size(); ++i)
      if (std::find(drop.begin(), drop.end(), static_cast<int>(i)) == drop.end()) kept.push_back(c[i]);
    for (int budget : {1, 2, 3}) {
      if (budget > static_cast<int>(kept.size())) continue;
      auto sel = select_lines(kept, budget, 1.5);
      ASSERT_TRUE(sel.exact);
      EXPECT_EQ(static_cast<int>(sel.selected.size()), budget);
      EXPECT_NEAR(sel.objective, brute_force_medoids(kept, budget, 1.5), 1e-6);
      for (size_t k = 0; k < kept.size(); ++k)
        EXPECT_TRUE(std::find(sel.selected.begin(), sel.selected.end(), sel.medoid[k]) != sel.selected.end());
    }
  }
}

TEST(Linegen, BudgetAboveDistinctCandidatesIsAnError) {
  std::vector<CandidateLine> c = {{0, {1, 2, 9}}, {1, {1, 2, 9}}};
  EXPECT_THROW(select_lines(c, 2, 1.0), std::exception);
}
