#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "micro.hpp"
#include "mind/labels.hpp"
#include "oracles.hpp"

using namespace mind;
using mind::testing::micro_instance;

namespace {

std::map<std::vector<int>, double> by_set(const std::vector<Subpath>& subs, const std::vector<double>& gamma) {
  std::map<std::vector<int>, double> out;
  for (const Subpath& s : subs) {
    double v = s.cost;
    for (int p : s.passengers) v += gamma[p];
    auto [it, fresh] = out.emplace(s.passengers, v);
    if (!fresh) it->second = std::min(it->second, v);
  }
  return out;
}

std::vector<Problem> sample_problems() {
  std::vector<Problem> out;
  out.emplace_back(tri1_instance());
  for (std::uint64_t seed : {2, 3, 9, 12, 15, 23}) out.emplace_back(micro_instance(seed));
  return out;
}

}  // namespace

TEST(Network, PickupOptionsRespectWalkAndTerminal) {
  for (const Problem& pb : sample_problems()) {
    const auto& inst = pb.instance();
    for (size_t j = 0; j < pb.trips().size(); ++j)
      for (size_t p = 0; p < inst.requests.size(); ++p)
        for (const PickupOption& o : pb.pickups(static_cast<int>(j), static_cast<int>(p))) {
          EXPECT_NE(o.station, inst.terminal());
          EXPECT_LE(o.lo, o.hi);
          EXPECT_EQ(o.lo % pb.rho(), 0);
          EXPECT_LE(o.walk_s, inst.params.max_walk_s + 1e-9);
        }
  }
}

TEST(Network, TriangleCostTerms) {
  Problem pb(tri1_instance());
  // p2 stands at checkpoint B, reached at 300 s; the trip ends at 600 s.
  CostTerms c = pb.terms(0, 2, 1, 300);
  EXPECT_DOUBLE_EQ(c.walk_min, 0);
  EXPECT_DOUBLE_EQ(c.wait_min, 0);
  EXPECT_DOUBLE_EQ(c.travel, 300.0 / 200.0);
  EXPECT_DOUBLE_EQ(c.late, 0);
  EXPECT_DOUBLE_EQ(c.early, 0);
  EXPECT_DOUBLE_EQ(pb.unit_cost(0, 2, 1, 300), 1.5 - 10000);
  EXPECT_DOUBLE_EQ(pb.lower_bound(0), -30000);
}

TEST(Network, PricingNetworkIsTopologicalAndDrivable) {
  for (const Problem& pb : sample_problems())
    for (size_t b = 0; b < pb.blocks().size(); ++b) {
      const int line = pb.trips()[pb.blocks()[b].trip].line;
      for (auto [a, bb] : pb.pairs(line)) {
        PricingNetwork net = build_pricing_network(pb, static_cast<int>(b), a, bb);
        EXPECT_TRUE(net.cand[net.sink].empty());
        for (int u = 0; u < net.num_nodes(); ++u)
          for (int v : net.out[u]) {
            EXPECT_LT(u, v);
            const int gap = net.time[v] - net.time[u];
            if (net.station[u] == net.station[v]) EXPECT_GE(gap, pb.rho());
            else EXPECT_GE(gap, pb.tt(net.station[u], net.station[v]));
          }
      }
    }
}

TEST(Network, ExactLabelsMatchEnumeration) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> gam(0, 20000);
  for (const Problem& pb : sample_problems())
    for (size_t b = 0; b < pb.blocks().size(); ++b) {
      const int block = static_cast<int>(b);
      const int line = pb.trips()[pb.blocks()[b].trip].line;
      const int C = pb.capacity(pb.blocks()[b].trip);
      for (auto [a, bb] : pb.pairs(line)) {
        auto oracle_subs = enumerate_subpaths(pb, block, a, bb);
        PricingNetwork net = build_pricing_network(pb, block, a, bb);
        for (int trial = 0; trial < 3; ++trial) {
          std::vector<double> gamma(pb.instance().requests.size(), 0.0);
          if (trial > 0)
            for (double& g : gamma) g = gam(rng);
          auto want = by_set(oracle_subs, gamma);
          std::map<std::vector<int>, double> got;
          for (const PricedSet& ps : label_sets(net, local_gamma(net, gamma), C, false))
            got[ps.subpath.passengers] = ps.value;
          ASSERT_EQ(got.size(), want.size());
          for (auto& [set, v] : want) {
            ASSERT_TRUE(got.count(set));
            EXPECT_NEAR(got[set], v, 1e-6);
          }
        }
      }
    }
}

TEST(Network, LabelPathsAreConsistent) {
  for (const Problem& pb : sample_problems())
    for (size_t b = 0; b < pb.blocks().size(); ++b) {
      const int block = static_cast<int>(b);
      const int s = pb.blocks()[b].scenario;
      const int trip = pb.blocks()[b].trip;
      for (const Subpath& sp : full_subpaths(pb, block)) {
        double cost = 0;
        int load = 0;
        for (const PickupEvent& e : sp.pickups) {
          cost += pb.pickup_cost(block, e.passenger, e.station, e.time);
          load += pb.demand(e.passenger, s);
          const PickupOption* o = pb.pickup_at(trip, e.passenger, e.station);
          ASSERT_NE(o, nullptr);
          EXPECT_GE(e.time, o->lo);
          EXPECT_LE(e.time, o->hi);
        }
        EXPECT_NEAR(cost, sp.cost, 1e-6);
        EXPECT_EQ(load, sp.load);
        EXPECT_LE(load, pb.capacity(trip));
        const auto& cp = pb.line_of(trip).checkpoints;
        EXPECT_EQ(sp.route.back(), (std::pair{cp[sp.b], pb.trips()[trip].times[sp.b]}));
        for (size_t k = 1; k < sp.route.size(); ++k)
          EXPECT_GE(sp.route[k].second - sp.route[k - 1].second, pb.tt(sp.route[k - 1].first, sp.route[k].first));
      }
    }
}

TEST(Network, TransitVisitsCheckpointsOnly) {
  for (std::uint64_t seed : {3, 9, 15}) {
    Problem pb(micro_instance(seed), {true});
    for (size_t b = 0; b < pb.blocks().size(); ++b) {
      const auto& cp = pb.line_of(pb.blocks()[b].trip).checkpoints;
      std::set<int> allowed(cp.begin(), cp.end());
      for (const Subpath& sp : full_subpaths(pb, static_cast<int>(b)))
        for (auto [st, t] : sp.route) EXPECT_TRUE(allowed.count(st)) << st;
    }
  }
}

TEST(Network, LoadNetworkPruningKeepsExactlyUsefulNodes) {
  for (const Problem& pb : sample_problems())
    for (size_t b = 0; b < pb.blocks().size(); ++b) {
      const int block = static_cast<int>(b);
      LoadNetwork full = build_load_network(pb, block, full_subpaths(pb, block), false);
      LoadNetwork pruned = build_load_network(pb, block, full_subpaths(pb, block), true);
      const int n = full.num_nodes();
      std::vector<std::vector<int>> fwd(n), bwd(n);
      for (const LoadArc& e : full.arcs) {
        fwd[e.tail].push_back(e.head);
        bwd[e.head].push_back(e.tail);
        if (e.sub >= 0) {
          const Subpath& sp = full.subpaths[e.sub];
          EXPECT_EQ(e.tail / (full.capacity + 1), sp.a);
          EXPECT_EQ(e.head / (full.capacity + 1), sp.b);
          EXPECT_EQ(e.head % (full.capacity + 1) - e.tail % (full.capacity + 1), sp.load);
        } else {
          EXPECT_EQ(e.head, full.sink());
        }
      }
      auto reach = [&](int from, const std::vector<std::vector<int>>& g) {
        std::vector<char> seen(n, 0);
        std::vector<int> stack = {from};
        seen[from] = 1;
        while (!stack.empty()) {
          int u = stack.back();
          stack.pop_back();
          for (int v : g[u])
            if (!seen[v]) seen[v] = 1, stack.push_back(v);
        }
        return seen;
      };
      auto f = reach(full.source(), fwd), r = reach(full.sink(), bwd);
      for (int u = 0; u < n; ++u) EXPECT_EQ(static_cast<bool>(pruned.alive[u]), f[u] && r[u]) << u;
      for (const LoadArc& e : pruned.arcs) {
        EXPECT_TRUE(pruned.alive[e.tail]);
        EXPECT_TRUE(pruned.alive[e.head]);
      }
    }
}

TEST(Network, TooManyCandidatesIsReported) {
  Instance inst = generate_grid_instance(3, 3, 300, 1, 0, 1, 1);
  inst.params.max_walk_s = 3000;
  inst.params.deviation_m = 3000;
  for (int p = 0; p < 70; ++p)
    inst.requests.push_back({p, inst.lines[0].checkpoints[0], inst.lines[0].offsets.back(), 0, {1}});
  inst.lines[0].capacity = 70;
  finalize_instance(inst);
  Problem pb(inst);
  EXPECT_THROW(build_pricing_network(pb, 0, 0, 1), std::exception);
}

TEST(Network, DumpsAreNonEmpty) {
  Problem pb(tri1_instance());
  EXPECT_NE(dump_pricing_network(pb, build_pricing_network(pb, 0, 0, 1)).size(), 0u);
  EXPECT_NE(dump_load_network(pb, build_load_network(pb, 0, full_subpaths(pb, 0), true)).size(), 0u);
}
