// Independent reference computations used by the tests. They rely only on
// the subpath enumerator and the problem data, never on a solver.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "mind/labels.hpp"
#include "mind/network.hpp"
#include "mind/solver.hpp"

namespace mind::testing {

// Every subpath of every pair of a block.
inline std::vector<Subpath> all_subpaths(const Problem& pb, int block) {
  std::vector<Subpath> out;
  const int line = pb.trips()[pb.blocks()[block].trip].line;
  for (auto [a, b] : pb.pairs(line))
    for (auto& s : enumerate_subpaths(pb, block, a, b)) out.push_back(std::move(s));
  return out;
}

// Minimum routing cost of a block that serves exactly the passengers in
// `served`, chaining subpaths from the first to the last checkpoint.
// +inf when no chain exists.
class BlockOracle {
 public:
  BlockOracle(const Problem& pb, int block) : pb_(pb), block_(block), subs_(all_subpaths(pb, block)) {
    const Block& b = pb.blocks()[block];
    for (size_t k = 0; k < b.active.size(); ++k) bit_[b.active[k]] = static_cast<int>(k);
  }

  double value(const std::set<int>& served) {
    std::uint64_t target = 0;
    int load = 0;
    const int s = pb_.blocks()[block_].scenario;
    for (int p : served) {
      if (!bit_.count(p)) return kInf;
      target |= std::uint64_t{1} << bit_[p];
      load += pb_.demand(p, s);
    }
    if (load > pb_.capacity(pb_.blocks()[block_].trip)) return kInf;
    auto it = memo_.find(target);
    if (it != memo_.end()) return it->second;
    const int last = pb_.num_checkpoints(pb_.blocks()[block_].trip) - 1;
    // best[(pos, mask)]
    std::map<std::pair<int, std::uint64_t>, double> best;
    best[{0, 0}] = 0;
    for (int pos = 0; pos < last; ++pos) {
      std::vector<std::pair<std::uint64_t, double>> here;
      for (auto& [key, v] : best)
        if (key.first == pos) here.push_back({key.second, v});
      for (auto [mask, v] : here)
        for (const Subpath& sp : subs_) {
          if (sp.a != pos) continue;
          std::uint64_t m = 0;
          for (int p : sp.passengers) m |= std::uint64_t{1} << bit_.at(p);
          if ((m & mask) || (m & ~target)) continue;
          auto key = std::pair{sp.b, mask | m};
          auto f = best.find(key);
          if (f == best.end() || v + sp.cost < f->second) best[key] = v + sp.cost;
        }
    }
    auto f = best.find({last, target});
    double v = f == best.end() ? kInf : f->second;
    memo_[target] = v;
    return v;
  }

 private:
  const Problem& pb_;
  int block_;
  std::vector<Subpath> subs_;
  std::map<int, int> bit_;
  std::map<std::uint64_t, double> memo_;
};

// Optimum over all binary first stages (x, z), by enumeration.
inline double brute_force_optimum(const Problem& pb) {
  const auto& trips = pb.trips();
  const int J = static_cast<int>(trips.size());
  const Params& q = pb.params();
  std::vector<BlockOracle> oracle;
  for (size_t b = 0; b < pb.blocks().size(); ++b) oracle.emplace_back(pb, static_cast<int>(b));
  std::set<int> starts;
  for (const Trip& t : trips) starts.insert(t.start);

  double best = kInf;
  for (int xm = 0; xm < (1 << J); ++xm) {
    bool fleet_ok = true;
    for (int t : starts) {
      int n = 0;
      for (int j = 0; j < J; ++j)
        if ((xm >> j & 1) && trips[j].times.front() <= t && t <= trips[j].end_time()) ++n;
      fleet_ok = fleet_ok && n <= q.fleet;
    }
    if (!fleet_ok) continue;
    double total = 0;
    for (int j = 0; j < J; ++j)
      if (xm >> j & 1) total += pb.trip_cost(j);
    for (int s = 0; s < pb.num_scenarios() && std::isfinite(total); ++s) {
      std::vector<int> riders;
      for (size_t p = 0; p < pb.instance().requests.size(); ++p)
        if (pb.demand(static_cast<int>(p), s) > 0) riders.push_back(static_cast<int>(p));
      std::vector<std::set<int>> served(J);
      double scen = kInf;
      std::function<void(size_t)> assign = [&](size_t k) {
        if (k == riders.size()) {
          double v = 0;
          for (int j = 0; j < J && std::isfinite(v); ++j) {
            if (!(xm >> j & 1)) continue;
            const int C = pb.capacity(j);
            int load = 0;
            for (int p : served[j]) load += pb.demand(p, s);
            if (load > (1 + q.kappa) * C || load < (1 - q.kappa) * C) v = kInf;
            else v += oracle[pb.block_index(j, s)].value(served[j]);
          }
          scen = std::min(scen, v);
          return;
        }
        assign(k + 1);
        for (int j : pb.trips_of(riders[k])) {
          if (!(xm >> j & 1)) continue;
          served[j].insert(riders[k]);
          assign(k + 1);
          served[j].erase(riders[k]);
        }
      };
      assign(0);
      total += pb.instance().probabilities[s] * scen;
    }
    best = std::min(best, total);
  }
  return best;
}

// Minimum reduced cost over every subpath and start load, by scanning the
// enumerated subpaths.
inline double exhaustive_min_reduced_cost(const Problem& pb, int block, const BlockDuals& d) {
  const int C = pb.capacity(pb.blocks()[block].trip);
  double best = kInf;
  for (const Subpath& sp : all_subpaths(pb, block)) {
    double g = sp.cost;
    for (int p : sp.passengers) g += d.gamma[p];
    for (int c = 0; c + sp.load <= C; ++c) {
      const double rc = g + d.psi[sp.b * (C + 1) + c + sp.load] - d.psi[sp.a * (C + 1) + c];
      best = std::min(best, rc);
    }
  }
  return best;
}

}  // namespace mind::testing
