#include "mind/labels.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_map>

#include "mind/solver.hpp"

namespace mind {

namespace {

struct Label {
  std::uint64_t mask = 0;
  double value = 0;  // with duals
  double cost = 0;   // pickup costs only
  int load = 0;
  int node = 0;
  int parent = -1;
  std::uint64_t boarded = 0;  // set on departure labels
  bool departure = false;
};

Subpath rebuild(const PricingNetwork& net, const std::vector<Label>& labels, int idx) {
  std::vector<int> chain;
  for (int i = idx; i >= 0; i = labels[i].parent) chain.push_back(i);
  std::reverse(chain.begin(), chain.end());
  Subpath s;
  s.a = net.a;
  s.b = net.b;
  const Label& last = labels[idx];
  s.load = last.load;
  s.cost = last.cost;
  for (int i : chain) {
    const Label& l = labels[i];
    int st = net.station[l.node], t = net.time[l.node];
    if (l.departure) {
      if (l.boarded) {
        for (int c = 0; c < static_cast<int>(net.cand_passenger.size()); ++c)
          if (l.boarded >> c & 1) s.pickups.push_back({net.cand_passenger[c], st, t});
        if (s.route.empty() || s.route.back() != std::pair{st, t}) s.route.push_back({st, t});
      }
      continue;
    }
    if (s.route.empty() || s.route.back().first != st || l.node == net.sink) s.route.push_back({st, t});
  }
  std::sort(s.pickups.begin(), s.pickups.end(),
            [](const PickupEvent& x, const PickupEvent& y) { return x.passenger < y.passenger; });
  for (const auto& e : s.pickups) s.passengers.push_back(e.passenger);
  return s;
}

}  // namespace

std::vector<PricedSet> label_sets(const PricingNetwork& net, std::span<const double> gamma, int capacity,
                                  bool heuristic, LabelStats* stats, bool dominance) {
  const int n = net.num_nodes();
  std::vector<Label> labels;
  // Arrival labels per node; with dominance, one per served set.
  std::vector<std::vector<int>> arrival(n);
  std::vector<std::unordered_map<std::uint64_t, int>> by_mask(n);
  labels.push_back({0, 0, 0, 0, net.source, -1, 0, false});
  arrival[net.source].push_back(0);
  by_mask[net.source][0] = 0;

  auto by_key = [&](const std::vector<int>& v) {
    std::vector<int> out = v;
    std::stable_sort(out.begin(), out.end(), [&](int a, int b) { return labels[a].mask < labels[b].mask; });
    return out;
  };

  for (int node = 0; node < n; ++node) {
    if (arrival[node].empty() || node == net.sink) continue;
    const auto& cand = net.cand[node];
    std::vector<int> depart;
    std::unordered_map<std::uint64_t, int> depart_mask;
    auto offer = [&](const Label& l) {
      if (!dominance) {
        depart.push_back(static_cast<int>(labels.size()));
        labels.push_back(l);
        return;
      }
      auto [it, fresh] = depart_mask.emplace(l.mask, static_cast<int>(labels.size()));
      if (fresh) {
        depart.push_back(it->second);
        labels.push_back(l);
      } else if (l.value < labels[it->second].value - 1e-12) {
        labels[it->second] = l;
      }
    };
    for (int li : by_key(arrival[node])) {
      const Label base = labels[li];
      std::vector<int> avail;  // positions in cand
      for (int k = 0; k < static_cast<int>(cand.size()); ++k)
        if (!(base.mask >> cand[k].first & 1)) avail.push_back(k);
      auto board = [&](std::uint64_t sub) {
        Label l = base;
        l.departure = true;
        l.parent = li;
        l.boarded = 0;
        for (int k = 0; k < static_cast<int>(avail.size()); ++k) {
          if (!(sub >> k & 1)) continue;
          auto [c, cost] = cand[avail[k]];
          l.boarded |= std::uint64_t{1} << c;
          l.load += net.cand_load[c];
          l.cost += cost;
          l.value += cost + gamma[c];
        }
        if (l.load > capacity) return;
        l.mask |= l.boarded;
        offer(l);
      };
      if (heuristic) {
        std::uint64_t sub = 0;
        int load = base.load;
        for (int k = 0; k < static_cast<int>(avail.size()); ++k) {
          auto [c, cost] = cand[avail[k]];
          if (cost + gamma[c] >= 0 || load + net.cand_load[c] > capacity) continue;
          sub |= std::uint64_t{1} << k;
          load += net.cand_load[c];
        }
        board(0);
        if (sub) board(sub);
      } else {
        const int m = static_cast<int>(avail.size());
        if (m > 30) throw std::runtime_error("too many boarding options at one node");
        for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << m); ++sub) board(sub);
      }
    }
    for (int next : net.out[node])
      for (int di : by_key(depart)) {
        const Label& d = labels[di];
        if (dominance) {
          auto it = by_mask[next].find(d.mask);
          if (it != by_mask[next].end()) {
            if (d.value < labels[it->second].value - 1e-12) {
              Label& l = labels[it->second];
              l.value = d.value;
              l.cost = d.cost;
              l.load = d.load;
              l.parent = di;
            }
            continue;
          }
          by_mask[next][d.mask] = static_cast<int>(labels.size());
        }
        Label l = d;
        l.departure = false;
        l.node = next;
        l.parent = di;
        l.boarded = 0;
        arrival[next].push_back(static_cast<int>(labels.size()));
        labels.push_back(l);
      }
  }
  if (stats) {
    stats->labels += static_cast<std::int64_t>(labels.size());
    stats->runs += 1;
  }
  // Best label per served set at the sink.
  std::map<std::uint64_t, int> fin;
  for (int li : arrival[net.sink]) {
    auto [it, fresh] = fin.emplace(labels[li].mask, li);
    if (!fresh && labels[li].value < labels[it->second].value - 1e-12) it->second = li;
  }
  std::vector<PricedSet> out;
  for (auto [mask, li] : fin) out.push_back({rebuild(net, labels, li), labels[li].value});
  return out;
}

std::vector<double> local_gamma(const PricingNetwork& net, std::span<const double> gamma) {
  std::vector<double> g(net.cand_passenger.size(), 0.0);
  for (size_t c = 0; c < g.size(); ++c) {
    int p = net.cand_passenger[c];
    if (p < static_cast<int>(gamma.size())) g[c] = gamma[p];
  }
  return g;
}

double delta_psi(const LoadNetwork& shape, std::span<const double> psi, int a, int b, int nu) {
  double best = -kInf;
  for (int c = 0; c + nu <= shape.capacity; ++c)
    best = std::max(best, psi[shape.node(a, c)] - psi[shape.node(b, c + nu)]);
  return best;
}

std::optional<PricedSet> price_milp(const PricingNetwork& net, std::span<const double> gamma, int nu) {
  const int n = net.num_nodes();
  auto m = make_model();
  std::vector<std::vector<std::pair<int, int>>> arcs(n);  // (head, var)
  std::vector<std::vector<int>> in(n), outv(n);
  for (int k = 0; k < n; ++k)
    for (int h : net.out[k]) {
      int v = m->add_var(0, 1, 0, true);
      arcs[k].push_back({h, v});
      outv[k].push_back(v);
      in[h].push_back(v);
    }
  const int nc = static_cast<int>(net.cand_passenger.size());
  std::vector<std::vector<int>> per_cand(nc);
  std::vector<double> load_vals;
  std::vector<int> load_vars;
  std::vector<std::vector<std::pair<int, int>>> w(n);  // (candidate, var)
  for (int k = 0; k < n; ++k)
    for (auto [c, cost] : net.cand[k]) {
      int v = m->add_var(0, 1, cost + gamma[c], true);
      w[k].push_back({c, v});
      per_cand[c].push_back(v);
      load_vars.push_back(v);
      load_vals.push_back(net.cand_load[c]);
      // Board only where the path leaves the node.
      std::vector<int> vars = outv[k];
      std::vector<double> vals(vars.size(), -1.0);
      vars.push_back(v);
      vals.push_back(1.0);
      m->add_row(vars, vals, -kInf, 0);
    }
  for (int k = 0; k < n; ++k) {
    std::vector<int> vars;
    std::vector<double> vals;
    for (int v : outv[k]) vars.push_back(v), vals.push_back(1);
    for (int v : in[k]) vars.push_back(v), vals.push_back(-1);
    double rhs = k == net.source ? 1 : k == net.sink ? -1 : 0;
    if (vars.empty()) {
      if (rhs != 0) return std::nullopt;
      continue;
    }
    m->add_row(vars, vals, rhs, rhs);
  }
  for (int c = 0; c < nc; ++c) m->add_row(per_cand[c], std::vector<double>(per_cand[c].size(), 1.0), -kInf, 1);
  if (load_vars.empty()) {
    if (nu != 0) return std::nullopt;
  } else {
    m->add_row(load_vars, load_vals, nu, nu);
  }
  if (m->solve({}) != SolveStatus::Optimal) return std::nullopt;

  PricedSet out;
  out.value = m->objective();
  Subpath& s = out.subpath;
  s.a = net.a;
  s.b = net.b;
  int node = net.source;
  s.route.push_back({net.station[node], net.time[node]});
  while (node != net.sink) {
    for (auto [c, v] : w[node])
      if (m->value(v) > 0.5) {
        s.pickups.push_back({net.cand_passenger[c], net.station[node], net.time[node]});
        s.load += net.cand_load[c];
        for (auto [cc, cost] : net.cand[node])
          if (cc == c) {
            s.cost += cost;
            break;
          }
        if (s.route.back() != std::pair{net.station[node], net.time[node]})
          s.route.push_back({net.station[node], net.time[node]});
      }
    int next = -1;
    for (auto [h, v] : arcs[node])
      if (m->value(v) > 0.5) next = h;
    if (next < 0) return std::nullopt;
    node = next;
    if (net.station[node] != s.route.back().first || node == net.sink)
      s.route.push_back({net.station[node], net.time[node]});
  }
  std::sort(s.pickups.begin(), s.pickups.end(),
            [](const PickupEvent& x, const PickupEvent& y) { return x.passenger < y.passenger; });
  for (const auto& e : s.pickups) s.passengers.push_back(e.passenger);
  return out;
}

std::vector<Column> price_block(const Problem& pb, int block, const BlockDuals& duals, PricingMode mode,
                                double eps, LabelStats* stats) {
  const Block& bl = pb.blocks()[block];
  const int C = pb.capacity(bl.trip);
  LoadNetwork shape;
  shape.checkpoints = pb.num_checkpoints(bl.trip);
  shape.capacity = C;
  std::vector<Column> cols;
  for (auto [a, b] : pb.pairs(pb.trips()[bl.trip].line)) {
    PricingNetwork net = build_pricing_network(pb, block, a, b);
    auto g = local_gamma(net, duals.gamma);
    std::vector<PricedSet> sets;
    if (mode == PricingMode::Milp) {
      for (int nu = 0; nu <= C; ++nu)
        if (auto r = price_milp(net, g, nu)) sets.push_back(std::move(*r));
    } else {
      sets = label_sets(net, g, C, mode == PricingMode::Heuristic, stats);
    }
    for (auto& ps : sets) {
      const int L = ps.subpath.load;
      for (int c = 0; c + L <= C; ++c) {
        double rc = ps.value + duals.psi[shape.node(b, c + L)] - duals.psi[shape.node(a, c)];
        if (rc < -eps) cols.push_back({ps.subpath, c, rc});
      }
    }
  }
  return cols;
}

}  // namespace mind
