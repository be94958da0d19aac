#include "mind/formulations.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace mind {

const char* to_string(Method m) {
  switch (m) {
    case Method::Compact: return "compact";
    case Method::Segment: return "segment";
    case Method::Path: return "path";
    case Method::Subpath: return "subpath";
    case Method::DD: return "dd";
    case Method::DDILS: return "dd_ils";
  }
  return "?";
}

std::optional<Method> parse_method(const std::string& s) {
  for (Method m : {Method::Compact, Method::Segment, Method::Path, Method::Subpath, Method::DD, Method::DDILS})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

namespace {

int member_pos(const Problem& pb, int trip, int p) {
  const auto& mem = pb.members_of(trip);
  auto it = std::lower_bound(mem.begin(), mem.end(), p);
  return it != mem.end() && *it == p ? static_cast<int>(it - mem.begin()) : -1;
}

// Sparse rows collected while columns are created.
struct RowBuilder {
  std::vector<std::vector<int>> vars;
  std::vector<std::vector<double>> vals;
  std::vector<double> lo, hi;
  int add(double l, double h) {
    vars.emplace_back();
    vals.emplace_back();
    lo.push_back(l);
    hi.push_back(h);
    return static_cast<int>(lo.size()) - 1;
  }
  void put(int row, int var, double v) {
    vars[row].push_back(var);
    vals[row].push_back(v);
  }
  void flush(SolverModel& m) {
    for (size_t r = 0; r < lo.size(); ++r) m.add_row(vars[r], vals[r], lo[r], hi[r]);
  }
};

using Decoder = std::function<std::vector<Subpath>(const std::vector<double>&)>;

// ----- subpath -------------------------------------------------------------

Decoder add_subpath_block(const Problem& pb, SolverModel& m, int block, int xv, const std::vector<int>& zv,
                          double weight, const LoadNetwork& net) {
  const Block& bl = pb.blocks()[block];
  RowBuilder rb;
  std::vector<int> flow(net.num_nodes(), -1);
  for (int i = 0; i < net.num_nodes(); ++i)
    if (net.alive[i]) flow[i] = rb.add(0, 0);
  if (net.alive[net.source()]) rb.put(flow[net.source()], xv, -1);
  if (net.alive[net.sink()]) rb.put(flow[net.sink()], xv, 1);
  std::map<int, int> link;
  for (int p : bl.active) {
    int r = rb.add(-kInf, 0);
    rb.put(r, zv[member_pos(pb, bl.trip, p)], -1);
    link[p] = r;
  }
  std::vector<int> yv;
  for (const auto& e : net.arcs) {
    int v = m.add_var(0, 1, weight * e.cost, true);
    yv.push_back(v);
    rb.put(flow[e.tail], v, 1);
    rb.put(flow[e.head], v, -1);
    if (e.sub >= 0)
      for (int p : net.subpaths[e.sub].passengers) rb.put(link.at(p), v, 1);
  }
  rb.flush(m);
  return [yv, &net](const std::vector<double>& val) {
    std::vector<Subpath> out;
    for (size_t k = 0; k < yv.size(); ++k)
      if (val[yv[k]] > 0.5 && net.arcs[k].sub >= 0) out.push_back(net.subpaths[net.arcs[k].sub]);
    std::sort(out.begin(), out.end(), [](const Subpath& a, const Subpath& b) { return a.a < b.a; });
    return out;
  };
}

// ----- path ----------------------------------------------------------------

Decoder add_path_block(const Problem& pb, SolverModel& m, int block, int xv, const std::vector<int>& zv,
                       double weight, const LoadNetwork& net, std::int64_t cap) {
  const Block& bl = pb.blocks()[block];
  auto paths = enumerate_paths(net, cap);
  if (!paths) throw std::runtime_error("path enumeration exceeded the cap of " + std::to_string(cap));
  RowBuilder rb;
  int choose = rb.add(0, 0);
  rb.put(choose, xv, -1);
  std::map<int, int> link;
  for (int p : bl.active) {
    int r = rb.add(-kInf, 0);
    rb.put(r, zv[member_pos(pb, bl.trip, p)], -1);
    link[p] = r;
  }
  std::vector<int> vars;
  for (const auto& path : *paths) {
    double cost = 0;
    std::map<int, int> mult;
    for (int a : path) {
      cost += net.arcs[a].cost;
      if (net.arcs[a].sub >= 0)
        for (int p : net.subpaths[net.arcs[a].sub].passengers) ++mult[p];
    }
    int v = m.add_var(0, 1, weight * cost, true);
    vars.push_back(v);
    rb.put(choose, v, 1);
    for (auto [p, k] : mult) rb.put(link.at(p), v, k);
  }
  rb.flush(m);
  return [vars, paths = std::move(*paths), &net](const std::vector<double>& val) {
    std::vector<Subpath> out;
    for (size_t k = 0; k < vars.size(); ++k)
      if (val[vars[k]] > 0.5)
        for (int a : paths[k])
          if (net.arcs[a].sub >= 0) out.push_back(net.subpaths[net.arcs[a].sub]);
    return out;
  };
}

// ----- segment -------------------------------------------------------------

void check_discretization(const Problem& pb, int block, int grid) {
  if (grid == pb.rho()) return;
  const Block& bl = pb.blocks()[block];
  const Trip& trip = pb.trips()[bl.trip];
  const auto& cp = pb.line_of(bl.trip).checkpoints;
  std::vector<std::string> bad;
  for (size_t k = 0; k < trip.times.size(); ++k)
    if (trip.times[k] % grid != 0) {
      int a = k == 0 ? 0 : static_cast<int>(k) - 1;
      bad.push_back("(" + std::to_string(cp[a]) + "," + std::to_string(cp[k]) + ",schedule)");
    }
  auto subs = full_subpaths(pb, block);
  for (size_t r = 0; r < subs.size(); ++r) {
    const auto& s = subs[r];
    int need = 0;
    for (size_t k = 1; k < s.route.size(); ++k)
      if (s.route[k].first != s.route[k - 1].first)
        need += ceil_to(pb.drive().seconds(s.route[k - 1].first, s.route[k].first), grid);
    if (need > trip.times[s.b] - trip.times[s.a])
      bad.push_back("(" + std::to_string(cp[s.a]) + "," + std::to_string(cp[s.b]) + "," + std::to_string(r) + ")");
  }
  if (!bad.empty()) {
    std::string msg = "discretization too coarse:";
    for (const auto& b : bad) msg += " " + b;
    throw DiscretizationError(msg);
  }
}

void add_segment_block(const Problem& pb, SolverModel& m, int block, int xv, const std::vector<int>& zv,
                       double weight, int grid) {
  check_discretization(pb, block, grid);
  const Block& bl = pb.blocks()[block];
  const Trip& trip = pb.trips()[bl.trip];
  const auto& cp = pb.line_of(bl.trip).checkpoints;
  const int C = pb.capacity(bl.trip);
  const int I = static_cast<int>(cp.size());
  auto tt = [&](int i, int j) { return i == j ? 0 : ceil_to(pb.drive().seconds(i, j), grid); };
  const auto gamma = pb.pairs(trip.line);

  // Station-time nodes and the pairs whose windows contain them.
  std::map<std::pair<int, int>, std::vector<int>> in_pairs;  // (station, t) -> pair indices
  for (size_t g = 0; g < gamma.size(); ++g) {
    auto [a, b] = gamma[g];
    for (int i : pb.pair_stations(trip.line, a, b)) {
      int lo = trip.times[a] + tt(cp[a], i), hi = trip.times[b] - tt(i, cp[b]);
      lo = ceil_to(lo, grid);
      for (int t = lo; t <= hi; t += grid) in_pairs[{i, t}].push_back(static_cast<int>(g));
    }
  }
  std::map<std::pair<int, int>, int> sid;
  std::vector<std::pair<int, int>> st;
  for (auto& [key, v] : in_pairs) {
    sid[key] = static_cast<int>(st.size());
    st.push_back(key);
  }
  const int S = static_cast<int>(st.size());
  auto node = [&](int s, int c) { return s * (C + 1) + c; };
  const int sink = S * (C + 1);

  // Boarding subsets per station-time node.
  struct Board {
    std::vector<int> who;
    int load = 0;
    double cost = 0;
  };
  std::vector<std::vector<Board>> boards(S);
  for (int s = 0; s < S; ++s) {
    auto [i, t] = st[s];
    std::vector<int> cand;
    for (int p : bl.active) {
      const PickupOption* o = pb.pickup_at(bl.trip, p, i);
      if (o && o->lo <= t && t <= o->hi) cand.push_back(p);
    }
    const int k = static_cast<int>(cand.size());
    for (int mask = 0; mask < (1 << k); ++mask) {
      Board b;
      for (int q = 0; q < k; ++q)
        if (mask >> q & 1) {
          b.who.push_back(cand[q]);
          b.load += pb.demand(cand[q], bl.scenario);
          b.cost += pb.pickup_cost(block, cand[q], i, t);
        }
      if (b.load <= C) boards[s].push_back(std::move(b));
    }
  }

  RowBuilder rb;
  std::vector<int> flow(sink + 1);
  for (int n = 0; n <= sink; ++n) flow[n] = rb.add(0, 0);
  const int src = sid.at({cp[0], trip.times[0]});
  rb.put(flow[node(src, 0)], xv, -1);
  rb.put(flow[sink], xv, 1);

  std::vector<int> beta(gamma.size());
  for (size_t g = 0; g < gamma.size(); ++g) beta[g] = m.add_var(0, 1, 0, true);
  // β forms a path over checkpoints.
  for (int k = 0; k < I; ++k) {
    int r = rb.add(0, 0);
    for (size_t g = 0; g < gamma.size(); ++g) {
      if (gamma[g].first == k) rb.put(r, beta[g], 1);
      if (gamma[g].second == k) rb.put(r, beta[g], -1);
    }
    if (k == 0) rb.put(r, xv, -1);
    if (k == I - 1) rb.put(r, xv, 1);
  }
  // Every chosen pair endpoint is visited on schedule.
  std::vector<int> visit(I, -1);
  for (int k = 1; k < I; ++k) {
    visit[k] = rb.add(0, kInf);
    for (size_t g = 0; g < gamma.size(); ++g)
      if (gamma[g].second == k) rb.put(visit[k], beta[g], -1);
  }
  std::map<int, int> link;
  for (int p : bl.active) {
    int r = rb.add(-kInf, 0);
    rb.put(r, zv[member_pos(pb, bl.trip, p)], -1);
    link[p] = r;
  }

  auto add_segment = [&](int s1, int s2) {
    std::vector<int> common;
    const auto& g1 = in_pairs[st[s1]];
    const auto& g2 = in_pairs[st[s2]];
    std::set_intersection(g1.begin(), g1.end(), g2.begin(), g2.end(), std::back_inserter(common));
    if (common.empty()) return;
    int allow = rb.add(-kInf, 0);
    for (int g : common) rb.put(allow, beta[g], -1);
    int head_cp = -1;
    for (int k = 1; k < I; ++k)
      if (st[s2] == std::pair{cp[k], trip.times[k]}) head_cp = k;
    for (const Board& b : boards[s1])
      for (int c = 0; c + b.load <= C; ++c) {
        int v = m.add_var(0, 1, weight * b.cost, true);
        rb.put(flow[node(s1, c)], v, 1);
        rb.put(flow[node(s2, c + b.load)], v, -1);
        rb.put(allow, v, 1);
        if (head_cp >= 0) rb.put(visit[head_cp], v, 1);
        for (int p : b.who) rb.put(link.at(p), v, 1);
      }
  };
  for (int s = 0; s < S; ++s) {
    auto [i, t] = st[s];
    if (auto it = sid.find({i, t + grid}); it != sid.end()) add_segment(s, it->second);
    std::set<int> stations;
    for (int g : in_pairs[st[s]])
      for (int j : pb.pair_stations(trip.line, gamma[g].first, gamma[g].second)) stations.insert(j);
    for (int j : stations)
      if (j != i)
        if (auto it = sid.find({j, t + tt(i, j)}); it != sid.end()) add_segment(s, it->second);
  }
  const int end = sid.at({cp[I - 1], trip.times[I - 1]});
  for (int c = 0; c <= C; ++c) {
    int v = m.add_var(0, 1, 0, true);
    rb.put(flow[node(end, c)], v, 1);
    rb.put(flow[sink], v, -1);
  }
  rb.flush(m);
}

// ----- compact -------------------------------------------------------------

void add_compact_block(const Problem& pb, SolverModel& m, int block, int xv, const std::vector<int>& zv,
                       double weight) {
  const Block& bl = pb.blocks()[block];
  const Trip& trip = pb.trips()[bl.trip];
  const auto& cp = pb.line_of(bl.trip).checkpoints;
  const Params& q = pb.params();
  const int C = pb.capacity(bl.trip);
  const int I = static_cast<int>(cp.size());
  const int K = q.skip;
  const double T0 = trip.times.front(), Tend = trip.times.back();
  const double H = Tend - T0;

  std::vector<int> V = pb.pair_stations(trip.line, 0, I - 1);
  const int n = static_cast<int>(V.size());
  std::map<int, int> pos;
  for (int k = 0; k < n; ++k) pos[V[k]] = k;
  const int first = pos.at(cp.front()), last = pos.at(cp.back());

  RowBuilder rb;
  // Routing.
  std::vector<std::vector<std::pair<int, int>>> out(n), in(n);  // (other, var)
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || a == last || b == first) continue;
      int v = m.add_var(0, 1, 0, true);
      out[a].push_back({b, v});
      in[b].push_back({a, v});
    }
  for (int k = 0; k < n; ++k) {
    int r = rb.add(0, 0);
    for (auto [o, v] : out[k]) rb.put(r, v, 1);
    for (auto [o, v] : in[k]) rb.put(r, v, -1);
    if (k == first) rb.put(r, xv, -1);
    if (k == last) rb.put(r, xv, 1);
    int cap = rb.add(-kInf, 1);
    for (auto [o, v] : in[k]) rb.put(cap, v, 1);
    if (k == first) rb.put(cap, xv, 1);
  }
  // Times.
  std::vector<int> ta(n), td(n);
  for (int k = 0; k < n; ++k) {
    ta[k] = m.add_var(k == first ? T0 : T0, k == first ? T0 : Tend, 0, false);
    td[k] = m.add_var(T0, Tend, 0, false);
    int r = rb.add(0, kInf);
    rb.put(r, td[k], 1);
    rb.put(r, ta[k], -1);
  }
  for (int a = 0; a < n; ++a)
    for (auto [b, v] : out[a]) {
      double tt = pb.tt(V[a], V[b]);
      double M = H + tt;
      int r = rb.add(tt - M, kInf);  // ta_b - td_a - M y >= tt - M
      rb.put(r, ta[b], 1);
      rb.put(r, td[a], -1);
      rb.put(r, v, -M);
    }
  // Checkpoints.
  std::vector<int> vis(I);
  for (int k = 0; k < I; ++k) {
    vis[k] = m.add_var(0, 1, 0, true);
    int s = pos.at(cp[k]);
    if (k == 0 || k == I - 1) {
      int r = rb.add(0, 0);
      rb.put(r, vis[k], 1);
      rb.put(r, xv, -1);
    } else {
      int r = rb.add(-kInf, 0);
      rb.put(r, vis[k], 1);
      for (auto [o, v] : in[s]) rb.put(r, v, -1);
    }
    double T = trip.times[k];
    int ra = rb.add(-kInf, T + H);  // ta <= T + H (1 - v)
    rb.put(ra, ta[s], 1);
    rb.put(ra, vis[k], H);
    int rd = rb.add(T - H, kInf);  // td >= T - H (1 - v)
    rb.put(rd, td[s], 1);
    rb.put(rd, vis[k], -H);
  }
  for (int k = 0; k + K < I; ++k) {
    int r = rb.add(0, kInf);
    for (int j = k; j <= k + K; ++j) rb.put(r, vis[j], 1);
    rb.put(r, xv, -1);
  }
  // Localization: a visited station sits between the visited checkpoints
  // around one of its segments.
  for (int s = 0; s < n; ++s) {
    if (s == first || s == last) continue;
    std::vector<int> segs;
    for (int k = 0; k + 1 < I; ++k) {
      const auto& S = pb.segment_stations(trip.line, k);
      if (std::binary_search(S.begin(), S.end(), V[s])) segs.push_back(k);
    }
    int cover = rb.add(0, kInf);
    for (auto [o, v] : in[s]) rb.put(cover, v, -1);
    for (int k = 0; k < I; ++k)
      if (cp[k] == V[s]) rb.put(cover, vis[k], 1);
    for (int k : segs) {
      int e = m.add_var(0, 1, 0, true);
      rb.put(cover, e, 1);
      for (int a = 0; a <= k; ++a) {
        int r = rb.add(trip.times[a] - 2 * H, kInf);
        rb.put(r, ta[s], 1);
        rb.put(r, e, -H);
        rb.put(r, vis[a], -H);
      }
      for (int b = k + 1; b < I; ++b) {
        int r = rb.add(-kInf, trip.times[b] + 2 * H);
        rb.put(r, td[s], 1);
        rb.put(r, e, H);
        rb.put(r, vis[b], H);
      }
    }
  }
  // Pickups.
  int cap = rb.add(-kInf, 0);
  rb.put(cap, xv, -C);
  for (int p : bl.active) {
    const Request& req = pb.instance().requests[p];
    const double D = pb.demand(p, bl.scenario);
    const double tau = req.direct_s;
    const double t0 = pb.planned_departure(bl.trip, p);
    int tp = m.add_var(0, Tend, weight * D * (q.mu / 60.0 - q.sigma / tau), false);
    int once = rb.add(-kInf, 0);
    rb.put(once, zv[member_pos(pb, bl.trip, p)], -1);
    int off = rb.add(-kInf, 0);  // tp <= Tend Σ w
    rb.put(off, tp, 1);
    for (const auto& o : pb.pickups(bl.trip, p)) {
      auto it = pos.find(o.station);
      if (it == pos.end()) continue;
      int s = it->second;
      CostTerms c = pb.terms(bl.trip, p, o.station, 0);
      double fixed = q.lambda * c.walk_min - q.mu * (t0 + o.walk_s) / 60.0 + q.sigma * Tend / tau +
                     q.delta * c.late + q.delta / 2 * c.early - q.reward;
      int w = m.add_var(0, 1, weight * D * fixed, true);
      rb.put(once, w, 1);
      rb.put(off, w, -Tend);
      rb.put(cap, w, D);
      int at = rb.add(-kInf, 0);  // w <= visited
      rb.put(at, w, 1);
      if (s == first) rb.put(at, xv, -1);
      for (auto [o2, v] : in[s]) rb.put(at, v, -1);
      const double B = Tend;
      int r1 = rb.add(-B, kInf);  // tp >= ta - B (1 - w)
      rb.put(r1, tp, 1);
      rb.put(r1, ta[s], -1);
      rb.put(r1, w, -B);
      int r2 = rb.add(-kInf, B);  // tp <= td + B (1 - w)
      rb.put(r2, tp, 1);
      rb.put(r2, td[s], -1);
      rb.put(r2, w, B);
      if (o.lo > T0) {
        int r3 = rb.add(o.lo - B, kInf);
        rb.put(r3, tp, 1);
        rb.put(r3, w, -B);
      }
      int r4 = rb.add(-kInf, o.hi + B);
      rb.put(r4, tp, 1);
      rb.put(r4, w, B);
    }
  }
  rb.flush(m);
}

}  // namespace

// ---------------------------------------------------------------------------

FirstStage add_first_stage(const Problem& pb, SolverModel& m) {
  FirstStage fs;
  const auto& trips = pb.trips();
  const Params& q = pb.params();
  for (size_t j = 0; j < trips.size(); ++j) fs.x.push_back(m.add_var(0, 1, pb.trip_cost(static_cast<int>(j)), true));
  for (const Block& b : pb.blocks()) {
    std::vector<int> zs;
    for (size_t k = 0; k < b.members.size(); ++k) zs.push_back(m.add_var(0, 1, 0, true));
    fs.z.push_back(std::move(zs));
  }
  std::set<int> points;
  for (const Trip& t : trips) points.insert(t.start);
  for (int t : points) {
    std::vector<int> vars;
    for (size_t j = 0; j < trips.size(); ++j)
      if (trips[j].times.front() <= t && t <= trips[j].end_time()) vars.push_back(fs.x[j]);
    m.add_row(vars, std::vector<double>(vars.size(), 1.0), -kInf, q.fleet);
    ++fs.rows;
  }
  const int np = static_cast<int>(pb.instance().requests.size());
  for (int p = 0; p < np; ++p)
    for (int s = 0; s < pb.num_scenarios(); ++s) {
      std::vector<int> vars;
      for (int j : pb.trips_of(p)) vars.push_back(fs.z[pb.block_index(j, s)][member_pos(pb, j, p)]);
      if (vars.empty()) continue;
      m.add_row(vars, std::vector<double>(vars.size(), 1.0), -kInf, 1);
      ++fs.rows;
    }
  for (size_t bi = 0; bi < pb.blocks().size(); ++bi) {
    const Block& b = pb.blocks()[bi];
    const double C = pb.capacity(b.trip);
    std::vector<int> vars = fs.z[bi];
    std::vector<double> lo_vals, hi_vals;
    for (int p : b.members) {
      lo_vals.push_back(-pb.demand(p, b.scenario));
      hi_vals.push_back(pb.demand(p, b.scenario));
    }
    vars.push_back(fs.x[b.trip]);
    lo_vals.push_back((1 - q.kappa) * C);
    hi_vals.push_back(-(1 + q.kappa) * C);
    m.add_row(vars, lo_vals, -kInf, 0);
    m.add_row(vars, hi_vals, -kInf, 0);
    fs.rows += 2;
  }
  return fs;
}

int first_stage_row_count(const Problem& pb) {
  std::set<int> points;
  for (const Trip& t : pb.trips()) points.insert(t.start);
  int packing = 0;
  for (size_t p = 0; p < pb.instance().requests.size(); ++p)
    if (!pb.trips_of(static_cast<int>(p)).empty()) packing += pb.num_scenarios();
  return static_cast<int>(points.size()) + packing + 2 * static_cast<int>(pb.blocks().size());
}

std::optional<std::vector<std::vector<int>>> enumerate_paths(const LoadNetwork& net, std::int64_t cap) {
  std::vector<std::vector<int>> by_tail(net.num_nodes());
  for (size_t a = 0; a < net.arcs.size(); ++a) by_tail[net.arcs[a].tail].push_back(static_cast<int>(a));
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  bool over = false;
  std::function<void(int)> dfs = [&](int node) {
    if (over) return;
    if (node == net.sink()) {
      if (static_cast<std::int64_t>(out.size()) >= cap) {
        over = true;
        return;
      }
      out.push_back(cur);
      return;
    }
    for (int a : by_tail[node]) {
      cur.push_back(a);
      dfs(net.arcs[a].head);
      cur.pop_back();
    }
  };
  if (net.alive[net.source()]) dfs(net.source());
  if (over) return std::nullopt;
  return out;
}

ExtensiveResult solve_extensive(const Problem& pb, Method method, const ExtensiveOptions& opts) {
  if (method == Method::DD || method == Method::DDILS)
    throw std::invalid_argument("decomposition methods are not extensive formulations");
  auto start = std::chrono::steady_clock::now();
  auto m = make_model();
  FirstStage fs = add_first_stage(pb, *m);
  const int grid = opts.segment_rho > 0 ? opts.segment_rho : pb.rho();
  std::vector<LoadNetwork> nets(pb.blocks().size());
  std::vector<Decoder> decode(pb.blocks().size());
  for (size_t bi = 0; bi < pb.blocks().size(); ++bi) {
    const int block = static_cast<int>(bi);
    const Block& b = pb.blocks()[bi];
    const double w = pb.instance().probabilities[b.scenario];
    const int xv = fs.x[b.trip];
    switch (method) {
      case Method::Subpath:
        nets[bi] = build_load_network(pb, block, full_subpaths(pb, block), true);
        decode[bi] = add_subpath_block(pb, *m, block, xv, fs.z[bi], w, nets[bi]);
        break;
      case Method::Path:
        nets[bi] = build_load_network(pb, block, full_subpaths(pb, block), true);
        decode[bi] = add_path_block(pb, *m, block, xv, fs.z[bi], w, nets[bi], opts.path_cap);
        break;
      case Method::Segment: add_segment_block(pb, *m, block, xv, fs.z[bi], w, grid); break;
      case Method::Compact: add_compact_block(pb, *m, block, xv, fs.z[bi], w); break;
      default: break;
    }
  }
  if (opts.relax_second) {
    std::vector<char> first(m->num_vars(), 0);
    for (int v : fs.x) first[v] = 1;
    for (const auto& zs : fs.z)
      for (int v : zs) first[v] = 1;
    for (int v = 0; v < m->num_vars(); ++v)
      if (!first[v]) m->set_integer(v, false);
  }
  if (opts.fix_x)
    for (size_t j = 0; j < fs.x.size(); ++j) m->set_var_bounds(fs.x[j], (*opts.fix_x)[j], (*opts.fix_x)[j]);
  if (opts.fix_z)
    for (size_t bi = 0; bi < fs.z.size(); ++bi)
      for (size_t k = 0; k < fs.z[bi].size(); ++k)
        m->set_var_bounds(fs.z[bi][k], (*opts.fix_z)[bi][k], (*opts.fix_z)[bi][k]);
  if (!opts.write_path.empty()) m->write(opts.write_path);

  ExtensiveResult res;
  res.size = {m->num_vars(), m->num_rows(), m->num_integer()};
  SolveOptions so;
  so.relax = opts.relax;
  so.time_limit = opts.time_limit;
  Solution& sol = res.solution;
  sol.status = m->solve(so);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (sol.status != SolveStatus::Optimal && sol.status != SolveStatus::TimeLimit) return res;
  if (m->values().empty()) return res;
  sol.objective = m->objective();
  sol.bound = m->bound();
  const auto& val = m->values();
  for (int v : fs.x) sol.x.push_back(val[v] > 0.5);
  for (const auto& zs : fs.z) {
    std::vector<int> row;
    for (int v : zs) row.push_back(val[v] > 0.5);
    sol.z.push_back(std::move(row));
  }
  sol.routes.assign(pb.blocks().size(), {});
  if (!opts.relax)
    for (size_t bi = 0; bi < decode.size(); ++bi)
      if (decode[bi]) sol.routes[bi] = decode[bi](val);
  return res;
}

double block_value(const Problem& pb, int block, int x, const std::vector<int>& z, bool relax,
                   std::vector<Subpath>* routes) {
  auto m = make_model();
  int xv = m->add_var(x, x, 0, false);
  std::vector<int> zv;
  for (int v : z) zv.push_back(m->add_var(v, v, 0, false));
  LoadNetwork net = build_load_network(pb, block, full_subpaths(pb, block), true);
  Decoder dec = add_subpath_block(pb, *m, block, xv, zv, 1.0, net);
  SolveOptions so;
  so.relax = relax;
  if (m->solve(so) != SolveStatus::Optimal) return kInf;
  if (routes && !relax) *routes = dec(m->values());
  return m->objective();
}

Solution evaluate_first_stage(const Problem& pb, const std::vector<int>& x, const std::vector<std::vector<int>>& z) {
  Solution sol;
  sol.x = x;
  sol.z = z;
  sol.routes.assign(pb.blocks().size(), {});
  double obj = 0;
  for (size_t j = 0; j < x.size(); ++j) obj += pb.trip_cost(static_cast<int>(j)) * x[j];
  for (size_t bi = 0; bi < pb.blocks().size(); ++bi) {
    const Block& b = pb.blocks()[bi];
    double v = block_value(pb, static_cast<int>(bi), x[b.trip], z[bi], false, &sol.routes[bi]);
    if (!std::isfinite(v)) {
      sol.status = SolveStatus::Infeasible;
      return sol;
    }
    obj += pb.instance().probabilities[b.scenario] * v;
  }
  sol.objective = obj;
  sol.bound = obj;
  sol.status = SolveStatus::Optimal;
  return sol;
}

Solution solve_with_fixed_x(const Problem& pb, const std::vector<int>& x) {
  ExtensiveOptions o;
  o.fix_x = x;
  return solve_extensive(pb, Method::Subpath, o).solution;
}

}  // namespace mind
