#include "mind/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace mind {

SolveReport solve_method(const Problem& pb, Method method, const SolveConfig& cfg) {
  SolveReport rep;
  if (method == Method::DD || method == Method::DDILS) {
    DDOptions o;
    o.pricing = cfg.pricing;
    o.heuristic_first = cfg.heuristic_first;
    o.ils = method == Method::DDILS;
    o.time_limit = cfg.time_limit;
    o.max_iter = cfg.max_iter;
    o.threads = cfg.threads;
    o.deterministic = cfg.deterministic;
    rep.dd = solve_dd(pb, o);
    rep.solution = rep.dd.solution;
    rep.lower_bound = rep.dd.lower_bound;
    rep.seconds = rep.dd.seconds;
    return rep;
  }
  ExtensiveOptions o;
  o.time_limit = cfg.time_limit;
  ExtensiveResult r = solve_extensive(pb, method, o);
  rep.solution = r.solution;
  rep.size = r.size;
  rep.seconds = r.seconds;
  rep.lower_bound = r.solution.bound;
  if ((method == Method::Compact || method == Method::Segment) && !r.solution.x.empty()) {
    Solution filled = evaluate_first_stage(pb, r.solution.x, r.solution.z);
    rep.solution.routes = filled.routes;
  }
  return rep;
}

Metrics score_solution(const Problem& pb, const Solution& sol) {
  Metrics m;
  const auto& inst = pb.instance();
  const auto& prob = inst.probabilities;
  for (size_t j = 0; j < sol.x.size(); ++j)
    if (sol.x[j]) {
      m.objective += pb.trip_cost(static_cast<int>(j));
      ++m.trips;
    }
  for (size_t p = 0; p < inst.requests.size(); ++p)
    for (int s = 0; s < pb.num_scenarios(); ++s) m.demand += prob[s] * inst.requests[p].demand[s];
  double seats = 0;
  for (size_t bi = 0; bi < pb.blocks().size() && bi < sol.routes.size(); ++bi) {
    const Block& b = pb.blocks()[bi];
    if (sol.x.empty() || !sol.x[b.trip]) continue;
    const double w = prob[b.scenario];
    const Trip& trip = pb.trips()[b.trip];
    seats += w * pb.capacity(b.trip);
    for (const Subpath& sp : sol.routes[bi]) {
      for (size_t k = 1; k < sp.route.size(); ++k)
        m.distance_km += w * pb.drive().meters(sp.route[k - 1].first, sp.route[k].first) / 1000.0;
      for (const PickupEvent& e : sp.pickups) {
        const double D = pb.demand(e.passenger, b.scenario);
        CostTerms c = pb.terms(b.trip, e.passenger, e.station, e.time);
        m.objective += w * D * pb.unit_cost(b.trip, e.passenger, e.station, e.time);
        m.served += w * D;
        m.walk_min += w * D * c.walk_min;
        m.wait_min += w * D * c.wait_min;
        const double dir = inst.requests[e.passenger].direct_s;
        m.late_min += w * D * c.late * dir / 60.0;
        m.early_min += w * D * c.early * dir / 60.0;
        m.detour += w * D * (trip.end_time() - e.time) / dir;
      }
    }
  }
  if (m.served > 0) {
    m.walk_min /= m.served;
    m.wait_min /= m.served;
    m.late_min /= m.served;
    m.early_min /= m.served;
    m.detour /= m.served;
    m.km_per_passenger = m.distance_km / m.served;
  }
  m.coverage = m.demand > 0 ? m.served / m.demand : 0;
  m.utilization = seats > 0 ? m.served / seats : 0;
  return m;
}

// ---------------------------------------------------------------------------

Instance mean_scenario(const Instance& inst) {
  Instance out = inst;
  out.probabilities = {1.0};
  for (auto& r : out.requests) {
    double mean = 0;
    for (int s = 0; s < inst.num_scenarios(); ++s) mean += inst.probabilities[s] * r.demand[s];
    r.demand = {static_cast<int>(std::floor(mean + 0.5))};
  }
  return out;
}

Instance scenario_instance(const Instance& inst, int s) {
  Instance out = inst;
  out.probabilities = {1.0};
  for (auto& r : out.requests) r.demand = {r.demand[s]};
  return out;
}

StochasticValue stochastic_value(const Instance& inst, const Solver& solve) {
  StochasticValue v;
  Problem pb(inst);
  v.rp = solve(pb).objective;
  Problem mean(mean_scenario(inst));
  Solution ev = solve(mean);
  v.eev = solve_with_fixed_x(pb, ev.x).objective;
  for (int s = 0; s < inst.num_scenarios(); ++s) {
    Problem one(scenario_instance(inst, s));
    v.ws += inst.probabilities[s] * solve(one).objective;
  }
  v.vss = v.eev - v.rp;
  v.evpi = v.rp - v.ws;
  return v;
}

// ---------------------------------------------------------------------------

std::vector<Rider> riders_of(const Instance& inst, int scenario) {
  std::vector<Rider> out;
  for (const Request& r : inst.requests)
    for (int k = 0; k < r.demand[scenario]; ++k) out.push_back({r.id, r.origin, r.t_req - r.direct_s, r.direct_s});
  return out;
}

std::optional<RideGroup> route_group(const Instance& inst, const DriveTimes& drive, const std::vector<Rider>& riders,
                                     const std::vector<int>& group) {
  const double psi = inst.params.max_wait_s;
  const int term = inst.terminal();
  std::vector<int> order = group;
  std::sort(order.begin(), order.end());
  std::optional<RideGroup> best;
  double bound = 0;
  for (int r : group) bound += riders[r].direct_s;
  do {
    RideGroup g;
    g.riders = order;
    double t = riders[order[0]].earliest;
    bool ok = true;
    for (size_t k = 0; k < order.size() && ok; ++k) {
      const Rider& r = riders[order[k]];
      if (k > 0) {
        t = std::max(t + drive.seconds(riders[order[k - 1]].origin, r.origin), r.earliest);
        g.meters += drive.meters(riders[order[k - 1]].origin, r.origin);
      }
      ok = t <= r.earliest + psi + 1e-9;
      g.pickup.push_back(t);
    }
    if (!ok) continue;
    const Rider& last = riders[order.back()];
    g.time_s = t - g.pickup.front() + last.direct_s;
    g.meters += drive.meters(last.origin, term);
    if (group.size() > 1 && g.time_s > bound + 1e-9) continue;
    if (!best || g.time_s < best->time_s - 1e-9) best = g;
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

namespace {

// Chooses disjoint groups: most riders first, then least vehicle time.
std::vector<int> choose_groups(const std::vector<std::vector<int>>& items, const std::vector<int>& size,
                               const std::vector<double>& time, int n_items, int fleet, int exact_limit,
                               bool& exact) {
  const int g = static_cast<int>(items.size());
  double big = 1;
  for (double t : time) big += t;
  std::vector<int> chosen;
  if (backend_available() && g <= exact_limit) {
    auto m = make_model();
    std::vector<int> var(g);
    for (int k = 0; k < g; ++k) var[k] = m->add_var(0, 1, time[k] - big * size[k], true);
    std::vector<std::vector<int>> uses(n_items);
    for (int k = 0; k < g; ++k)
      for (int i : items[k]) uses[i].push_back(var[k]);
    for (const auto& u : uses)
      if (!u.empty()) m->add_row(u, std::vector<double>(u.size(), 1.0), -kInf, 1);
    if (fleet >= 0) m->add_row(var, std::vector<double>(g, 1.0), -kInf, fleet);
    if (m->solve({}) != SolveStatus::Optimal) throw std::runtime_error("ride-share matching failed");
    for (int k = 0; k < g; ++k)
      if (m->value(var[k]) > 0.5) chosen.push_back(k);
    exact = true;
    return chosen;
  }
  exact = false;
  std::vector<int> order(g);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    double sa = time[a] / size[a], sb = time[b] / size[b];
    return size[a] != size[b] ? size[a] > size[b] : sa < sb;
  });
  std::vector<char> used(n_items, 0);
  for (int k : order) {
    if (fleet >= 0 && static_cast<int>(chosen.size()) >= fleet) break;
    bool free = std::none_of(items[k].begin(), items[k].end(), [&](int i) { return used[i]; });
    if (!free) continue;
    for (int i : items[k]) used[i] = 1;
    chosen.push_back(k);
  }
  return chosen;
}

}  // namespace

RideshareResult rideshare(const Instance& inst, const std::vector<Rider>& riders, const RideshareOptions& opts) {
  if (opts.capacity < 1) throw std::invalid_argument("ride-share capacity must be positive");
  DriveTimes drive(inst.road);
  const int n = static_cast<int>(riders.size());
  RideshareResult res;
  res.riders = n;

  // Units start as single riders; each round merges two units.
  std::vector<RideGroup> units;
  for (int i = 0; i < n; ++i) units.push_back(*route_group(inst, drive, riders, {i}));
  bool exact = true;
  for (int size_cap = 2; size_cap <= opts.capacity; size_cap *= 2) {
    const int u = static_cast<int>(units.size());
    std::vector<std::vector<int>> items;
    std::vector<RideGroup> cand;
    std::vector<int> size;
    std::vector<double> time;
    for (int a = 0; a < u; ++a) {
      items.push_back({a});
      cand.push_back(units[a]);
      size.push_back(static_cast<int>(units[a].riders.size()));
      time.push_back(units[a].time_s);
    }
    for (int a = 0; a < u; ++a)
      for (int b = a + 1; b < u; ++b) {
        std::vector<int> merged = units[a].riders;
        merged.insert(merged.end(), units[b].riders.begin(), units[b].riders.end());
        if (static_cast<int>(merged.size()) > std::min(size_cap, opts.capacity)) continue;
        auto g = route_group(inst, drive, riders, merged);
        if (!g || g->time_s > units[a].time_s + units[b].time_s + 1e-9) continue;
        items.push_back({a, b});
        cand.push_back(*g);
        size.push_back(static_cast<int>(merged.size()));
        time.push_back(g->time_s);
      }
    bool last = size_cap * 2 > opts.capacity;
    bool ex = true;
    auto pick = choose_groups(items, size, time, u, last ? opts.fleet : -1, opts.exact_limit, ex);
    exact = exact && ex;
    std::vector<RideGroup> next;
    for (int k : pick) next.push_back(cand[k]);
    units = std::move(next);
    if (last) break;
  }
  if (opts.capacity == 1) {
    std::vector<std::vector<int>> items;
    std::vector<int> size;
    std::vector<double> time;
    for (int a = 0; a < n; ++a) {
      items.push_back({a});
      size.push_back(1);
      time.push_back(units[a].time_s);
    }
    bool ex = true;
    auto pick = choose_groups(items, size, time, n, opts.fleet, opts.exact_limit, ex);
    exact = ex;
    std::vector<RideGroup> next;
    for (int k : pick) next.push_back(units[k]);
    units = std::move(next);
  }
  res.groups = units;
  res.exact = exact;
  double wait = 0, detour = 0;
  for (const RideGroup& g : res.groups) {
    res.served += static_cast<int>(g.riders.size());
    res.distance_km += g.meters / 1000.0;
    const double end = g.pickup.back() + riders[g.riders.back()].direct_s;
    for (size_t k = 0; k < g.riders.size(); ++k) {
      const Rider& r = riders[g.riders[k]];
      wait += (g.pickup[k] - r.earliest) / 60.0;
      detour += (end - g.pickup[k]) / r.direct_s;
    }
  }
  res.coverage = n > 0 ? static_cast<double>(res.served) / n : 0;
  if (res.served > 0) {
    res.wait_min = wait / res.served;
    res.detour = detour / res.served;
  }
  return res;
}

}  // namespace mind
