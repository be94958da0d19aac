#include "mind/network.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mind/labels.hpp"

namespace mind {

namespace {

double segment_distance(const Station& p, const Station& a, const Station& b) {
  double dx = b.x - a.x, dy = b.y - a.y;
  double len2 = dx * dx + dy * dy;
  double u = len2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return std::hypot(p.x - (a.x + u * dx), p.y - (a.y + u * dy));
}

const std::vector<PickupOption> kNoPickups;

}  // namespace

Problem::Problem(Instance inst, ProblemOptions opts)
    : inst_(std::move(inst)), opts_(opts), drive_(inst_.road), trips_(build_trips(inst_)) {
  const Params& q = inst_.params;
  const auto& st = inst_.road.stations;
  const int terminal = inst_.terminal();
  for (const Trip& t : trips_) trip_costs_.push_back(mind::trip_cost(inst_, t));

  seg_.resize(inst_.lines.size());
  for (size_t l = 0; l < inst_.lines.size(); ++l) {
    const auto& cp = inst_.lines[l].checkpoints;
    for (size_t k = 0; k + 1 < cp.size(); ++k) {
      std::vector<int> s;
      if (opts_.transit) {
        s = {cp[k], cp[k + 1]};
      } else {
        for (const Station& v : st)
          if ((v.road || v.id == cp[k] || v.id == cp[k + 1]) &&
              segment_distance(v, st[cp[k]], st[cp[k + 1]]) <= q.deviation_m + 1e-9)
            s.push_back(v.id);
      }
      std::sort(s.begin(), s.end());
      seg_[l].push_back(std::move(s));
    }
  }

  const int np = static_cast<int>(inst_.requests.size());
  trips_of_.assign(np, {});
  members_.assign(trips_.size(), {});
  pick_.assign(trips_.size(), std::vector<std::vector<PickupOption>>(np));
  t0_.assign(trips_.size(), std::vector<double>(np, 0.0));
  for (size_t j = 0; j < trips_.size(); ++j) {
    const Trip& trip = trips_[j];
    const auto& cp = inst_.lines[trip.line].checkpoints;
    std::set<int> visitable;
    for (const auto& s : seg_[trip.line]) visitable.insert(s.begin(), s.end());
    for (int p = 0; p < np; ++p) {
      const Request& r = inst_.requests[p];
      const Station& o = st[r.origin];
      int near = 0;
      for (size_t k = 1; k < cp.size(); ++k)
        if (euclid(o, st[cp[k]]) < euclid(o, st[cp[near]]) - 1e-9) near = static_cast<int>(k);
      double t0 = trip.times[near] - walk_seconds(o, st[cp[near]], q.walk_speed);
      t0_[j][p] = t0;
      if (std::abs(trip.end_time() - r.t_req) > q.tolerance_s + 1e-9) continue;
      bool spatial = false;
      for (int i : visitable) {
        if (i == terminal) continue;
        double w = walk_seconds(o, st[i], q.walk_speed);
        if (w > q.max_walk_s + 1e-9) continue;
        spatial = true;
        PickupOption opt;
        opt.station = i;
        opt.walk_s = w;
        opt.lo = ceil_to(t0 + w, q.rho);
        opt.hi = floor_to(t0 + w + q.max_wait_s, q.rho);
        if (opt.lo <= opt.hi) pick_[j][p].push_back(opt);
      }
      if (!spatial) continue;
      trips_of_[p].push_back(static_cast<int>(j));
      members_[j].push_back(p);
    }
  }

  for (size_t j = 0; j < trips_.size(); ++j)
    for (int s = 0; s < num_scenarios(); ++s) {
      Block b;
      b.trip = static_cast<int>(j);
      b.scenario = s;
      b.members = members_[j];
      for (int p : b.members)
        if (demand(p, s) > 0) b.active.push_back(p);
      blocks_.push_back(std::move(b));
    }
}

std::vector<int> Problem::pair_stations(int line, int a, int b) const {
  std::vector<int> out;
  for (int k = a; k < b; ++k) out.insert(out.end(), seg_[line][k].begin(), seg_[line][k].end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::pair<int, int>> Problem::pairs(int line) const {
  std::vector<std::pair<int, int>> out;
  int n = static_cast<int>(inst_.lines[line].checkpoints.size());
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n && b - a <= params().skip + 1; ++b) out.push_back({a, b});
  return out;
}

double Problem::planned_departure(int trip, int p) const { return t0_[trip][p]; }

const std::vector<PickupOption>& Problem::pickups(int trip, int p) const {
  if (trip < 0 || trip >= static_cast<int>(pick_.size())) return kNoPickups;
  return pick_[trip][p];
}

const PickupOption* Problem::pickup_at(int trip, int p, int station) const {
  for (const auto& o : pickups(trip, p))
    if (o.station == station) return &o;
  return nullptr;
}

CostTerms Problem::terms(int trip, int p, int station, int t) const {
  const Request& r = inst_.requests[p];
  const Trip& tr = trips_[trip];
  double walk = walk_seconds(inst_.road.stations[r.origin], inst_.road.stations[station], params().walk_speed);
  double t0 = t0_[trip][p];
  CostTerms c;
  c.walk_min = walk / 60.0;
  c.wait_min = (t - t0 - walk) / 60.0;
  c.travel = (tr.end_time() - t) / r.direct_s;
  c.late = std::max(0, tr.end_time() - r.t_req) / r.direct_s;
  c.early = std::max(0, r.t_req - tr.end_time()) / r.direct_s;
  return c;
}

double Problem::unit_cost(int trip, int p, int station, int t) const {
  const Params& q = params();
  CostTerms c = terms(trip, p, station, t);
  return q.lambda * c.walk_min + q.mu * c.wait_min + q.sigma * c.travel + q.delta * c.late +
         q.delta / 2 * c.early - q.reward;
}

double Problem::pickup_cost(int block, int p, int station, int t) const {
  const Block& b = blocks_[block];
  return demand(p, b.scenario) * unit_cost(b.trip, p, station, t);
}

double Problem::lower_bound(int block) const {
  const Block& b = blocks_[block];
  double d = 0;
  for (int p : b.members) d += demand(p, b.scenario);
  return -params().reward * d;
}

// ---------------------------------------------------------------------------

int PricingNetwork::num_arcs() const {
  int n = 0;
  for (const auto& o : out) n += static_cast<int>(o.size());
  return n;
}

PricingNetwork build_pricing_network(const Problem& pb, int block, int a, int b) {
  const Block& bl = pb.blocks()[block];
  const Trip& trip = pb.trips()[bl.trip];
  const auto& cp = pb.line_of(bl.trip).checkpoints;
  const int rho = pb.rho();
  const int u = cp[a], v = cp[b];
  const int Ta = trip.times[a], Tb = trip.times[b];
  PricingNetwork net;
  net.block = block;
  net.a = a;
  net.b = b;
  std::vector<std::pair<int, int>> nodes;  // (time, station)
  for (int i : pb.pair_stations(trip.line, a, b)) {
    int lo = Ta + pb.tt(u, i), hi = Tb - pb.tt(i, v);
    for (int t = lo; t <= hi; t += rho) nodes.push_back({t, i});
  }
  std::sort(nodes.begin(), nodes.end());
  std::map<std::pair<int, int>, int> id;
  for (size_t k = 0; k < nodes.size(); ++k) {
    net.time.push_back(nodes[k].first);
    net.station.push_back(nodes[k].second);
    id[{nodes[k].second, nodes[k].first}] = static_cast<int>(k);
  }
  net.source = id.at({u, Ta});
  net.sink = id.at({v, Tb});
  const int n = net.num_nodes();
  net.out.assign(n, {});
  auto stations = pb.pair_stations(trip.line, a, b);
  for (int k = 0; k < n; ++k) {
    if (k == net.sink) continue;
    int i = net.station[k], t = net.time[k];
    auto idle = id.find({i, t + rho});
    if (idle != id.end()) net.out[k].push_back(idle->second);
    for (int j : stations) {
      if (j == i) continue;
      auto it = id.find({j, t + pb.tt(i, j)});
      if (it != id.end()) net.out[k].push_back(it->second);
    }
  }

  std::map<int, int> local;
  net.cand.assign(n, {});
  for (int p : bl.active) {
    for (const auto& opt : pb.pickups(bl.trip, p)) {
      for (int t = opt.lo; t <= opt.hi; t += rho) {
        auto it = id.find({opt.station, t});
        if (it == id.end() || it->second == net.sink) continue;
        auto [lit, fresh] = local.emplace(p, static_cast<int>(net.cand_passenger.size()));
        if (fresh) {
          net.cand_passenger.push_back(p);
          net.cand_load.push_back(pb.demand(p, bl.scenario));
        }
        net.cand[it->second].push_back({lit->second, pb.pickup_cost(block, p, opt.station, t)});
      }
    }
  }
  if (net.cand_passenger.size() > 64)
    throw std::runtime_error("more than 64 candidate passengers in one checkpoint pair");
  for (auto& c : net.cand) std::sort(c.begin(), c.end());
  return net;
}

// ---------------------------------------------------------------------------

std::vector<Subpath> enumerate_subpaths(const Problem& pb, int block, int a, int b) {
  const Block& bl = pb.blocks()[block];
  const Trip& trip = pb.trips()[bl.trip];
  const auto& cp = pb.line_of(bl.trip).checkpoints;
  const int rho = pb.rho();
  const int C = pb.capacity(bl.trip);
  const int u = cp[a], v = cp[b];
  const int Ta = trip.times[a], Tb = trip.times[b];
  const auto stations = pb.pair_stations(trip.line, a, b);
  const int s = bl.scenario;

  // Passengers boardable at (station, t).
  auto boardable = [&](int i, int t) {
    std::vector<int> out;
    if (i == v && t == Tb) return out;
    if (t < Ta + pb.tt(u, i) || t + pb.tt(i, v) > Tb) return out;
    for (int p : bl.active) {
      const PickupOption* o = pb.pickup_at(bl.trip, p, i);
      if (o && o->lo <= t && t <= o->hi) out.push_back(p);
    }
    return out;
  };

  std::vector<Subpath> result;
  Subpath cur;
  cur.a = a;
  cur.b = b;
  std::function<void(int, int)> go;
  // Board a subset at the current stop, then choose the next stop.
  std::function<void(int, int, bool)> stop = [&](int i, int t, bool must_board) {
    auto cand = boardable(i, t);
    std::vector<int> avail;
    for (int p : cand)
      if (!std::binary_search(cur.passengers.begin(), cur.passengers.end(), p)) avail.push_back(p);
    const int m = static_cast<int>(avail.size());
    for (int mask = must_board ? 1 : 0; mask < (1 << m); ++mask) {
      int load = cur.load;
      for (int k = 0; k < m; ++k)
        if (mask >> k & 1) load += pb.demand(avail[k], s);
      if (load > C) continue;
      Subpath saved = cur;
      for (int k = 0; k < m; ++k)
        if (mask >> k & 1) {
          cur.passengers.push_back(avail[k]);
          cur.pickups.push_back({avail[k], i, t});
          cur.cost += pb.pickup_cost(block, avail[k], i, t);
        }
      cur.load = load;
      std::sort(cur.passengers.begin(), cur.passengers.end());
      go(i, t);
      cur = std::move(saved);
    }
  };
  go = [&](int i, int t) {
    // Finish at the sink.
    if ((i == v && t < Tb) || (i != v && t + pb.tt(i, v) <= Tb)) {
      Subpath done = cur;
      done.route.push_back({v, Tb});
      std::sort(done.pickups.begin(), done.pickups.end(),
                [](const PickupEvent& x, const PickupEvent& y) { return x.passenger < y.passenger; });
      result.push_back(std::move(done));
    }
    for (int k : stations)
      for (int t2 = t + (k == i ? rho : pb.tt(i, k)); t2 + pb.tt(k, v) <= Tb; t2 += rho) {
        if (k == v && t2 == Tb) break;
        if (boardable(k, t2).empty()) continue;
        cur.route.push_back({k, t2});
        stop(k, t2, true);
        cur.route.pop_back();
      }
  };
  cur.route.push_back({u, Ta});
  stop(u, Ta, false);
  return result;
}

std::vector<Subpath> cheapest_per_set(std::vector<Subpath> subpaths) {
  std::map<std::vector<int>, size_t> best;
  for (size_t i = 0; i < subpaths.size(); ++i) {
    auto [it, fresh] = best.emplace(subpaths[i].passengers, i);
    if (!fresh && subpaths[i].cost < subpaths[it->second].cost - 1e-9) it->second = i;
  }
  std::vector<Subpath> out;
  for (auto& [set, i] : best) out.push_back(std::move(subpaths[i]));
  return out;
}

std::vector<Subpath> full_subpaths(const Problem& pb, int block) {
  const Block& bl = pb.blocks()[block];
  std::vector<Subpath> out;
  for (auto [a, b] : pb.pairs(pb.trips()[bl.trip].line)) {
    PricingNetwork net = build_pricing_network(pb, block, a, b);
    std::vector<double> zero(net.cand_passenger.size(), 0.0);
    for (auto& ps : label_sets(net, zero, pb.capacity(bl.trip), false)) out.push_back(std::move(ps.subpath));
  }
  return out;
}

std::vector<Subpath> zero_subpaths(const Problem& pb, int block) {
  const Block& bl = pb.blocks()[block];
  const Trip& trip = pb.trips()[bl.trip];
  const auto& cp = pb.line_of(bl.trip).checkpoints;
  std::vector<Subpath> out;
  for (size_t k = 0; k + 1 < cp.size(); ++k) {
    Subpath s;
    s.a = static_cast<int>(k);
    s.b = static_cast<int>(k + 1);
    s.route = {{cp[k], trip.times[k]}, {cp[k + 1], trip.times[k + 1]}};
    out.push_back(std::move(s));
  }
  return out;
}

LoadNetwork build_load_network(const Problem& pb, int block, std::vector<Subpath> subpaths, bool prune) {
  const Block& bl = pb.blocks()[block];
  LoadNetwork net;
  net.block = block;
  net.checkpoints = pb.num_checkpoints(bl.trip);
  net.capacity = pb.capacity(bl.trip);
  net.subpaths = std::move(subpaths);
  const int C = net.capacity;
  std::vector<LoadArc> arcs;
  for (size_t i = 0; i < net.subpaths.size(); ++i) {
    const Subpath& s = net.subpaths[i];
    for (int c = 0; c + s.load <= C; ++c)
      arcs.push_back({static_cast<int>(i), net.node(s.a, c), net.node(s.b, c + s.load), s.cost});
  }
  for (int c = 0; c <= C; ++c) arcs.push_back({-1, net.node(net.checkpoints - 1, c), net.sink(), 0.0});

  const int n = net.num_nodes();
  net.alive.assign(n, 1);
  if (prune) {
    std::vector<char> fwd(n, 0), bwd(n, 0);
    fwd[net.source()] = 1;
    bwd[net.sink()] = 1;
    // Arcs always go to a later checkpoint (or the sink), so sweeping in
    // tail order settles reachability.
    auto by_tail = arcs;
    std::stable_sort(by_tail.begin(), by_tail.end(), [](const LoadArc& x, const LoadArc& y) { return x.tail < y.tail; });
    for (const auto& e : by_tail)
      if (fwd[e.tail]) fwd[e.head] = 1;
    for (auto it = by_tail.rbegin(); it != by_tail.rend(); ++it)
      if (bwd[it->head]) bwd[it->tail] = 1;
    for (int i = 0; i < n; ++i) net.alive[i] = fwd[i] && bwd[i];
  }
  for (const auto& e : arcs)
    if (net.alive[e.tail] && net.alive[e.head]) net.arcs.push_back(e);
  return net;
}

// ---------------------------------------------------------------------------

std::string dump_pricing_network(const Problem& pb, const PricingNetwork& net) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["block"] = net.block;
  j["pair"] = {net.a, net.b};
  j["source"] = net.source;
  j["sink"] = net.sink;
  j["nodes"] = ordered_json::array();
  for (int k = 0; k < net.num_nodes(); ++k) {
    ordered_json c = ordered_json::array();
    for (auto [i, cost] : net.cand[k]) c.push_back({{"passenger", net.cand_passenger[i]}, {"cost", cost}});
    j["nodes"].push_back({{"id", k}, {"station", net.station[k]}, {"time", net.time[k]}, {"out", net.out[k]}, {"pickups", c}});
  }
  (void)pb;
  return j.dump(2) + "\n";
}

std::string dump_load_network(const Problem& pb, const LoadNetwork& net) {
  using nlohmann::ordered_json;
  ordered_json j;
  const Block& bl = pb.blocks()[net.block];
  j["trip"] = bl.trip;
  j["scenario"] = bl.scenario;
  j["checkpoints"] = net.checkpoints;
  j["capacity"] = net.capacity;
  j["arcs"] = ordered_json::array();
  for (const auto& e : net.arcs) {
    ordered_json a = {{"tail", e.tail}, {"head", e.head}, {"cost", e.cost}};
    if (e.sub >= 0) a["passengers"] = net.subpaths[e.sub].passengers;
    else a["terminating"] = true;
    j["arcs"].push_back(a);
  }
  return j.dump(2) + "\n";
}

}  // namespace mind
