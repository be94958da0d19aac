#include "mind/instance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mind/linegen.hpp"

namespace mind {

using nlohmann::ordered_json;

double euclid(const Station& a, const Station& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double walk_seconds(const Station& a, const Station& b, double walk_speed) {
  return euclid(a, b) / walk_speed * 60.0;
}

int ceil_to(double t, int rho) { return static_cast<int>(std::ceil(t / rho - 1e-9)) * rho; }
int floor_to(double t, int rho) { return static_cast<int>(std::floor(t / rho + 1e-9)) * rho; }

DriveTimes::DriveTimes(const RoadNetwork& road) : n_(static_cast<int>(road.stations.size())) {
  time_.assign(static_cast<size_t>(n_) * n_, kUnreachable());
  dist_.assign(static_cast<size_t>(n_) * n_, kUnreachable());
  std::vector<std::vector<std::pair<int, double>>> adj(n_);
  for (const Edge& e : road.edges)
    if (e.from >= 0 && e.from < n_ && e.to >= 0 && e.to < n_) adj[e.from].push_back({e.to, e.travel_s});
  using Item = std::pair<double, int>;
  for (int s = 0; s < n_; ++s) {
    double* t = &time_[static_cast<size_t>(s) * n_];
    double* d = &dist_[static_cast<size_t>(s) * n_];
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    t[s] = 0;
    d[s] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [ts, u] = pq.top();
      pq.pop();
      if (ts > t[u]) continue;
      for (auto [v, w] : adj[u]) {
        double nt = ts + w;
        double nd = d[u] + euclid(road.stations[u], road.stations[v]);
        if (nt < t[v] - 1e-12 || (std::abs(nt - t[v]) <= 1e-12 && nd < d[v])) {
          t[v] = nt;
          d[v] = nd;
          pq.push({nt, v});
        }
      }
    }
  }
}

double DriveTimes::kUnreachable() { return std::numeric_limits<double>::infinity(); }

bool DriveTimes::reachable(int i, int j) const { return std::isfinite(seconds(i, j)); }

int DriveTimes::grid(int i, int j, int rho) const {
  if (i == j) return 0;
  return ceil_to(seconds(i, j), rho);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

[[noreturn]] void field_error(const std::string& where, const std::string& what) {
  throw InstanceError(where + ": " + what);
}

const ordered_json& need(const ordered_json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) field_error(where, std::string("missing field '") + key + "'");
  return j.at(key);
}

int get_int(const ordered_json& j, const char* key, const std::string& where) {
  const auto& v = need(j, key, where);
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return static_cast<int>(v.get<double>());
  field_error(where + "." + key, "expected integer");
}

double get_num(const ordered_json& j, const char* key, const std::string& where) {
  const auto& v = need(j, key, where);
  if (!v.is_number()) field_error(where + "." + key, "expected number");
  return v.get<double>();
}

std::vector<int> get_ints(const ordered_json& j, const char* key, const std::string& where) {
  const auto& v = need(j, key, where);
  if (!v.is_array()) field_error(where + "." + key, "expected array");
  std::vector<int> out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_integer()) field_error(where + "." + key + "[" + std::to_string(i) + "]", "expected integer");
    out.push_back(v[i].get<int>());
  }
  return out;
}

const ordered_json& need_array(const ordered_json& j, const char* key) {
  const auto& v = need(j, key, "instance");
  if (!v.is_array()) field_error(key, "expected array");
  return v;
}

void read_param(const ordered_json& p, const char* key, double& out) {
  if (p.contains(key)) out = get_num(p, key, "params");
}
void read_param(const ordered_json& p, const char* key, int& out) {
  if (p.contains(key)) out = get_int(p, key, "params");
}

int line_of_offset(const std::string& text, size_t byte) {
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + std::min(byte, text.size()), '\n'));
}

}  // namespace

Instance parse_instance(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw InstanceError("parse error at line " + std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
  }
  if (!j.is_object()) throw InstanceError("instance: expected a JSON object");
  static const std::set<std::string> known = {"stations", "edges", "lines", "requests", "scenarios", "params"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) field_error("instance", "unknown field '" + it.key() + "'");

  Instance inst;
  const auto& st = need_array(j, "stations");
  for (size_t i = 0; i < st.size(); ++i) {
    std::string w = "stations[" + std::to_string(i) + "]";
    Station s;
    s.id = get_int(st[i], "id", w);
    s.x = get_num(st[i], "x", w);
    s.y = get_num(st[i], "y", w);
    if (st[i].contains("road")) s.road = st[i]["road"].get<bool>();
    inst.road.stations.push_back(s);
  }
  const auto& ed = need_array(j, "edges");
  for (size_t i = 0; i < ed.size(); ++i) {
    std::string w = "edges[" + std::to_string(i) + "]";
    inst.road.edges.push_back({get_int(ed[i], "from", w), get_int(ed[i], "to", w), get_num(ed[i], "travel_s", w)});
  }
  const auto& ln = need_array(j, "lines");
  for (size_t i = 0; i < ln.size(); ++i) {
    std::string w = "lines[" + std::to_string(i) + "]";
    Line l;
    l.id = get_int(ln[i], "id", w);
    l.checkpoints = get_ints(ln[i], "checkpoints", w);
    l.capacity = get_int(ln[i], "capacity", w);
    l.start_times = get_ints(ln[i], "start_times", w);
    if (ln[i].contains("offsets")) l.offsets = get_ints(ln[i], "offsets", w);
    if (ln[i].contains("trip_cost")) l.trip_cost = get_num(ln[i], "trip_cost", w);
    inst.lines.push_back(std::move(l));
  }
  const auto& rq = need_array(j, "requests");
  for (size_t i = 0; i < rq.size(); ++i) {
    std::string w = "requests[" + std::to_string(i) + "]";
    Request r;
    r.id = get_int(rq[i], "id", w);
    r.origin = get_int(rq[i], "origin", w);
    r.t_req = get_int(rq[i], "t_req", w);
    if (rq[i].contains("direct_s")) r.direct_s = get_num(rq[i], "direct_s", w);
    r.demand = get_ints(rq[i], "demand", w);
    inst.requests.push_back(std::move(r));
  }
  const auto& sc = need_array(j, "scenarios");
  for (size_t i = 0; i < sc.size(); ++i)
    inst.probabilities.push_back(get_num(sc[i], "probability", "scenarios[" + std::to_string(i) + "]"));
  if (j.contains("params")) {
    const auto& p = j["params"];
    Params& q = inst.params;
    read_param(p, "deviation_m", q.deviation_m);
    read_param(p, "max_walk_s", q.max_walk_s);
    read_param(p, "max_wait_s", q.max_wait_s);
    read_param(p, "tolerance_s", q.tolerance_s);
    read_param(p, "skip", q.skip);
    read_param(p, "kappa", q.kappa);
    read_param(p, "fleet", q.fleet);
    read_param(p, "reward", q.reward);
    read_param(p, "lambda", q.lambda);
    read_param(p, "mu", q.mu);
    read_param(p, "sigma", q.sigma);
    read_param(p, "delta", q.delta);
    read_param(p, "walk_speed", q.walk_speed);
    read_param(p, "rho", q.rho);
    read_param(p, "buffer_factor", q.buffer_factor);
  }
  finalize_instance(inst);
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("cannot open instance file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

std::string dump_instance(const Instance& inst) {
  ordered_json j;
  j["stations"] = ordered_json::array();
  for (const auto& s : inst.road.stations)
    j["stations"].push_back({{"id", s.id}, {"x", s.x}, {"y", s.y}, {"road", s.road}});
  j["edges"] = ordered_json::array();
  for (const auto& e : inst.road.edges)
    j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"travel_s", e.travel_s}});
  j["lines"] = ordered_json::array();
  for (const auto& l : inst.lines) {
    ordered_json o = {{"id", l.id}, {"checkpoints", l.checkpoints}, {"capacity", l.capacity},
                      {"start_times", l.start_times}, {"offsets", l.offsets}};
    if (l.trip_cost) o["trip_cost"] = *l.trip_cost;
    j["lines"].push_back(o);
  }
  j["requests"] = ordered_json::array();
  for (const auto& r : inst.requests)
    j["requests"].push_back({{"id", r.id}, {"origin", r.origin}, {"t_req", r.t_req},
                             {"direct_s", r.direct_s}, {"demand", r.demand}});
  j["scenarios"] = ordered_json::array();
  for (double p : inst.probabilities) j["scenarios"].push_back({{"probability", p}});
  const Params& q = inst.params;
  j["params"] = {{"deviation_m", q.deviation_m}, {"max_walk_s", q.max_walk_s},
                 {"max_wait_s", q.max_wait_s},   {"tolerance_s", q.tolerance_s},
                 {"skip", q.skip},               {"kappa", q.kappa},
                 {"fleet", q.fleet},             {"reward", q.reward},
                 {"lambda", q.lambda},           {"mu", q.mu},
                 {"sigma", q.sigma},             {"delta", q.delta},
                 {"walk_speed", q.walk_speed},   {"rho", q.rho},
                 {"buffer_factor", q.buffer_factor}};
  return j.dump(2) + "\n";
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InstanceError("cannot write instance file '" + path + "'");
  out << dump_instance(inst);
}

// ---------------------------------------------------------------------------
// Validation

namespace {

void add(std::vector<Violation>& v, const char* code, std::string msg) { v.push_back({code, std::move(msg)}); }

std::string sid(int id) { return std::to_string(id); }

// Checks that only need the raw fields; derived fields rely on them.
std::vector<Violation> structural(const Instance& inst) {
  std::vector<Violation> v;
  const int n = static_cast<int>(inst.road.stations.size());
  auto known = [n](int s) { return s >= 0 && s < n; };
  for (int i = 0; i < n; ++i) {
    const Station& s = inst.road.stations[i];
    if (s.id != i) add(v, "station.id.order", "station at position " + sid(i) + " has id " + sid(s.id));
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) add(v, "station.coord.nonfinite", "station " + sid(s.id) + " has non-finite coordinates");
  }
  for (const Edge& e : inst.road.edges) {
    if (!known(e.from)) add(v, "edge.station.unknown", "edge references unknown station " + sid(e.from));
    if (!known(e.to)) add(v, "edge.station.unknown", "edge references unknown station " + sid(e.to));
    if (!(e.travel_s > 0)) add(v, "edge.time.nonpositive", "edge " + sid(e.from) + "->" + sid(e.to) + " has non-positive travel time");
  }
  if (inst.lines.empty()) add(v, "line.none", "instance has no lines");
  int terminal = inst.terminal();
  for (const Line& l : inst.lines) {
    std::string w = "line " + sid(l.id);
    for (int c : l.checkpoints)
      if (!known(c)) add(v, "line.checkpoint.unknown", w + " references unknown station " + sid(c));
    if (l.checkpoints.size() < 2) add(v, "line.checkpoints.short", w + " has fewer than 2 checkpoints");
    std::set<int> seen(l.checkpoints.begin(), l.checkpoints.end());
    if (seen.size() != l.checkpoints.size()) add(v, "line.checkpoints.duplicate", w + " repeats a checkpoint");
    if (!l.checkpoints.empty() && l.checkpoints.back() != terminal)
      add(v, "line.terminal.mismatch", w + " does not end at the shared terminal " + sid(terminal));
    if (l.capacity < 1) add(v, "line.capacity.nonpositive", w + " has capacity " + sid(l.capacity));
    if (l.start_times.empty()) add(v, "line.start_times.empty", w + " has no start times");
    if (!l.offsets.empty() && l.offsets.size() != l.checkpoints.size())
      add(v, "line.offsets.size", w + " offsets do not match its checkpoints");
  }
  const int ns = inst.num_scenarios();
  if (ns == 0) add(v, "scenario.none", "instance has no scenarios");
  double sum = 0;
  for (double p : inst.probabilities) {
    if (!(p >= 0)) add(v, "scenario.probability.negative", "scenario probability is negative");
    sum += p;
  }
  if (ns > 0 && std::abs(sum - 1.0) > 1e-9) add(v, "scenario.probability.sum", "scenario probabilities must sum to 1");
  for (size_t i = 0; i < inst.requests.size(); ++i) {
    const Request& r = inst.requests[i];
    std::string w = "request " + sid(r.id);
    if (r.id != static_cast<int>(i)) add(v, "request.id.order", w + " is at position " + sid(static_cast<int>(i)));
    if (!known(r.origin)) add(v, "request.origin.unknown", w + " references unknown station " + sid(r.origin));
    if (static_cast<int>(r.demand.size()) != ns) add(v, "request.demand.size", w + " demand does not match the scenario count");
    bool pos = false;
    for (int d : r.demand) {
      if (d < 0) add(v, "request.demand.negative", w + " has negative demand");
      pos = pos || d > 0;
    }
    if (!pos) add(v, "request.demand.empty", w + " has no positive demand in any scenario");
  }
  const Params& q = inst.params;
  for (double x : {q.deviation_m, q.max_walk_s, q.max_wait_s, q.tolerance_s, q.reward, q.lambda, q.mu, q.sigma, q.delta})
    if (!(x >= 0)) {
      add(v, "params.negative", "a model parameter is negative");
      break;
    }
  if (q.skip < 0 || q.skip > 3) add(v, "params.skip.range", "skip must be in {0,1,2,3}");
  if (!(q.kappa > 0 && q.kappa <= 1)) add(v, "params.kappa.range", "kappa must be in (0,1]");
  if (q.fleet < 0) add(v, "params.negative", "fleet is negative");
  if (q.rho <= 0) add(v, "params.rho.nonpositive", "rho must be positive");
  if (!(q.walk_speed > 0)) add(v, "params.walk_speed.nonpositive", "walk speed must be positive");
  if (!(q.buffer_factor > 0)) add(v, "params.buffer.nonpositive", "buffer factor must be positive");
  return v;
}

}  // namespace

std::vector<Violation> validate(const Instance& inst) {
  std::vector<Violation> v = structural(inst);
  if (!v.empty()) return v;
  DriveTimes drive(inst.road);
  const int rho = inst.params.rho;
  for (const Line& l : inst.lines) {
    std::string w = "line " + sid(l.id);
    for (size_t i = 0; i + 1 < l.checkpoints.size(); ++i)
      if (!drive.reachable(l.checkpoints[i], l.checkpoints[i + 1]))
        add(v, "line.unreachable", w + " cannot drive from " + sid(l.checkpoints[i]) + " to " + sid(l.checkpoints[i + 1]));
    if (l.offsets.size() != l.checkpoints.size()) {
      add(v, "trip.schedule.missing", w + " has no schedule");
      continue;
    }
    bool ordered = l.offsets[0] == 0;
    for (size_t i = 1; i < l.offsets.size(); ++i) ordered = ordered && l.offsets[i] > l.offsets[i - 1];
    if (!ordered) add(v, "trip.schedule.order", w + " schedule is not strictly increasing from 0");
    bool grid = true;
    for (int o : l.offsets) grid = grid && o % rho == 0;
    for (int t : l.start_times) grid = grid && t % rho == 0 && t >= 0;
    if (!grid) add(v, "trip.schedule.grid", w + " schedule is not on the time grid");
    for (size_t i = 0; ordered && i + 1 < l.checkpoints.size(); ++i) {
      int a = l.checkpoints[i], b = l.checkpoints[i + 1];
      if (drive.reachable(a, b) && drive.grid(a, b, rho) > l.offsets[i + 1] - l.offsets[i])
        add(v, "trip.schedule.tight", w + " cannot drive from " + sid(a) + " to " + sid(b) + " within its schedule");
    }
  }
  int terminal = inst.terminal();
  for (const Request& r : inst.requests) {
    if (!drive.reachable(r.origin, terminal)) add(v, "request.unreachable", "request " + sid(r.id) + " cannot reach the terminal");
    if (!(r.direct_s > 0)) add(v, "request.direct.nonpositive", "request " + sid(r.id) + " has non-positive direct time");
  }
  return v;
}

void finalize_instance(Instance& inst) {
  auto v = structural(inst);
  if (!v.empty()) throw InstanceError(v.front().message, v);
  DriveTimes drive(inst.road);
  for (Line& l : inst.lines)
    if (l.offsets.empty()) l.offsets = build_schedule(l, 0, drive, inst.params.buffer_factor, inst.params.rho).times;
  int terminal = inst.terminal();
  for (Request& r : inst.requests)
    if (r.direct_s == 0) r.direct_s = drive.seconds(r.origin, terminal);
  v = validate(inst);
  if (!v.empty()) throw InstanceError(v.front().message, v);
}

// ---------------------------------------------------------------------------
// Schedules and scenarios

Trip build_schedule(const Line& line, int start, const DriveTimes& drive, double buffer_factor, int rho) {
  Trip t;
  t.line = line.id;
  t.start = start;
  t.times.push_back(start);
  for (size_t i = 0; i + 1 < line.checkpoints.size(); ++i) {
    int a = line.checkpoints[i], b = line.checkpoints[i + 1];
    if (!drive.reachable(a, b))
      throw InstanceError("unreachable checkpoint pair " + sid(a) + " -> " + sid(b));
    t.times.push_back(t.times.back() + ceil_to(buffer_factor * drive.seconds(a, b), rho));
  }
  return t;
}

std::vector<Trip> build_trips(const Instance& inst) {
  std::vector<Trip> trips;
  for (size_t l = 0; l < inst.lines.size(); ++l) {
    const Line& line = inst.lines[l];
    for (int s : line.start_times) {
      Trip t;
      t.line = static_cast<int>(l);
      t.start = s;
      for (int o : line.offsets) t.times.push_back(s + o);
      trips.push_back(std::move(t));
    }
  }
  return trips;
}

double trip_cost(const Instance& inst, const Trip& trip) {
  const Line& l = inst.lines[trip.line];
  if (l.trip_cost) return *l.trip_cost;
  return (trip.times.back() - trip.times.front()) / 60.0;
}

ScenarioSample sample_scenarios(const std::vector<double>& rates, int n_scenarios, std::uint64_t seed) {
  if (n_scenarios < 1) throw InstanceError("scenario count must be positive");
  for (double r : rates)
    if (!(r >= 0)) throw InstanceError("demand rates must be non-negative");
  ScenarioSample out;
  out.probabilities.assign(n_scenarios, 1.0 / n_scenarios);
  out.demand.assign(rates.size(), std::vector<int>(n_scenarios, 0));
  std::mt19937_64 rng(seed);
  for (int s = 0; s < n_scenarios; ++s)
    for (size_t p = 0; p < rates.size(); ++p) {
      if (rates[p] == 0) continue;
      std::poisson_distribution<int> pois(rates[p]);
      out.demand[p][s] = pois(rng);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic instances

namespace {
constexpr double kDriveSpeed = 600.0;  // meters per minute
constexpr std::uint64_t kScenarioStream = 0x9E3779B97F4A7C15ull;
}  // namespace

Instance generate_grid_instance(int rows, int cols, double spacing_m, int n_lines, int n_requests,
                                int n_scenarios, std::uint64_t seed) {
  if (rows < 2 || cols < 2) throw InstanceError("grid needs at least 2 rows and 2 columns");
  if (spacing_m <= 0) throw InstanceError("grid spacing must be positive");
  if (n_lines < 1 || n_requests < 0 || n_scenarios < 1) throw InstanceError("invalid generator counts");
  Instance inst;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      inst.road.stations.push_back({r * cols + c, c * spacing_m, r * spacing_m, true});
  auto link = [&](int a, int b) {
    double t = euclid(inst.road.stations[a], inst.road.stations[b]) / kDriveSpeed * 60.0;
    inst.road.edges.push_back({a, b, t});
    inst.road.edges.push_back({b, a, t});
  };
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) link(r * cols + c, r * cols + c + 1);
      if (r + 1 < rows) link(r * cols + c, (r + 1) * cols + c);
    }
  const int terminal = rows * cols - 1;
  Params& q = inst.params;
  q.fleet = n_lines;

  DriveTimes drive(inst.road);
  auto cands = bfs_candidate_lines(inst.road, terminal, 3);
  cands = quality_filter(cands, inst.road, {}, QualityThresholds{});
  std::vector<CandidateLine> chosen;
  std::vector<int> order(cands.size());
  for (size_t i = 0; i < cands.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cands[a].q < cands[b].q; });
  for (int i : order) {
    bool distinct = true;
    for (const auto& c : chosen) distinct = distinct && dissimilarity(c.checkpoints, cands[i].checkpoints) > 0;
    if (distinct) chosen.push_back(cands[i]);
    if (static_cast<int>(chosen.size()) == n_lines) break;
  }
  if (static_cast<int>(chosen.size()) < n_lines)
    throw InstanceError("n_lines exceeds generatable candidates (" + sid(static_cast<int>(chosen.size())) + " available)");
  for (int l = 0; l < n_lines; ++l) {
    Line line;
    line.id = l;
    line.checkpoints = chosen[l].checkpoints;
    line.capacity = 4;
    line.start_times = {0, 900};
    line.offsets = build_schedule(line, 0, drive, q.buffer_factor, q.rho).times;
    inst.lines.push_back(std::move(line));
  }
  auto trips = build_trips(inst);

  // Demand density decays with distance from the station farthest from the terminal.
  const Station& hot = inst.road.stations[0];
  double scale = spacing_m * std::max(rows, cols) / 2.0;
  std::vector<double> weight(inst.road.stations.size());
  for (size_t i = 0; i < weight.size(); ++i)
    weight[i] = static_cast<int>(i) == terminal ? 0.0 : std::exp(-euclid(inst.road.stations[i], hot) / scale);

  std::mt19937_64 rng(seed);
  std::discrete_distribution<int> pick_station(weight.begin(), weight.end());
  std::uniform_int_distribution<int> pick_trip(0, static_cast<int>(trips.size()) - 1);
  int slack = static_cast<int>(q.tolerance_s) / q.rho;
  std::uniform_int_distribution<int> pick_offset(-slack, slack);
  std::uniform_real_distribution<double> pick_rate(0.2, 1.5);
  std::vector<Request> reqs;
  std::vector<double> rates;
  for (int p = 0; p < n_requests; ++p) {
    Request r;
    r.origin = pick_station(rng);
    const Trip& t = trips[pick_trip(rng)];
    r.t_req = t.end_time() + pick_offset(rng) * q.rho;
    rates.push_back(pick_rate(rng));
    r.direct_s = drive.seconds(r.origin, terminal);
    reqs.push_back(r);
  }
  ScenarioSample sample = sample_scenarios(rates, n_scenarios, seed ^ kScenarioStream);
  inst.probabilities = sample.probabilities;
  for (size_t p = 0; p < reqs.size(); ++p) {
    reqs[p].demand = sample.demand[p];
    if (std::none_of(reqs[p].demand.begin(), reqs[p].demand.end(), [](int d) { return d > 0; })) continue;
    reqs[p].id = static_cast<int>(inst.requests.size());
    inst.requests.push_back(reqs[p]);
  }
  finalize_instance(inst);
  return inst;
}

Instance tri1_instance() {
  Instance inst;
  inst.road.stations = {{0, 0, 0, true}, {1, 2000, 0, true}, {2, 4000, 0, true},
                        {3, 1000, 800, true}, {4, 3000, 800, true}};
  auto link = [&](int a, int b) {
    double t = euclid(inst.road.stations[a], inst.road.stations[b]) / kDriveSpeed * 60.0;
    inst.road.edges.push_back({a, b, t});
    inst.road.edges.push_back({b, a, t});
  };
  link(0, 1);
  link(1, 2);
  link(0, 3);
  link(3, 1);
  link(1, 4);
  link(4, 2);
  Line line;
  line.id = 0;
  line.checkpoints = {0, 1, 2};
  line.capacity = 2;
  line.start_times = {0};
  line.offsets = {0, 300, 600};
  inst.lines.push_back(line);
  for (int p = 0; p < 3; ++p) {
    Request r;
    r.id = p;
    r.origin = std::array<int, 3>{3, 4, 1}[p];
    r.t_req = 600;
    r.demand = {1};
    inst.requests.push_back(r);
  }
  inst.probabilities = {1.0};
  Params& q = inst.params;
  q.deviation_m = 1000;
  q.max_walk_s = 600;
  q.max_wait_s = 600;
  q.tolerance_s = 300;
  q.skip = 0;
  q.kappa = 1;
  q.fleet = 1;
  finalize_instance(inst);
  return inst;
}

std::string fingerprint(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mind
