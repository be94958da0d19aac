// mind: generate instances and lines, solve, compare.
//
// Exit codes: 0 ok, 2 usage, 3 data, 4 limit.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mind/evaluation.hpp"
#include "mind/linegen.hpp"

using nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0, kUsage = 2, kData = 3, kLimit = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mind::InstanceError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

ordered_json finite(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

// ----- gen -------------------------------------------------------------------

struct GenArgs {
  std::string preset;
  int rows = 0, cols = 0;
  double spacing = 600;
  int lines = 1, requests = 6, scenarios = 2;
  std::uint64_t seed = 1;
  std::string out = "instance.json";
};

int cmd_gen(const GenArgs& a) {
  mind::Instance inst;
  if (!a.preset.empty()) {
    if (a.preset != "tri1") throw UsageError("unknown preset '" + a.preset + "'");
    inst = mind::tri1_instance();
  } else {
    if (a.rows <= 0 || a.cols <= 0) throw UsageError("gen needs --rows and --cols (or --preset)");
    inst = mind::generate_grid_instance(a.rows, a.cols, a.spacing, a.lines, a.requests, a.scenarios, a.seed);
  }
  std::string text = mind::dump_instance(inst);
  write_file(a.out, text);
  ordered_json man = {{"command", "gen"},
                      {"preset", a.preset},
                      {"rows", a.rows},
                      {"cols", a.cols},
                      {"spacing", a.spacing},
                      {"lines", a.lines},
                      {"requests", a.requests},
                      {"scenarios", a.scenarios},
                      {"seed", a.seed},
                      {"out", a.out},
                      {"instance_hash", mind::fingerprint(text)}};
  write_file(a.out + ".manifest.json", man.dump(2) + "\n");
  return kOk;
}

// ----- lines -----------------------------------------------------------------

struct LinesArgs {
  std::string instance;
  int min_stops = 3;
  int budget = 1;
  double lambda = 1.0;
  std::string out;
};

int cmd_lines(const LinesArgs& a) {
  mind::Instance inst = mind::load_instance(a.instance);
  std::vector<int> origins;
  for (const auto& r : inst.requests) origins.push_back(r.origin);
  mind::QualityThresholds th;
  th.walk_radius_s = inst.params.max_walk_s;
  th.walk_speed = inst.params.walk_speed;
  auto cands = mind::bfs_candidate_lines(inst.road, inst.terminal(), a.min_stops);
  cands = mind::quality_filter(cands, inst.road, origins, th);
  auto sel = mind::select_lines(cands, a.budget, a.lambda);
  ordered_json j;
  j["candidates"] = cands.size();
  j["exact"] = sel.exact;
  j["objective"] = sel.objective;
  j["lines"] = ordered_json::array();
  const int cap = inst.lines.empty() ? 4 : inst.lines.front().capacity;
  for (size_t k = 0; k < sel.selected.size(); ++k) {
    const auto& c = cands[sel.selected[k]];
    j["lines"].push_back({{"id", static_cast<int>(k)},
                          {"checkpoints", c.checkpoints},
                          {"capacity", cap},
                          {"start_times", inst.lines.empty() ? std::vector<int>{0} : inst.lines.front().start_times},
                          {"quality", c.q}});
  }
  std::string text = j.dump(2) + "\n";
  if (a.out.empty()) std::cout << text;
  else write_file(a.out, text);
  return kOk;
}

// ----- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string instance;
  std::string method = "dd-ils";
  std::string pricing = "heuristic";
  double time_limit = mind::kInf;
  int max_iter = 200;
  int threads = 1;
  bool deterministic = false;
  std::string out = "out";
  std::uint64_t seed = 0;
  int scenario = 0;
  int fleet = -1;
  int segment_rho = 0;
};

ordered_json subpath_json(const mind::Subpath& s) {
  ordered_json pk = ordered_json::array();
  for (const auto& e : s.pickups) pk.push_back({{"passenger", e.passenger}, {"station", e.station}, {"time", e.time}});
  ordered_json route = ordered_json::array();
  for (auto [st, t] : s.route) route.push_back({st, t});
  return {{"from", s.a}, {"to", s.b}, {"cost", s.cost}, {"pickups", pk}, {"route", route}};
}

ordered_json metrics_json(const mind::Metrics& m) {
  ordered_json j = {{"objective", m.objective}, {"demand", m.demand}, {"served", m.served},
                    {"coverage", m.coverage},   {"trips", m.trips},   {"distance_km", m.distance_km},
                    {"utilization", m.utilization}};
  if (m.served > 0) {
    j["walk_min"] = m.walk_min;
    j["wait_min"] = m.wait_min;
    j["late_min"] = m.late_min;
    j["early_min"] = m.early_min;
    j["detour_pct"] = 100 * m.detour;
    j["km_per_passenger"] = m.km_per_passenger;
  }
  return j;
}

std::string metrics_csv(const mind::Problem& pb, const mind::Solution& sol) {
  std::string out = "scenario,probability,coverage,served,demand,walk_min,wait_min,late_min,early_min,detour_pct,distance_km\n";
  auto row = [&](const std::string& name, double prob, const mind::Metrics& m) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", name.c_str(), prob,
                  m.coverage, m.served, m.demand, m.walk_min, m.wait_min, m.late_min, m.early_min, 100 * m.detour,
                  m.distance_km);
    out += buf;
  };
  const auto& inst = pb.instance();
  for (int s = 0; s < inst.num_scenarios(); ++s) {
    mind::Problem one(mind::scenario_instance(inst, s), {pb.transit()});
    mind::Solution part;
    part.x = sol.x;
    part.routes.assign(one.blocks().size(), {});
    for (size_t j = 0; j < pb.trips().size() && !sol.routes.empty(); ++j)
      part.routes[j] = sol.routes[pb.block_index(static_cast<int>(j), s)];
    row(std::to_string(s), inst.probabilities[s], mind::score_solution(one, part));
  }
  row("aggregate", 1.0, mind::score_solution(pb, sol));
  return out;
}

int solve_rideshare(const SolveArgs& a, const mind::Instance& inst, const std::string& hash, int capacity) {
  if (a.scenario < 0 || a.scenario >= inst.num_scenarios()) throw UsageError("--scenario out of range");
  mind::RideshareOptions o;
  o.capacity = capacity;
  o.fleet = a.fleet;
  auto riders = mind::riders_of(inst, a.scenario);
  auto r = mind::rideshare(inst, riders, o);
  ordered_json groups = ordered_json::array();
  for (const auto& g : r.groups) {
    ordered_json req = ordered_json::array();
    for (int k : g.riders) req.push_back(riders[k].request);
    groups.push_back({{"requests", req}, {"pickup_s", g.pickup}, {"time_s", g.time_s}, {"meters", g.meters}});
  }
  ordered_json j = {{"instance", a.instance},
                    {"instance_hash", hash},
                    {"method", a.method},
                    {"status", "optimal"},
                    {"exact", r.exact},
                    {"scenario", a.scenario},
                    {"objective", nullptr},
                    {"metrics",
                     {{"riders", r.riders},
                      {"served", r.served},
                      {"coverage", r.coverage},
                      {"wait_min", r.wait_min},
                      {"detour_pct", 100 * r.detour},
                      {"distance_km", r.distance_km}}},
                    {"groups", groups}};
  write_file(fs::path(a.out) / "result.json", j.dump(2) + "\n");
  return kOk;
}

int cmd_solve(const SolveArgs& a) {
  static const std::map<std::string, mind::Method> methods = {
      {"dd", mind::Method::DD},
      {"dd-ils", mind::Method::DDILS},
      {"extensive-subpath", mind::Method::Subpath},
      {"extensive-path", mind::Method::Path},
      {"extensive-segment", mind::Method::Segment},
      {"extensive-compact", mind::Method::Compact},
      {"transit", mind::Method::DDILS}};
  static const std::map<std::string, int> ride = {{"rideshare-1", 1}, {"rideshare-2", 2}, {"rideshare-4", 4}};
  mind::SolveConfig cfg;
  if (a.pricing == "heuristic") cfg.heuristic_first = true;
  else if (a.pricing == "exact") cfg.heuristic_first = false;
  else if (a.pricing == "heuristic-only") cfg.pricing = mind::PricingMode::Heuristic, cfg.heuristic_first = false;
  else if (a.pricing == "milp") cfg.pricing = mind::PricingMode::Milp, cfg.heuristic_first = false;
  else throw UsageError("unknown --pricing '" + a.pricing + "'");
  if (!methods.count(a.method) && !ride.count(a.method)) throw UsageError("unknown --method '" + a.method + "'");
  if (a.threads < 1) throw UsageError("--threads must be positive");
  cfg.time_limit = a.time_limit;
  cfg.max_iter = a.max_iter;
  cfg.threads = a.threads;
  cfg.deterministic = a.deterministic;

  const std::string text = read_file(a.instance);
  const std::string hash = mind::fingerprint(text);
  mind::Instance inst = mind::parse_instance(text);
  ordered_json man = {{"command", "solve"},   {"instance", a.instance},       {"instance_hash", hash},
                      {"method", a.method},   {"pricing", a.pricing},         {"time_limit", finite(a.time_limit)},
                      {"max_iter", a.max_iter}, {"threads", a.threads},       {"deterministic", a.deterministic},
                      {"seed", a.seed},       {"scenario", a.scenario},       {"fleet", a.fleet},
                      {"segment_rho", a.segment_rho}};
  write_file(fs::path(a.out) / "manifest.json", man.dump(2) + "\n");
  if (ride.count(a.method)) return solve_rideshare(a, inst, hash, ride.at(a.method));

  const mind::Method method = methods.at(a.method);
  mind::Problem pb(inst, {a.method == "transit"});
  mind::SolveReport rep;
  if (a.segment_rho > 0 && method == mind::Method::Segment) {
    mind::ExtensiveOptions o;
    o.segment_rho = a.segment_rho;
    o.time_limit = a.time_limit;
    auto r = mind::solve_extensive(pb, method, o);
    rep.solution = r.solution;
    rep.size = r.size;
    rep.seconds = r.seconds;
    rep.lower_bound = r.solution.bound;
    if (!r.solution.x.empty()) rep.solution.routes = mind::evaluate_first_stage(pb, r.solution.x, r.solution.z).routes;
  } else {
    rep = mind::solve_method(pb, method, cfg);
  }
  const mind::Solution& sol = rep.solution;
  const bool limited = sol.status == mind::SolveStatus::TimeLimit;
  const bool have = !sol.x.empty();

  ordered_json j;
  j["instance"] = a.instance;
  j["instance_hash"] = hash;
  j["method"] = a.method;
  j["pricing"] = a.pricing;
  j["status"] = mind::to_string(sol.status);
  const bool dd = method == mind::Method::DD || method == mind::Method::DDILS;
  j["certified"] = dd ? rep.dd.certified && !limited : sol.status == mind::SolveStatus::Optimal;
  j["objective"] = finite(sol.objective);
  j["lower_bound"] = finite(rep.lower_bound);
  j["upper_bound"] = finite(sol.objective);
  double gap = mind::kInf;
  if (std::isfinite(sol.objective) && std::isfinite(rep.lower_bound))
    gap = std::max(0.0, (sol.objective - rep.lower_bound) / std::max(1e-9, std::abs(sol.objective)));
  j["gap"] = finite(gap);
  j["wall_time_s"] = a.deterministic ? 0.0 : rep.seconds;
  if (have) {
    mind::Metrics m = mind::score_solution(pb, sol);
    j["recomputed_objective"] = m.objective;
    j["metrics"] = metrics_json(m);
    ordered_json trips = ordered_json::array();
    for (size_t t = 0; t < pb.trips().size(); ++t)
      trips.push_back({{"trip", t}, {"line", pb.instance().lines[pb.trips()[t].line].id},
                       {"start", pb.trips()[t].start}, {"selected", sol.x[t] == 1}});
    ordered_json blocks = ordered_json::array();
    for (size_t b = 0; b < pb.blocks().size(); ++b) {
      const auto& bl = pb.blocks()[b];
      if (!sol.x[bl.trip]) continue;
      ordered_json assigned = ordered_json::array();
      for (size_t k = 0; k < bl.members.size(); ++k)
        if (sol.z[b][k]) assigned.push_back(bl.members[k]);
      ordered_json subs = ordered_json::array();
      if (b < sol.routes.size())
        for (const auto& s : sol.routes[b]) subs.push_back(subpath_json(s));
      blocks.push_back({{"trip", bl.trip}, {"scenario", bl.scenario}, {"assigned", assigned}, {"subpaths", subs}});
    }
    j["solution"] = {{"trips", trips}, {"blocks", blocks}};
    write_file(fs::path(a.out) / "metrics.csv", metrics_csv(pb, sol));
  }
  if (dd) {
    const auto& d = rep.dd;
    j["dd"] = {{"relaxed_upper_bound", finite(d.relaxed_value)},
               {"integer_upper_bound", finite(d.integer_value)},
               {"iterations", d.iterations.size()},
               {"benders_cuts", d.benders_cuts},
               {"ils_cuts", d.ils_cuts},
               {"columns", d.columns},
               {"pricing_runs", d.pricing_runs},
               {"converged", d.converged}};
    write_file(fs::path(a.out) / "iterations.csv", mind::iterations_csv(d));
  } else {
    j["model"] = {{"vars", rep.size.vars}, {"rows", rep.size.rows}, {"integers", rep.size.integers}};
  }
  write_file(fs::path(a.out) / "result.json", j.dump(2) + "\n");
  if (limited) return kLimit;
  if (!have) {
    std::cerr << "solve failed: " << mind::to_string(sol.status) << "\n";
    return kData;
  }
  return kOk;
}

// ----- compare ---------------------------------------------------------------

struct CompareArgs {
  std::vector<std::string> files;
  std::string out;
  std::string plot;
};

int cmd_compare(const CompareArgs& a) {
  std::vector<ordered_json> docs;
  for (const auto& f : a.files) {
    try {
      docs.push_back(ordered_json::parse(read_file(f)));
    } catch (const ordered_json::parse_error& e) {
      throw mind::InstanceError(f + ": " + e.what());
    }
  }
  for (size_t k = 1; k < docs.size(); ++k)
    if (docs[k].value("instance_hash", "") != docs[0].value("instance_hash", ""))
      throw mind::InstanceError("instance mismatch: " + docs[0].value("instance_hash", "?") + " (" + a.files[0] + ") vs " +
                                docs[k].value("instance_hash", "?") + " (" + a.files[k] + ")");
  double best = mind::kInf;
  for (const auto& d : docs)
    if (d.contains("objective") && d["objective"].is_number()) best = std::min(best, d["objective"].get<double>());
  static const char* cols[] = {"coverage", "walk_min", "wait_min", "late_min", "early_min", "detour_pct", "distance_km"};
  std::string table = "file,method,objective,sol,gap,wall_time_s";
  for (const char* c : cols) table += std::string(",") + c;
  table += "\n";
  std::string plot = "method,metric,value\n";
  char buf[128];
  auto num = [&](const ordered_json& j, const char* key) -> std::string {
    if (!j.contains(key) || !j[key].is_number()) return "";
    std::snprintf(buf, sizeof buf, "%.10g", j[key].get<double>());
    return buf;
  };
  for (size_t k = 0; k < docs.size(); ++k) {
    const auto& d = docs[k];
    std::string method = d.value("method", "?");
    std::string sol;
    if (d.contains("objective") && d["objective"].is_number() && best != 0 && std::isfinite(best)) {
      std::snprintf(buf, sizeof buf, "%.10g", 100.0 * d["objective"].get<double>() / best);
      sol = buf;
    }
    table += a.files[k] + "," + method + "," + num(d, "objective") + "," + sol + "," + num(d, "gap") + "," +
             num(d, "wall_time_s");
    const ordered_json m = d.value("metrics", ordered_json::object());
    for (const char* c : cols) {
      std::string v = num(m, c);
      table += "," + v;
      if (!v.empty()) plot += method + "," + c + "," + v + "\n";
    }
    table += "\n";
    if (!sol.empty()) plot += method + ",sol," + sol + "\n";
  }
  if (a.out.empty()) std::cout << table;
  else write_file(a.out, table);
  if (!a.plot.empty()) write_file(a.plot, plot);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microtransit network design: instances, lines, solvers, comparisons"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate an instance");
  g->add_option("--preset", gen.preset, "named instance (tri1)");
  g->add_option("--rows", gen.rows, "grid rows");
  g->add_option("--cols", gen.cols, "grid columns");
  g->add_option("--spacing", gen.spacing, "grid spacing in meters");
  g->add_option("--lines", gen.lines, "number of lines");
  g->add_option("--requests", gen.requests, "number of requests");
  g->add_option("--scenarios", gen.scenarios, "number of demand scenarios");
  g->add_option("--seed", gen.seed, "random seed");
  g->add_option("--out", gen.out, "instance file");

  LinesArgs lines;
  auto* l = app.add_subcommand("lines", "generate candidate lines and pick medoids");
  l->add_option("--instance", lines.instance, "instance file")->required();
  l->add_option("--min-stops", lines.min_stops, "minimum checkpoints per line");
  l->add_option("--budget", lines.budget, "number of lines to select");
  l->add_option("--lambda", lines.lambda, "weight of the dissimilarity term");
  l->add_option("--out", lines.out, "output file (stdout when absent)");

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "solve an instance");
  s->add_option("--instance", solve.instance, "instance file")->required();
  s->add_option("--method", solve.method,
                "dd | dd-ils | extensive-{subpath,path,segment,compact} | transit | rideshare-{1,2,4}");
  s->add_option("--pricing", solve.pricing, "heuristic (then exact) | exact | heuristic-only | milp");
  s->add_option("--time-limit", solve.time_limit, "seconds");
  s->add_option("--max-iter", solve.max_iter, "outer iteration cap");
  s->add_option("--threads", solve.threads, "worker threads");
  s->add_flag("--deterministic", solve.deterministic, "single-thread reproducible mode");
  s->add_option("--out", solve.out, "output directory");
  s->add_option("--seed", solve.seed, "recorded in the manifest");
  s->add_option("--scenario", solve.scenario, "scenario for ride-sharing");
  s->add_option("--fleet", solve.fleet, "ride-sharing fleet cap");
  s->add_option("--segment-rho", solve.segment_rho, "time grid of the segment formulation");

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "compare result files");
  c->add_option("files", cmp.files, "result.json files")->required();
  c->add_option("--out", cmp.out, "CSV table (stdout when absent)");
  c->add_option("--plot", cmp.plot, "tidy CSV for plotting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  try {
    if (*g) return cmd_gen(gen);
    if (*l) return cmd_lines(lines);
    if (*s) return cmd_solve(solve);
    if (*c) return cmd_compare(cmp);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const mind::InstanceError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    for (const auto& v : e.violations) std::cerr << "  " << v.code << ": " << v.message << "\n";
    return kData;
  } catch (const mind::DiscretizationError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
