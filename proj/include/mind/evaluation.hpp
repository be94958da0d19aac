// Scoring of solutions, the value of the stochastic solution, fixed-route
// transit and ride-sharing baselines.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mind/dd.hpp"
#include "mind/formulations.hpp"

namespace mind {

struct SolveConfig {
  PricingMode pricing = PricingMode::Exact;
  bool heuristic_first = true;
  double time_limit = kInf;
  int max_iter = 1000;
  int threads = 1;
  bool deterministic = false;
};

struct SolveReport {
  Solution solution;
  double lower_bound = -kInf;
  double seconds = 0;
  ModelSize size;
  DDResult dd;  // filled for decomposition methods
};

// Solves with any method and fills routes for formulations that do not
// produce them directly.
SolveReport solve_method(const Problem& pb, Method method, const SolveConfig& cfg = {});

// Expected service figures of a solution with routes.
struct Metrics {
  double objective = 0;  // recomputed from routes
  double demand = 0;     // expected requested seats
  double served = 0;     // expected served seats
  double coverage = 0;   // served / demand
  double walk_min = 0, wait_min = 0, late_min = 0, early_min = 0;  // per served seat
  double detour = 0;         // in-vehicle time / direct time, per served seat
  double distance_km = 0;    // expected vehicle distance
  double km_per_passenger = 0;
  double utilization = 0;  // served seats / offered seats on operated trips
  int trips = 0;
};

Metrics score_solution(const Problem& pb, const Solution& sol);

struct StochasticValue {
  double rp = 0, eev = 0, ws = 0;
  double vss = 0, evpi = 0;
};

using Solver = std::function<Solution(const Problem&)>;

// Mean-demand instance (one scenario, demand rounded half up).
Instance mean_scenario(const Instance& inst);
// Single-scenario instance with probability 1.
Instance scenario_instance(const Instance& inst, int s);

StochasticValue stochastic_value(const Instance& inst, const Solver& solve);

// Ride-sharing baseline: each rider is picked up no earlier than its
// desired time t_req - direct time and at most Ψ later, then driven to the
// terminal. Groups share one vehicle; at most `fleet` groups.
struct RideshareOptions {
  int capacity = 2;
  int fleet = -1;  // unlimited when negative
  int exact_limit = 20000;  // candidate groups above this use the greedy matcher
};

struct RideGroup {
  std::vector<int> riders;     // in pickup order
  std::vector<double> pickup;  // pickup times
  double time_s = 0;           // first pickup to terminal
  double meters = 0;
};

struct RideshareResult {
  std::vector<RideGroup> groups;
  int riders = 0, served = 0;
  double coverage = 0, wait_min = 0, detour = 0, distance_km = 0;
  bool exact = true;
};

struct Rider {
  int request = 0;
  int origin = 0;
  double earliest = 0;  // desired pickup time
  double direct_s = 0;
};

std::vector<Rider> riders_of(const Instance& inst, int scenario);
RideshareResult rideshare(const Instance& inst, const std::vector<Rider>& riders, const RideshareOptions& opts);

// Best pickup order for a group, or nullopt when no order fits the windows.
std::optional<RideGroup> route_group(const Instance& inst, const DriveTimes& drive, const std::vector<Rider>& riders,
                                     const std::vector<int>& group);

}  // namespace mind
