// Eligibility, pickup windows, cost coefficients and the networks built on
// top of them: the per-pair pricing network (time-expanded, stations x grid
// times) and the per-block load network (checkpoints x vehicle load).
//
// Cost terms: walk and wait in minutes, in-vehicle time and schedule
// deviation as ratios of the direct drive time. A served passenger also
// earns the reward -M.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mind/instance.hpp"

namespace mind {

// One station where a passenger may board a given trip.
struct PickupOption {
  int station = 0;
  int lo = 0, hi = 0;  // grid window
  double walk_s = 0;
};

struct CostTerms {
  double walk_min = 0, wait_min = 0;
  double travel = 0, late = 0, early = 0;  // ratios of the direct time
};

// A (trip, scenario) pair of the second stage.
struct Block {
  int trip = 0;
  int scenario = 0;
  std::vector<int> members;  // passengers whose trip set contains this trip
  std::vector<int> active;   // members with positive demand in this scenario
};

struct ProblemOptions {
  bool transit = false;  // only checkpoints may be visited
};

class Problem {
 public:
  explicit Problem(Instance inst, ProblemOptions opts = {});

  const Instance& instance() const { return inst_; }
  const Params& params() const { return inst_.params; }
  const DriveTimes& drive() const { return drive_; }
  const std::vector<Trip>& trips() const { return trips_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  int num_scenarios() const { return inst_.num_scenarios(); }
  int rho() const { return inst_.params.rho; }
  bool transit() const { return opts_.transit; }

  int block_index(int trip, int scenario) const { return trip * num_scenarios() + scenario; }
  const Line& line_of(int trip) const { return inst_.lines[trips_[trip].line]; }
  int capacity(int trip) const { return line_of(trip).capacity; }
  int num_checkpoints(int trip) const { return static_cast<int>(trips_[trip].times.size()); }
  int demand(int p, int s) const { return inst_.requests[p].demand[s]; }
  double trip_cost(int trip) const { return trip_costs_[trip]; }

  // Grid travel time between stations.
  int tt(int i, int j) const { return drive_.grid(i, j, rho()); }

  // Stations within Δ of segment k -> k+1 of a line.
  const std::vector<int>& segment_stations(int line, int k) const { return seg_[line][k]; }
  // Stations usable between checkpoint positions a < b.
  std::vector<int> pair_stations(int line, int a, int b) const;
  // Checkpoint pairs (a, b) with b - a <= K + 1.
  std::vector<std::pair<int, int>> pairs(int line) const;

  // Trips passenger p may ride (𝓜_p) and passengers compatible with a trip.
  const std::vector<int>& trips_of(int p) const { return trips_of_[p]; }
  const std::vector<int>& members_of(int trip) const { return members_[trip]; }

  // Planned departure t0 of p for a trip, and its boarding options.
  double planned_departure(int trip, int p) const;
  const std::vector<PickupOption>& pickups(int trip, int p) const;
  const PickupOption* pickup_at(int trip, int p, int station) const;

  CostTerms terms(int trip, int p, int station, int t) const;
  // Per-unit cost of boarding p at (station, t), reward included.
  double unit_cost(int trip, int p, int station, int t) const;
  double pickup_cost(int block, int p, int station, int t) const;

  // Φ̲ = -M Σ D over the block's members.
  double lower_bound(int block) const;

 private:
  Instance inst_;
  ProblemOptions opts_;
  DriveTimes drive_;
  std::vector<Trip> trips_;
  std::vector<double> trip_costs_;
  std::vector<std::vector<std::vector<int>>> seg_;  // [line][k]
  std::vector<std::vector<int>> trips_of_, members_;
  std::vector<std::vector<std::vector<PickupOption>>> pick_;  // [trip][p]
  std::vector<std::vector<double>> t0_;                       // [trip][p]
  std::vector<Block> blocks_;
};

struct PickupEvent {
  int passenger = 0, station = 0, time = 0;
  bool operator==(const PickupEvent&) const = default;
};

// Route between two checkpoints with the passengers it boards.
struct Subpath {
  int a = 0, b = 0;                        // checkpoint positions
  std::vector<int> passengers;             // sorted
  std::vector<PickupEvent> pickups;        // sorted by passenger
  std::vector<std::pair<int, int>> route;  // (station, time) stops, endpoints included
  int load = 0;
  double cost = 0;  // Σ pickup costs
};

// Time-expanded network of one checkpoint pair in one block. Node ids are
// sorted by (time, station), so id order is topological.
struct PricingNetwork {
  int block = 0, a = 0, b = 0;
  int source = 0, sink = 0;
  std::vector<int> station, time;
  std::vector<std::vector<int>> out;
  std::vector<int> cand_passenger;  // local candidate index -> passenger
  std::vector<int> cand_load;
  // Per node: (candidate, pickup cost) options.
  std::vector<std::vector<std::pair<int, double>>> cand;

  int num_nodes() const { return static_cast<int>(station.size()); }
  int num_arcs() const;
};

PricingNetwork build_pricing_network(const Problem& pb, int block, int a, int b);

// Exhaustive DFS over stop sequences and boarding subsets. Returns every
// minimal subpath (each intermediate stop boards someone). Test oracle.
std::vector<Subpath> enumerate_subpaths(const Problem& pb, int block, int a, int b);

// Keeps the cheapest subpath per served set.
std::vector<Subpath> cheapest_per_set(std::vector<Subpath> subpaths);

// Arcs of a load network; sub < 0 marks a terminating arc.
struct LoadArc {
  int sub = -1;
  int tail = 0, head = 0;
  double cost = 0;
};

struct LoadNetwork {
  int block = 0;
  int checkpoints = 0, capacity = 0;
  std::vector<Subpath> subpaths;
  std::vector<LoadArc> arcs;
  std::vector<char> alive;  // node survives pruning

  int node(int k, int c) const { return k * (capacity + 1) + c; }
  int source() const { return node(0, 0); }
  int sink() const { return checkpoints * (capacity + 1); }
  int num_nodes() const { return sink() + 1; }
};

// Places every subpath at each feasible start load and adds terminating
// arcs. With prune, nodes off every source-sink path are dropped.
LoadNetwork build_load_network(const Problem& pb, int block, std::vector<Subpath> subpaths, bool prune);

// Cheapest subpath per served set for every pair of the block.
std::vector<Subpath> full_subpaths(const Problem& pb, int block);

// Subpaths that board nobody: the direct drive between consecutive checkpoints.
std::vector<Subpath> zero_subpaths(const Problem& pb, int block);

std::string dump_pricing_network(const Problem& pb, const PricingNetwork& net);
std::string dump_load_network(const Problem& pb, const LoadNetwork& net);

}  // namespace mind
