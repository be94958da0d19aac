// Problem data model, instance files, synthetic instances and scenarios.
//
// Units: times in seconds, distances in meters, walking speed in meters per
// minute. Cost terms are evaluated in minutes (see network.hpp).
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mind {

struct Station {
  int id = 0;
  double x = 0, y = 0;
  bool road = true;
};

struct Edge {
  int from = 0, to = 0;
  double travel_s = 0;
};

struct RoadNetwork {
  std::vector<Station> stations;
  std::vector<Edge> edges;
};

struct Line {
  int id = 0;
  std::vector<int> checkpoints;
  int capacity = 1;
  std::optional<double> trip_cost;  // default: scheduled duration in minutes
  std::vector<int> start_times;
  std::vector<int> offsets;  // scheduled time of each checkpoint after departure
};

struct Trip {
  int line = 0;
  int start = 0;
  std::vector<int> times;  // T(checkpoint i)
  int end_time() const { return times.back(); }
};

struct Request {
  int id = 0;
  int origin = 0;
  int t_req = 0;
  double direct_s = 0;      // shortest drive time from origin to the terminal
  std::vector<int> demand;  // per scenario
};

struct Params {
  double deviation_m = 600;  // Δ
  double max_walk_s = 157.5; // Ω as a walking time (210 m at 80 m/min)
  double max_wait_s = 600;   // Ψ
  double tolerance_s = 300;  // α
  int skip = 0;              // K
  double kappa = 1;          // κ
  int fleet = 1;             // F
  double reward = 10000;     // M
  double lambda = 1, mu = 1, sigma = 1, delta = 1;
  double walk_speed = 80;  // meters per minute
  int rho = 30;            // time grid of the time-expanded networks
  double buffer_factor = 1.2;
};

struct Instance {
  RoadNetwork road;
  std::vector<Line> lines;
  std::vector<Request> requests;
  std::vector<double> probabilities;
  Params params;

  int num_scenarios() const { return static_cast<int>(probabilities.size()); }
  int terminal() const { return lines.empty() ? -1 : lines.front().checkpoints.back(); }
};

struct Violation {
  std::string code;
  std::string message;
};

class InstanceError : public std::runtime_error {
 public:
  InstanceError(const std::string& what, std::vector<Violation> v = {})
      : std::runtime_error(what), violations(std::move(v)) {}
  std::vector<Violation> violations;
};

// All-pairs shortest drive times and the matching path lengths.
class DriveTimes {
 public:
  DriveTimes() = default;
  explicit DriveTimes(const RoadNetwork& road);
  double seconds(int i, int j) const { return time_[i * n_ + j]; }
  double meters(int i, int j) const { return dist_[i * n_ + j]; }
  bool reachable(int i, int j) const;
  // Drive time rounded up to a multiple of rho.
  int grid(int i, int j, int rho) const;
  int size() const { return n_; }
  static double kUnreachable();

 private:
  int n_ = 0;
  std::vector<double> time_, dist_;
};

double euclid(const Station& a, const Station& b);
// Walking time in seconds between two points.
double walk_seconds(const Station& a, const Station& b, double walk_speed);
int ceil_to(double t, int rho);
int floor_to(double t, int rho);

Instance load_instance(const std::string& path);
Instance parse_instance(const std::string& json_text);
void save_instance(const Instance& inst, const std::string& path);
std::string dump_instance(const Instance& inst);

// Fills derived fields (offsets, direct times) and throws on violations.
void finalize_instance(Instance& inst);
std::vector<Violation> validate(const Instance& inst);

std::vector<Trip> build_trips(const Instance& inst);
Trip build_schedule(const Line& line, int start, const DriveTimes& drive, double buffer_factor,
                    int rho);
double trip_cost(const Instance& inst, const Trip& trip);

struct ScenarioSample {
  std::vector<double> probabilities;
  std::vector<std::vector<int>> demand;  // [request][scenario]
};
ScenarioSample sample_scenarios(const std::vector<double>& rates, int n_scenarios,
                                std::uint64_t seed);

Instance generate_grid_instance(int rows, int cols, double spacing_m, int n_lines, int n_requests,
                                int n_scenarios, std::uint64_t seed);
Instance tri1_instance();

std::string fingerprint(const std::string& text);

}  // namespace mind
