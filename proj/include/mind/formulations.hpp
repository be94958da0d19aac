// Extensive formulations of the two-stage model: the shared first stage and
// four second-stage encodings (compact, segment, path, subpath).
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mind/network.hpp"
#include "mind/solver.hpp"

namespace mind {

enum class Method { Compact, Segment, Path, Subpath, DD, DDILS };

const char* to_string(Method m);
std::optional<Method> parse_method(const std::string& s);

// First-stage decisions and, when known, the routes behind them.
struct Solution {
  std::vector<int> x;                        // per trip
  std::vector<std::vector<int>> z;           // [block][member position]
  std::vector<std::vector<Subpath>> routes;  // [block], in checkpoint order
  double objective = kInf;
  double bound = -kInf;
  SolveStatus status = SolveStatus::Error;
};

struct FirstStage {
  std::vector<int> x;
  std::vector<std::vector<int>> z;  // [block][member position]
  int rows = 0;
};

// Adds x, z, the fleet, packing and load-balance rows. Costs h on x.
FirstStage add_first_stage(const Problem& pb, SolverModel& m);

// Number of first-stage rows: |∪ start times| + |𝒫||𝒮| + 2|𝒥||𝒮|
// (packing rows of passengers without trips are skipped).
int first_stage_row_count(const Problem& pb);

struct ModelSize {
  int vars = 0, rows = 0, integers = 0;
};

struct ExtensiveOptions {
  bool relax = false;
  bool relax_second = false;  // integral (x, z), continuous routing
  std::optional<std::vector<int>> fix_x;
  std::optional<std::vector<std::vector<int>>> fix_z;
  double time_limit = kInf;
  int segment_rho = 0;  // 0: instance grid
  std::int64_t path_cap = 1000000;
  std::string write_path;  // export the model before solving
};

struct ExtensiveResult {
  Solution solution;
  ModelSize size;
  double seconds = 0;
};

ExtensiveResult solve_extensive(const Problem& pb, Method method, const ExtensiveOptions& opts = {});

// Second-stage optimum per block for fixed (x, z), over the full subpath set.
// relax solves the LP.
double block_value(const Problem& pb, int block, int x, const std::vector<int>& z, bool relax,
                   std::vector<Subpath>* routes = nullptr);

// Σ h x + Σ π φ for a fixed first stage, with routes filled in.
Solution evaluate_first_stage(const Problem& pb, const std::vector<int>& x,
                              const std::vector<std::vector<int>>& z);

// Best first-stage z and routes for fixed x (used for EEV).
Solution solve_with_fixed_x(const Problem& pb, const std::vector<int>& x);

// Paths of a load network from source to sink, or nullopt past the cap.
std::optional<std::vector<std::vector<int>>> enumerate_paths(const LoadNetwork& net, std::int64_t cap);

// Thrown when the segment grid cannot represent some subpath.
struct DiscretizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mind
