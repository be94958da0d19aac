// Decomposition: a master over (x, z, θ) with Benders cuts from the
// restricted second-stage LPs (column generation over subpaths), and the
// integer L-shaped extension that closes the integrality gap.
#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mind/formulations.hpp"
#include "mind/labels.hpp"

namespace mind {

struct ColgenResult {
  double value = 0;  // φ̄ at the given (x, z)
  BlockDuals duals;
  int rounds = 0;
  int added = 0;
};

// Restricted second-stage LP of one block, kept across master iterations.
class BlockSolver {
 public:
  BlockSolver(const Problem& pb, int block);
  ~BlockSolver();
  BlockSolver(BlockSolver&&) noexcept;

  ColgenResult solve(int x, const std::vector<int>& z, PricingMode mode, bool heuristic_first,
                     double rc_eps, LabelStats* stats);
  // Integer second stage over the columns generated so far.
  double restore(int x, const std::vector<int>& z, std::vector<Subpath>* routes) const;
  // Exact integer second stage over the full subpath set.
  double exact(int x, const std::vector<int>& z, std::vector<Subpath>* routes);

  int num_columns() const;
  const LoadNetwork& shape() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct DDOptions {
  PricingMode pricing = PricingMode::Exact;
  bool heuristic_first = true;  // try the heuristic before exact pricing
  bool ils = false;
  int max_iter = 1000;
  double time_limit = kInf;
  double cut_eps = 1e-6;  // relative violation needed to add a cut
  double rc_eps = 1e-7;
  int threads = 1;
  bool deterministic = false;
};

struct IterationRecord {
  int iter = 0;
  std::string phase;  // "benders" or "ils"
  double lower = 0, upper = 0;
  int cuts = 0, columns = 0;
  double seconds = 0;
};

struct DDResult {
  Solution solution;            // integer solution (restored or exact)
  double lower_bound = -kInf;   // master bound
  double relaxed_value = kInf;  // Σ h x + Σ π φ̄ at the final master point
  double integer_value = kInf;
  std::vector<IterationRecord> iterations;
  int benders_cuts = 0, ils_cuts = 0, columns = 0;
  std::int64_t labels = 0, pricing_runs = 0;
  bool converged = false;
  bool certified = false;  // exact pricing closed every column generation
  SolveStatus status = SolveStatus::Error;
  double seconds = 0;
};

DDResult solve_dd(const Problem& pb, const DDOptions& opts);

// Iteration log as CSV (header included).
std::string iterations_csv(const DDResult& r);

}  // namespace mind
