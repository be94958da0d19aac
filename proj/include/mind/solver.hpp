// Backend-neutral LP/MIP model used by every formulation and by the
// decomposition engine. The backend is picked at runtime from the
// MIND_SOLVER_BACKEND environment variable ("highs" is the only engine
// compiled in; "none" disables MILP-dependent features).
#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mind {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SolveStatus { Optimal, Infeasible, Unbounded, TimeLimit, Error };

const char* to_string(SolveStatus s);

struct SolveOptions {
  bool relax = false;  // drop integrality for this solve
  double time_limit = kInf;
  double mip_rel_gap = 1e-10;
  double mip_abs_gap = 1e-7;
  int threads = 1;
};

class SolverModel {
 public:
  virtual ~SolverModel() = default;

  virtual int add_var(double lb, double ub, double cost, bool integer) = 0;
  virtual int add_col(double lb, double ub, double cost, bool integer,
                      std::span<const int> rows, std::span<const double> vals) = 0;
  virtual int add_row(std::span<const int> vars, std::span<const double> vals,
                      double lo, double hi) = 0;

  virtual void set_var_bounds(int var, double lb, double ub) = 0;
  virtual void set_row_bounds(int row, double lo, double hi) = 0;
  virtual void set_cost(int var, double cost) = 0;
  virtual void set_integer(int var, bool integer) = 0;
  virtual void set_offset(double offset) = 0;

  virtual SolveStatus solve(const SolveOptions& opts) = 0;

  virtual int num_vars() const = 0;
  virtual int num_rows() const = 0;
  virtual int num_integer() const = 0;
  virtual double objective() const = 0;
  // Best proven bound after a MIP solve; equals objective() for LPs.
  virtual double bound() const = 0;
  virtual const std::vector<double>& values() const = 0;
  // Row duals with the convention reduced_cost = c - A^T y.
  virtual const std::vector<double>& duals() const = 0;

  virtual void write(const std::string& path) const = 0;
  virtual std::string backend() const = 0;

  double value(int var) const { return values()[var]; }
  double gap() const;
};

std::string selected_backend();
bool backend_available();
std::unique_ptr<SolverModel> make_model();

}  // namespace mind
