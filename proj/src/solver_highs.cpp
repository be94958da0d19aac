#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "Highs.h"
#include "mind/solver.hpp"

namespace mind {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::Error: return "error";
  }
  return "error";
}

double SolverModel::gap() const {
  double ub = objective(), lb = bound();
  if (!std::isfinite(ub) || !std::isfinite(lb)) return kInf;
  double d = std::abs(ub - lb);
  if (d <= 1e-9) return 0.0;
  return d / std::max(std::abs(ub), 1e-9);
}

namespace {

class HighsModel final : public SolverModel {
 public:
  HighsModel() {
    h_.setOptionValue("output_flag", false);
    h_.setOptionValue("random_seed", 0);
    h_.setOptionValue("threads", 1);
  }

  int add_var(double lb, double ub, double cost, bool integer) override {
    return add_col(lb, ub, cost, integer, {}, {});
  }

  int add_col(double lb, double ub, double cost, bool integer,
              std::span<const int> rows, std::span<const double> vals) override {
    int idx = h_.getNumCol();
    check(h_.addCol(cost, lb, ub, static_cast<HighsInt>(rows.size()),
                    reinterpret_cast<const HighsInt*>(rows.data()), vals.data()));
    integer_.push_back(integer);
    if (integer) {
      ++n_int_;
      check(h_.changeColIntegrality(idx, HighsVarType::kInteger));
    }
    return idx;
  }

  void set_integer(int var, bool integer) override {
    if (integer_[var] == integer) return;
    integer_[var] = integer;
    n_int_ += integer ? 1 : -1;
    check(h_.changeColIntegrality(var, integer ? HighsVarType::kInteger : HighsVarType::kContinuous));
  }

  int add_row(std::span<const int> vars, std::span<const double> vals, double lo,
              double hi) override {
    int idx = h_.getNumRow();
    check(h_.addRow(lo, hi, static_cast<HighsInt>(vars.size()),
                    reinterpret_cast<const HighsInt*>(vars.data()), vals.data()));
    return idx;
  }

  void set_var_bounds(int var, double lb, double ub) override {
    check(h_.changeColBounds(var, lb, ub));
  }
  void set_row_bounds(int row, double lo, double hi) override {
    check(h_.changeRowBounds(row, lo, hi));
  }
  void set_cost(int var, double cost) override { check(h_.changeColCost(var, cost)); }
  void set_offset(double offset) override { check(h_.changeObjectiveOffset(offset)); }

  SolveStatus solve(const SolveOptions& o) override {
    h_.setOptionValue("time_limit", std::isfinite(o.time_limit) ? o.time_limit : kHighsInf);
    h_.setOptionValue("mip_rel_gap", o.mip_rel_gap);
    h_.setOptionValue("mip_abs_gap", o.mip_abs_gap);
    h_.setOptionValue("threads", o.threads);
    bool relaxed = o.relax && n_int_ > 0;
    if (relaxed) set_integrality(false);
    h_.run();
    status_ = translate();
    is_mip_ = !relaxed && n_int_ > 0;
    fetch();
    if (relaxed) set_integrality(true);
    return status_;
  }

  int num_vars() const override { return h_.getNumCol(); }
  int num_rows() const override { return h_.getNumRow(); }
  int num_integer() const override { return n_int_; }
  double objective() const override { return obj_; }
  double bound() const override { return bound_; }
  const std::vector<double>& values() const override { return x_; }
  const std::vector<double>& duals() const override { return y_; }

  void write(const std::string& path) const override {
    const_cast<Highs&>(h_).writeModel(path);
  }
  std::string backend() const override { return "highs"; }

 private:
  static void check(HighsStatus s) {
    if (s == HighsStatus::kError) throw std::runtime_error("HiGHS call failed");
  }

  void set_integrality(bool on) {
    for (int j = 0; j < static_cast<int>(integer_.size()); ++j)
      if (integer_[j])
        h_.changeColIntegrality(j, on ? HighsVarType::kInteger : HighsVarType::kContinuous);
  }

  SolveStatus translate() const {
    switch (h_.getModelStatus()) {
      case HighsModelStatus::kOptimal: return SolveStatus::Optimal;
      case HighsModelStatus::kInfeasible: return SolveStatus::Infeasible;
      case HighsModelStatus::kUnbounded:
      case HighsModelStatus::kUnboundedOrInfeasible: return SolveStatus::Unbounded;
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
      case HighsModelStatus::kInterrupt: return SolveStatus::TimeLimit;
      case HighsModelStatus::kModelEmpty: return SolveStatus::Optimal;
      default: return SolveStatus::Error;
    }
  }

  void fetch() {
    const HighsSolution& sol = h_.getSolution();
    const HighsInfo& info = h_.getInfo();
    x_.assign(sol.col_value.begin(), sol.col_value.end());
    y_.assign(sol.row_dual.begin(), sol.row_dual.end());
    x_.resize(h_.getNumCol(), 0.0);
    y_.resize(h_.getNumRow(), 0.0);
    bool have_primal = info.primal_solution_status == kSolutionStatusFeasible;
    obj_ = have_primal ? info.objective_function_value : kInf;
    if (h_.getModelStatus() == HighsModelStatus::kModelEmpty) obj_ = h_.getLp().offset_;
    bound_ = is_mip_ ? info.mip_dual_bound : obj_;
    if (is_mip_ && status_ == SolveStatus::Optimal && !std::isfinite(bound_)) bound_ = obj_;
  }

  Highs h_;
  std::vector<bool> integer_;
  int n_int_ = 0;
  bool is_mip_ = false;
  SolveStatus status_ = SolveStatus::Error;
  double obj_ = kInf, bound_ = -kInf;
  std::vector<double> x_, y_;
};

}  // namespace

std::string selected_backend() {
  const char* env = std::getenv("MIND_SOLVER_BACKEND");
  return env && *env ? std::string(env) : std::string("highs");
}

bool backend_available() { return selected_backend() == "highs"; }

std::unique_ptr<SolverModel> make_model() {
  std::string b = selected_backend();
  if (b == "highs") return std::make_unique<HighsModel>();
  throw std::runtime_error("solver backend '" + b + "' is not available");
}

}  // namespace mind
