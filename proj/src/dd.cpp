#include "mind/dd.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <thread>
#include <tuple>

namespace mind {

namespace {

using ColumnKey = std::tuple<int, int, std::vector<int>, int>;

double scaled(double eps, double v) { return eps * std::max(1.0, std::abs(v)); }

}  // namespace

struct BlockSolver::Impl {
  const Problem& pb;
  int block;
  LoadNetwork shape;
  std::unique_ptr<SolverModel> lp;
  std::vector<int> flow_row;
  std::map<int, int> link_row;
  std::vector<Column> cols;  // c1 and subpath; terminating arcs are not stored here
  std::map<ColumnKey, double> seen;
  std::optional<LoadNetwork> full;

  Impl(const Problem& p, int b) : pb(p), block(b) {
    const Block& bl = pb.blocks()[block];
    shape.block = block;
    shape.checkpoints = pb.num_checkpoints(bl.trip);
    shape.capacity = pb.capacity(bl.trip);
    lp = make_model();
    for (int n = 0; n < shape.num_nodes(); ++n) flow_row.push_back(lp->add_row({}, {}, 0, 0));
    for (int p : bl.active) link_row[p] = lp->add_row({}, {}, -kInf, 0);
    for (int c = 0; c <= shape.capacity; ++c) {
      int rows[2] = {flow_row[shape.node(shape.checkpoints - 1, c)], flow_row[shape.sink()]};
      double vals[2] = {1, -1};
      lp->add_col(0, kInf, 0, false, rows, vals);
    }
    for (const Subpath& s : zero_subpaths(pb, block))
      for (int c = 0; c <= shape.capacity; ++c) add({s, c, 0});
  }

  bool add(const Column& col) {
    const Subpath& s = col.subpath;
    ColumnKey key{s.a, s.b, s.passengers, col.c1};
    auto it = seen.find(key);
    if (it != seen.end() && it->second <= s.cost + 1e-9) return false;
    seen[key] = s.cost;
    std::vector<int> rows = {flow_row[shape.node(s.a, col.c1)], flow_row[shape.node(s.b, col.c1 + s.load)]};
    std::vector<double> vals = {1, -1};
    for (int p : s.passengers) {
      rows.push_back(link_row.at(p));
      vals.push_back(1);
    }
    lp->add_col(0, kInf, s.cost, false, rows, vals);
    cols.push_back(col);
    return true;
  }

  void set_rhs(int x, const std::vector<int>& z) {
    const Block& bl = pb.blocks()[block];
    lp->set_row_bounds(flow_row[shape.source()], x, x);
    lp->set_row_bounds(flow_row[shape.sink()], -x, -x);
    for (auto [p, r] : link_row) {
      auto it = std::lower_bound(bl.members.begin(), bl.members.end(), p);
      lp->set_row_bounds(r, -kInf, z[it - bl.members.begin()]);
    }
  }

  // Integer program over the given arcs with (x, z) fixed.
  double integer(const std::vector<Column>& arcs, int x, const std::vector<int>& z,
                 std::vector<Subpath>* routes) const {
    const Block& bl = pb.blocks()[block];
    auto m = make_model();
    std::vector<int> fr;
    for (int n = 0; n < shape.num_nodes(); ++n) {
      double rhs = n == shape.source() ? x : n == shape.sink() ? -x : 0;
      fr.push_back(m->add_row({}, {}, rhs, rhs));
    }
    std::map<int, int> lr;
    for (size_t k = 0; k < bl.members.size(); ++k)
      if (pb.demand(bl.members[k], bl.scenario) > 0) lr[bl.members[k]] = m->add_row({}, {}, -kInf, z[k]);
    for (int c = 0; c <= shape.capacity; ++c) {
      int rows[2] = {fr[shape.node(shape.checkpoints - 1, c)], fr[shape.sink()]};
      double vals[2] = {1, -1};
      m->add_col(0, 1, 0, true, rows, vals);
    }
    std::vector<int> vars;
    for (const Column& col : arcs) {
      const Subpath& s = col.subpath;
      std::vector<int> rows = {fr[shape.node(s.a, col.c1)], fr[shape.node(s.b, col.c1 + s.load)]};
      std::vector<double> vals = {1, -1};
      for (int p : s.passengers) {
        rows.push_back(lr.at(p));
        vals.push_back(1);
      }
      vars.push_back(m->add_col(0, 1, s.cost, true, rows, vals));
    }
    if (m->solve({}) != SolveStatus::Optimal) return kInf;
    if (routes) {
      routes->clear();
      for (size_t k = 0; k < vars.size(); ++k)
        if (m->value(vars[k]) > 0.5) routes->push_back(arcs[k].subpath);
      std::sort(routes->begin(), routes->end(), [](const Subpath& a, const Subpath& b) { return a.a < b.a; });
    }
    return m->objective();
  }
};

BlockSolver::BlockSolver(const Problem& pb, int block) : impl_(std::make_unique<Impl>(pb, block)) {}
BlockSolver::~BlockSolver() = default;
BlockSolver::BlockSolver(BlockSolver&&) noexcept = default;

int BlockSolver::num_columns() const { return static_cast<int>(impl_->cols.size()); }
const LoadNetwork& BlockSolver::shape() const { return impl_->shape; }

ColgenResult BlockSolver::solve(int x, const std::vector<int>& z, PricingMode mode, bool heuristic_first,
                                double rc_eps, LabelStats* stats) {
  Impl& d = *impl_;
  d.set_rhs(x, z);
  ColgenResult res;
  SolveOptions so;
  so.relax = true;
  while (true) {
    if (d.lp->solve(so) != SolveStatus::Optimal)
      throw std::runtime_error("restricted second-stage LP not optimal in block " + std::to_string(d.block));
    ++res.rounds;
    const auto& y = d.lp->duals();
    res.duals.psi.assign(d.shape.num_nodes(), 0.0);
    for (int n = 0; n < d.shape.num_nodes(); ++n) res.duals.psi[n] = y[d.flow_row[n]];
    res.duals.gamma.assign(d.pb.instance().requests.size(), 0.0);
    for (auto [p, r] : d.link_row) res.duals.gamma[p] = std::max(0.0, -y[r]);
    res.value = d.lp->objective();

    std::vector<Column> found;
    if (heuristic_first && mode == PricingMode::Exact)
      found = price_block(d.pb, d.block, res.duals, PricingMode::Heuristic, rc_eps, stats);
    if (found.empty()) found = price_block(d.pb, d.block, res.duals, mode, rc_eps, stats);
    int added = 0;
    for (const Column& c : found) added += d.add(c);
    res.added += added;
    if (added == 0) break;
  }
  return res;
}

double BlockSolver::restore(int x, const std::vector<int>& z, std::vector<Subpath>* routes) const {
  return impl_->integer(impl_->cols, x, z, routes);
}

double BlockSolver::exact(int x, const std::vector<int>& z, std::vector<Subpath>* routes) {
  Impl& d = *impl_;
  if (!d.full) d.full = build_load_network(d.pb, d.block, full_subpaths(d.pb, d.block), false);
  std::vector<Column> arcs;
  for (const LoadArc& e : d.full->arcs)
    if (e.sub >= 0) arcs.push_back({d.full->subpaths[e.sub], e.tail % (d.shape.capacity + 1), 0});
  return d.integer(arcs, x, z, routes);
}

// ---------------------------------------------------------------------------

namespace {

template <class F>
void for_blocks(int n, int threads, F&& f) {
  if (threads <= 1 || n <= 1) {
    for (int b = 0; b < n; ++b) f(b);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::mutex mu;
  for (int t = 0; t < std::min(threads, n); ++t)
    pool.emplace_back([&] {
      for (int b; (b = next++) < n;) {
        try {
          f(b);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

std::vector<double> rounded(const std::vector<double>& v) {
  std::vector<double> out;
  for (double a : v) out.push_back(std::round(a * 1e6) / 1e6);
  return out;
}

}  // namespace

DDResult solve_dd(const Problem& pb, const DDOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
  const int threads = opts.deterministic ? 1 : std::max(1, opts.threads);
  const auto& blocks = pb.blocks();
  const int nb = static_cast<int>(blocks.size());
  const auto& prob = pb.instance().probabilities;

  DDResult res;
  auto master = make_model();
  FirstStage fs = add_first_stage(pb, *master);
  std::vector<int> theta(nb);
  for (int b = 0; b < nb; ++b) theta[b] = master->add_var(pb.lower_bound(b), kInf, prob[blocks[b].scenario], false);

  std::vector<BlockSolver> solvers;
  for (int b = 0; b < nb; ++b) solvers.emplace_back(pb, b);
  std::set<std::vector<double>> cut_pool;
  bool benders_done = false;
  std::vector<int> bx;
  std::vector<std::vector<int>> bz;
  double incumbent = kInf;
  Solution best;

  for (int iter = 1;; ++iter) {
    if (iter > opts.max_iter || elapsed() > opts.time_limit) {
      res.status = SolveStatus::TimeLimit;
      break;
    }
    SolveOptions so;
    so.time_limit = std::max(1.0, opts.time_limit - elapsed());
    SolveStatus st = master->solve(so);
    if (st != SolveStatus::Optimal) {
      res.status = st;
      break;
    }
    const auto& val = master->values();
    std::vector<int> x;
    for (int v : fs.x) x.push_back(val[v] > 0.5);
    std::vector<std::vector<int>> z;
    for (const auto& zs : fs.z) {
      std::vector<int> row;
      for (int v : zs) row.push_back(val[v] > 0.5);
      z.push_back(std::move(row));
    }
    std::vector<double> th(nb);
    for (int b = 0; b < nb; ++b) th[b] = val[theta[b]];
    const double lower = master->objective();
    double first = 0;
    for (size_t j = 0; j < x.size(); ++j) first += pb.trip_cost(static_cast<int>(j)) * x[j];

    std::vector<ColgenResult> cg(nb);
    std::vector<LabelStats> stats(nb);
    for_blocks(nb, threads, [&](int b) {
      cg[b] = solvers[b].solve(x[blocks[b].trip], z[b], opts.pricing, opts.heuristic_first, opts.rc_eps, &stats[b]);
    });
    double relaxed = first;
    int cuts = 0;
    for (int b = 0; b < nb; ++b) {
      res.labels += stats[b].labels;
      res.pricing_runs += stats[b].runs;
      relaxed += prob[blocks[b].scenario] * cg[b].value;
      if (th[b] >= cg[b].value - scaled(opts.cut_eps, cg[b].value)) continue;
      const auto& d = cg[b].duals;
      const LoadNetwork& sh = solvers[b].shape();
      std::vector<int> vars = {theta[b], fs.x[blocks[b].trip]};
      std::vector<double> coef = {1.0, -(d.psi[sh.source()] - d.psi[sh.sink()])};
      for (size_t k = 0; k < blocks[b].members.size(); ++k) {
        double g = d.gamma[blocks[b].members[k]];
        if (g != 0) {
          vars.push_back(fs.z[b][k]);
          coef.push_back(g);
        }
      }
      std::vector<double> sig = rounded(coef);
      sig.insert(sig.begin(), b);
      if (!cut_pool.insert(sig).second) continue;
      master->add_row(vars, coef, 0, kInf);
      ++cuts;
    }
    res.benders_cuts += cuts;
    int columns = 0;
    for (const auto& s : solvers) columns += s.num_columns();
    res.columns = columns;
    res.iterations.push_back({iter, "benders", lower, relaxed, cuts, columns, opts.deterministic ? 0.0 : elapsed()});
    bx = x;
    bz = z;
    res.relaxed_value = relaxed;
    res.lower_bound = lower;
    if (cuts > 0) continue;

    if (!benders_done) benders_done = true;
    if (!opts.ils) {
      res.converged = true;
      res.status = SolveStatus::Optimal;
      break;
    }
    // Integer L-shaped step: exact recourse at the master point.
    Solution cur;
    cur.x = x;
    cur.z = z;
    cur.routes.assign(nb, {});
    std::vector<double> phi(nb);
    for_blocks(nb, threads, [&](int b) { phi[b] = solvers[b].exact(x[blocks[b].trip], z[b], &cur.routes[b]); });
    double value = first;
    for (int b = 0; b < nb; ++b) value += prob[blocks[b].scenario] * phi[b];
    if (value < incumbent) {
      incumbent = value;
      cur.objective = value;
      best = cur;
    }
    int ils = 0;
    for (int b = 0; b < nb; ++b) {
      if (phi[b] <= th[b] + scaled(opts.cut_eps, phi[b])) continue;
      const double low = pb.lower_bound(b);
      const double A = phi[b] - low;
      std::vector<int> vars = {theta[b]};
      std::vector<double> coef = {1.0};
      int ones = 0;
      auto term = [&](int var, int at) {
        vars.push_back(var);
        coef.push_back(at ? -A : A);
        ones += at;
      };
      term(fs.x[blocks[b].trip], x[blocks[b].trip]);
      for (size_t k = 0; k < fs.z[b].size(); ++k) term(fs.z[b][k], z[b][k]);
      master->add_row(vars, coef, phi[b] - A * ones, kInf);
      ++ils;
    }
    res.ils_cuts += ils;
    res.iterations.push_back({iter, "ils", lower, incumbent, ils, columns, opts.deterministic ? 0.0 : elapsed()});
    if (ils == 0 || lower >= incumbent - scaled(opts.cut_eps, incumbent)) {
      res.converged = true;
      res.status = SolveStatus::Optimal;
      res.lower_bound = std::min(lower, incumbent);
      break;
    }
  }

  if (opts.ils && std::isfinite(incumbent)) {
    res.solution = best;
    res.integer_value = incumbent;
  } else if (!bx.empty()) {
    Solution sol;
    sol.x = bx;
    sol.z = bz;
    sol.routes.assign(nb, {});
    double value = 0;
    for (size_t j = 0; j < bx.size(); ++j) value += pb.trip_cost(static_cast<int>(j)) * bx[j];
    for (int b = 0; b < nb; ++b) value += prob[blocks[b].scenario] * solvers[b].restore(bx[blocks[b].trip], bz[b], &sol.routes[b]);
    sol.objective = value;
    res.solution = sol;
    res.integer_value = value;
  }
  res.certified = res.converged && opts.pricing != PricingMode::Heuristic;
  res.solution.bound = res.lower_bound;
  res.solution.status = res.status;
  res.seconds = elapsed();
  return res;
}

std::string iterations_csv(const DDResult& r) {
  std::string out = "iter,phase,lower,upper,cuts,columns,seconds\n";
  char buf[256];
  for (const auto& it : r.iterations) {
    std::snprintf(buf, sizeof buf, "%d,%s,%.10g,%.10g,%d,%d,%.3f\n", it.iter, it.phase.c_str(), it.lower, it.upper,
                  it.cuts, it.columns, it.seconds);
    out += buf;
  }
  return out;
}

}  // namespace mind
