#include "mind/linegen.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>

#include "mind/solver.hpp"

namespace mind {

std::vector<CandidateLine> bfs_candidate_lines(const RoadNetwork& road, int terminal, int min_stops,
                                               const std::vector<int>& roots) {
  const int n = static_cast<int>(road.stations.size());
  if (terminal < 0 || terminal >= n) throw InstanceError("terminal is not a station");
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : road.edges) adj[e.from].push_back(e.to);
  for (auto& a : adj) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
  }
  DriveTimes drive(road);
  std::vector<int> rs = roots;
  if (rs.empty())
    for (int i = 0; i < n; ++i)
      if (i != terminal) rs.push_back(i);

  std::vector<CandidateLine> out;
  for (int root : rs) {
    if (root == terminal) continue;
    if (!drive.reachable(root, terminal))
      throw InstanceError("road network is disconnected: station " + std::to_string(root) +
                          " cannot reach the terminal");
    std::vector<int> parent(n, -2);
    std::vector<int> children(n, 0);
    std::vector<int> order;
    std::queue<int> bfs;
    parent[root] = -1;
    bfs.push(root);
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop();
      order.push_back(u);
      for (int v : adj[u])
        if (parent[v] == -2) {
          parent[v] = u;
          ++children[u];
          bfs.push(v);
        }
    }
    for (int leaf : order) {
      if (children[leaf] > 0 || leaf == root) continue;
      std::vector<int> path;
      for (int v = leaf; v != -1; v = parent[v]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      auto it = std::find(path.begin(), path.end(), terminal);
      if (it != path.end()) {
        path.erase(it + 1, path.end());
      } else {
        if (!drive.reachable(leaf, terminal))
          throw InstanceError("road network is disconnected: station " + std::to_string(leaf) +
                              " cannot reach the terminal");
        path.push_back(terminal);
      }
      if (static_cast<int>(path.size()) < min_stops) continue;
      CandidateLine c;
      c.id = static_cast<int>(out.size());
      c.checkpoints = std::move(path);
      out.push_back(std::move(c));
    }
  }
  return out;
}

void score_line(CandidateLine& line, const RoadNetwork& road, const DriveTimes& drive,
                const std::vector<int>& request_origins, const QualityThresholds& th) {
  const auto& cp = line.checkpoints;
  const int n = static_cast<int>(cp.size());
  const int term = cp.back();
  double along = 0, sum = 0, worst = 0;
  for (int i = n - 2; i >= 0; --i) {
    along += drive.seconds(cp[i], cp[i + 1]);
    double direct = drive.seconds(cp[i], term);
    double r = direct > 0 ? along / direct : 1.0;
    sum += r;
    worst = std::max(worst, r);
  }
  line.max_detour = n > 1 ? worst : 1.0;
  line.mean_detour = n > 1 ? sum / (n - 1) : 1.0;
  int away = 0;
  for (int i = 1; i < n; ++i)
    if (drive.seconds(cp[i], term) > drive.seconds(cp[i - 1], term) + 1e-9) ++away;
  line.wrong_way = n > 1 ? static_cast<double>(away) / (n - 1) : 0.0;
  double near = 0;
  for (int c : cp)
    for (int o : request_origins)
      if (walk_seconds(road.stations[o], road.stations[c], th.walk_speed) <= th.walk_radius_s + 1e-9) near += 1;
  line.popularity = near / n;
  switch (th.mode) {
    case QualityMode::Direct: line.q = (line.max_detour + line.mean_detour + line.wrong_way) / 3.0; break;
    case QualityMode::Popular: line.q = -line.popularity; break;
    case QualityMode::Cluster: line.q = 0; break;
  }
}

std::vector<CandidateLine> quality_filter(std::vector<CandidateLine> candidates, const RoadNetwork& road,
                                          const std::vector<int>& request_origins,
                                          const QualityThresholds& th) {
  DriveTimes drive(road);
  std::vector<CandidateLine> kept;
  for (auto& c : candidates) {
    score_line(c, road, drive, request_origins, th);
    if (c.mean_detour > th.max_mean_detour + 1e-9 || c.max_detour > th.max_max_detour + 1e-9) continue;
    if (c.wrong_way > th.max_wrong_way + 1e-9) continue;
    if (c.popularity < th.min_popularity - 1e-9) continue;
    kept.push_back(std::move(c));
  }
  return kept;
}

double dissimilarity(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.empty() || b.empty()) return 1.0;
  std::set<int> sa(a.begin(), a.end());
  int common = 0;
  for (int v : std::set<int>(b.begin(), b.end())) common += sa.count(v);
  return 1.0 - static_cast<double>(common) / std::min(a.size(), b.size());
}

std::vector<int> duplicate_cover(const std::vector<CandidateLine>& c) {
  const int n = static_cast<int>(c.size());
  std::vector<std::set<int>> adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (dissimilarity(c[i].checkpoints, c[j].checkpoints) <= 1e-12) {
        adj[i].insert(j);
        adj[j].insert(i);
      }
  std::vector<int> cover;
  while (true) {
    int best = -1;
    for (int i = 0; i < n; ++i)
      if (!adj[i].empty() && (best < 0 || adj[i].size() >= adj[best].size())) best = i;
    if (best < 0) break;
    cover.push_back(best);
    for (int j : adj[best]) adj[j].erase(best);
    adj[best].clear();
  }
  std::sort(cover.begin(), cover.end());
  return cover;
}

namespace {

constexpr double kTieBreak = 1e-9;

double selection_objective(const std::vector<CandidateLine>& c, const std::vector<int>& keep,
                           const std::vector<int>& medoids, double lambda, std::vector<int>* assign) {
  double obj = 0;
  for (int m : medoids) obj += c[keep[m]].q;
  for (size_t k = 0; k < keep.size(); ++k) {
    double best = kInf;
    int arg = -1;
    for (int m : medoids) {
      double d = dissimilarity(c[keep[k]].checkpoints, c[keep[m]].checkpoints);
      if (d < best - 1e-12) best = d, arg = m;
    }
    obj += lambda * best;
    if (assign) (*assign)[k] = arg;
  }
  return obj;
}

}  // namespace

LineSelection select_lines(const std::vector<CandidateLine>& c, int budget, double lambda) {
  if (budget < 1) throw InstanceError("line budget must be positive");
  std::vector<int> cover = duplicate_cover(c);
  std::vector<int> keep;
  for (int i = 0; i < static_cast<int>(c.size()); ++i)
    if (!std::binary_search(cover.begin(), cover.end(), i)) keep.push_back(i);
  const int n = static_cast<int>(keep.size());
  if (budget > n)
    throw InstanceError("line budget " + std::to_string(budget) + " exceeds the " + std::to_string(n) +
                        " distinct candidates");

  LineSelection out;
  out.medoid.assign(c.size(), -1);
  std::vector<int> medoids;  // positions in keep
  std::vector<int> assign(n, -1);
  if (backend_available()) {
    auto m = make_model();
    std::vector<int> y(n);
    std::vector<std::vector<int>> x(n, std::vector<int>(n));
    for (int l = 0; l < n; ++l) y[l] = m->add_var(0, 1, c[keep[l]].q + kTieBreak * keep[l], true);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        x[k][l] = m->add_var(0, 1, lambda * dissimilarity(c[keep[k]].checkpoints, c[keep[l]].checkpoints), false);
    for (int k = 0; k < n; ++k) {
      std::vector<double> ones(n, 1.0);
      m->add_row(x[k], ones, 1, 1);
      for (int l = 0; l < n; ++l) {
        int vars[2] = {x[k][l], y[l]};
        double vals[2] = {1, -1};
        m->add_row(vars, vals, -kInf, 0);
      }
    }
    m->add_row(y, std::vector<double>(n, 1.0), budget, budget);
    if (m->solve({}) != SolveStatus::Optimal) throw std::runtime_error("line selection MILP failed");
    for (int l = 0; l < n; ++l)
      if (m->value(y[l]) > 0.5) medoids.push_back(l);
  } else {
    out.exact = false;
    while (static_cast<int>(medoids.size()) < budget) {
      double best = kInf;
      int arg = -1;
      for (int l = 0; l < n; ++l) {
        if (std::find(medoids.begin(), medoids.end(), l) != medoids.end()) continue;
        auto trial = medoids;
        trial.push_back(l);
        double v = selection_objective(c, keep, trial, lambda, nullptr) + kTieBreak * keep[l];
        if (v < best - 1e-12) best = v, arg = l;
      }
      medoids.push_back(arg);
    }
    std::sort(medoids.begin(), medoids.end());
  }
  out.objective = selection_objective(c, keep, medoids, lambda, &assign);
  for (int l : medoids) out.selected.push_back(keep[l]);
  for (int k = 0; k < n; ++k) out.medoid[keep[k]] = keep[assign[k]];
  return out;
}

}  // namespace mind
