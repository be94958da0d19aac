// Candidate line generation, quality metrics and medoid selection.
#pragma once

#include <vector>

#include "mind/instance.hpp"

namespace mind {

struct CandidateLine {
  int id = 0;
  std::vector<int> checkpoints;  // ends at the terminal
  double max_detour = 0;         // ratios, 1.0 = direct
  double mean_detour = 0;
  double wrong_way = 0;  // share of steps that move away from the terminal
  double popularity = 0;
  double q = 0;  // quality penalty, lower is better
};

enum class QualityMode { Direct, Popular, Cluster };

struct QualityThresholds {
  double max_mean_detour = 2.0;
  double max_max_detour = 2.5;
  double max_wrong_way = 0.25;
  double min_popularity = 0.0;
  double walk_radius_s = 157.5;  // Ω for popularity
  double walk_speed = 80;
  QualityMode mode = QualityMode::Direct;
};

// One candidate per BFS leaf, per root. Paths through the terminal are cut
// there; other paths get the terminal appended. Roots default to every
// station except the terminal.
std::vector<CandidateLine> bfs_candidate_lines(const RoadNetwork& road, int terminal, int min_stops,
                                               const std::vector<int>& roots = {});

// Fills the metric fields and q of one line.
void score_line(CandidateLine& line, const RoadNetwork& road, const DriveTimes& drive,
                const std::vector<int>& request_origins, const QualityThresholds& th);

// Scores every candidate and keeps the ones inside the thresholds.
std::vector<CandidateLine> quality_filter(std::vector<CandidateLine> candidates, const RoadNetwork& road,
                                          const std::vector<int>& request_origins,
                                          const QualityThresholds& th);

// 1 - |a ∩ b| / min(|a|, |b|)
double dissimilarity(const std::vector<int>& a, const std::vector<int>& b);

// Indices to drop so that no two survivors have dissimilarity 0.
std::vector<int> duplicate_cover(const std::vector<CandidateLine>& candidates);

struct LineSelection {
  std::vector<int> selected;  // indices into the candidate list, ascending
  std::vector<int> medoid;    // medoid assigned to each candidate
  double objective = 0;
  bool exact = true;  // false when the greedy fallback was used
};

// Medoid selection: min Σ q_ℓ y_ℓ + λ Σ dissim_kℓ x_kℓ with exactly `budget` medoids.
LineSelection select_lines(const std::vector<CandidateLine>& candidates, int budget, double lambda);

}  // namespace mind
