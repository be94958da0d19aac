// Label setting over a pricing network and the pricing problem of the
// restricted second-stage LP.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mind/network.hpp"

namespace mind {

struct LabelStats {
  std::int64_t labels = 0;
  std::int64_t runs = 0;
};

struct PricedSet {
  Subpath subpath;
  double value = 0;  // Σ over boarded passengers of (pickup cost + γ_p)
};

// For each set reachable at the sink, the path minimizing Σ (cost + γ).
// gamma is indexed by local candidate. The heuristic boards every
// candidate with negative adjusted cost while capacity allows, in index
// order, instead of branching on subsets.
std::vector<PricedSet> label_sets(const PricingNetwork& net, std::span<const double> gamma,
                                  int capacity, bool heuristic, LabelStats* stats = nullptr,
                                  bool dominance = true);

// Duals of the restricted second-stage LP of one block, with reduced cost
// ĝ = g + ψ_head - ψ_tail + Σ γ_p (γ_p >= 0 for the linking rows).
struct BlockDuals {
  std::vector<double> psi;    // per load-network node
  std::vector<double> gamma;  // per passenger id, 0 when not linked
};

struct Column {
  Subpath subpath;
  int c1 = 0;  // start load
  double reduced = 0;
};

enum class PricingMode { Exact, Heuristic, Milp };

// Columns with reduced cost below -eps over every pair of the block.
std::vector<Column> price_block(const Problem& pb, int block, const BlockDuals& duals, PricingMode mode,
                                double eps, LabelStats* stats = nullptr);

// Z^{u,v,ν}: min Σ (cost + γ) over paths of the pricing network boarding
// load exactly ν, solved as a MILP. Empty when no such path exists.
std::optional<PricedSet> price_milp(const PricingNetwork& net, std::span<const double> gamma, int nu);

// Δψ^{u,v,ν} = max over start loads c of ψ(u, c) - ψ(v, c + ν).
double delta_psi(const LoadNetwork& shape, std::span<const double> psi, int a, int b, int nu);

// Local γ vector of a pricing network from per-passenger duals.
std::vector<double> local_gamma(const PricingNetwork& net, std::span<const double> gamma);

}  // namespace mind
