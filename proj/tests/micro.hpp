// Small random instances: at most 2 lines, 5 checkpoints, 8 requests,
// capacity 3 and 2 scenarios.
#pragma once

#include <random>

#include "mind/instance.hpp"

namespace mind::testing {

struct MicroSpec {
  int lines = 1;
  int requests = 6;
  int scenarios = 1;
  int capacity = 2;
  int skip = 0;
  int fleet = 1;
  double spacing = 600;
};

inline MicroSpec random_micro_spec(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  MicroSpec s;
  s.lines = pick(1, 2);
  s.requests = pick(3, 8);
  s.scenarios = pick(1, 2);
  s.capacity = pick(1, 3);
  s.skip = pick(0, 1);
  s.fleet = pick(1, 2);
  return s;
}

inline Instance micro_instance(const MicroSpec& s, std::uint64_t seed) {
  Instance inst = generate_grid_instance(3, 3, s.spacing, s.lines, s.requests, s.scenarios, seed);
  for (Line& l : inst.lines) {
    l.capacity = s.capacity;
    if (l.checkpoints.size() > 5) l.checkpoints.erase(l.checkpoints.begin(), l.checkpoints.end() - 5);
    l.offsets.clear();
  }
  inst.params.skip = s.skip;
  inst.params.fleet = s.fleet;
  finalize_instance(inst);
  return inst;
}

inline Instance micro_instance(std::uint64_t seed) { return micro_instance(random_micro_spec(seed), seed); }

}  // namespace mind::testing
