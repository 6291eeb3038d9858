#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mubforge/trace.hpp"

namespace mubforge {

struct SearchConfig {
  int d = 3;
  std::uint64_t seed = 0;
  int stage1_iters = 200;   // nonlinear conjugate gradient budget
  int stage2_iters = 500;   // BFGS budget
  double accept_threshold = 1e-12;  // on F = sqrt(F')
  bool polish = true;
};

struct SearchResult {
  PhaseVector phi;
  double F_final = 0.0;
  bool accepted = false;
  int iters_stage1 = 0;
  int iters_stage2 = 0;
  double wall_time = 0.0;  // seconds
  int restart_index = 0;
  bool line_search_failed = false;
};

struct BatchSummary {
  int count = 0;
  int accepted = 0;
  double success_rate = 0.0;
  double mean_seconds = 0.0;
  double min_F = 0.0;  // best F over all runs, accepted or not
};

// RNG convention: every stream is a std::mt19937_64 seeded with
// splitmix64(seed ^ splitmix64(restart_index)), so runs are reproducible
// across platforms and independent of thread scheduling.
std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream);

// Phases i.i.d. uniform on [0, 2*pi).
PhaseVector random_init(int d, std::mt19937_64& rng);

// Two-stage minimization of F' = (f-d)^2 + (g-d)^2: Polak-Ribiere conjugate
// gradient with restart on non-descent, then BFGS; both under strong Wolfe
// line searches. An optional polish pass runs when F drops below 1e-8.
// Acceptance requires F < accept_threshold plus the eigenvalue certificate.
SearchResult minimize(const SearchConfig& config);

// Single restart with an explicit RNG stream index; minimize(config) is
// stream 0. Lets callers drive long batches restart by restart (checkpoints).
SearchResult search_restart(const SearchConfig& config, int restart_index);

// Gauss-Newton iterations on the residual system (f-d, g-d), stepping in the
// span of the two trace gradients. Reduces F to <= max(target, 5e-15).
// Throws PolishDiverged if F increases across 3 consecutive steps.
PhaseVector polish(const PhaseVector& phi, double target);

// Independent multi-start searches; restart r uses RNG stream r. Results are
// deterministic for a fixed seed regardless of the thread count.
std::pair<std::vector<SearchResult>, BatchSummary> batch_search(
    const SearchConfig& config, int count, int threads = 0);

}  // namespace mubforge
