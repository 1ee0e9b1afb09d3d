#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "blockmodel/graph.h"
#include "blockmodel/likelihood.h"
#include "blockmodel/model_state.h"

namespace blockmodel {

enum class InitKind { kRandom, kNaiveHeuristic, kGiven };

struct InferenceConfig {
  BlockId k = 2;
  std::int64_t mcmc_steps = 1'000'000;
  int runs = 1;
  InitKind init = InitKind::kRandom;
  std::optional<Partition> given;  // required for InitKind::kGiven
  bool use_kl = true;
  std::uint64_t seed = 0;
  ModelSpec model;
  int threads = 1;  // 0 = all cores
};

struct RunTrace {
  int run = 0;
  std::uint64_t seed = 0;
  double initial_objective = 0.0;
  double final_objective = 0.0;
};

struct InferenceResult {
  Partition best_partition;
  double best_objective = 0.0;
  std::vector<RunTrace> runs;
  std::uint64_t seed = 0;
};

/// Uniformly random labels in [0, k).
Partition random_partition(VertexId n, BlockId k, std::mt19937_64& rng);

/// Block 0 if d_out > d_in, block 1 if d_in > d_out, a fair coin otherwise.
Partition naive_heuristic(const Degrees& degrees, std::mt19937_64& rng);

/// Resamples the label of `v` from exp(objective) restricted to its K
/// possible labels, all other labels held fixed. Returns the new label.
BlockId heat_bath_resample(ModelState& state, VertexId v, std::mt19937_64& rng);

struct McmcResult {
  double best_objective = 0.0;
  double final_objective = 0.0;  // objective of the last sampled state
  std::vector<double> trace;     // objective sampled every `trace_every` steps
};

/// Runs `steps` heat-bath updates at temperature 1 on uniformly chosen
/// vertices. The state is left at the best partition visited.
McmcResult heat_bath_mcmc(ModelState& state, std::int64_t steps, std::mt19937_64& rng,
                          std::int64_t trace_every = 0);

/// Kernighan-Lin style passes: every vertex is moved once to its best other
/// block, always taking the best remaining move, then the pass is cut back to
/// its best prefix. Stops when a pass does not improve. Returns the number of
/// passes run.
int kl_heuristic(ModelState& state);

/// Builds the initial partition for one run.
Partition initial_partition(const Graph& g, const InferenceConfig& config, std::mt19937_64& rng);

/// Runs the configured pipeline `runs` times with seeds seed + run index and
/// keeps the best result. Ties go to the lowest run index.
InferenceResult run_inference(const Graph& g, const InferenceConfig& config);

}  // namespace blockmodel
