#include "blockmodel/inference.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "blockmodel/parallel.h"

namespace blockmodel {
namespace {

constexpr std::int64_t kResyncInterval = 10'000;
constexpr int kMaxKlPasses = 10'000;

double improvement_threshold(double objective) { return 1e-10 * std::max(1.0, std::abs(objective)); }

// Copies the current labels of `state` into `best` lazily: moves since the
// last snapshot are logged and replayed only when a new best is reached.
class BestTracker {
 public:
  explicit BestTracker(const ModelState& state)
      : labels_(state.partition().labels().begin(), state.partition().labels().end()),
        objective_(state.objective()) {}

  void record_move(VertexId v, BlockId to) {
    if (pending_.size() > labels_.size()) {
      pending_.clear();
      overflow_ = true;
    }
    if (!overflow_) pending_.emplace_back(v, to);
  }

  void offer(const ModelState& state) {
    if (!(state.objective() > objective_)) return;
    objective_ = state.objective();
    if (overflow_) {
      const auto labels = state.partition().labels();
      labels_.assign(labels.begin(), labels.end());
      overflow_ = false;
    } else {
      for (const auto& [v, b] : pending_) labels_[static_cast<std::size_t>(v)] = b;
    }
    pending_.clear();
  }

  double objective() const { return objective_; }
  Partition partition(BlockId k) const { return Partition(k, labels_); }

 private:
  std::vector<BlockId> labels_;
  std::vector<std::pair<VertexId, BlockId>> pending_;
  bool overflow_ = false;
  double objective_;
};

}  // namespace

Partition random_partition(VertexId n, BlockId k, std::mt19937_64& rng) {
  if (k < 1) throw std::invalid_argument("number of blocks must be at least 1");
  std::uniform_int_distribution<BlockId> pick(0, k - 1);
  std::vector<BlockId> labels(static_cast<std::size_t>(n));
  for (auto& b : labels) b = pick(rng);
  return Partition(k, std::move(labels));
}

Partition naive_heuristic(const Degrees& degrees, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  std::vector<BlockId> labels(degrees.out.size());
  for (std::size_t v = 0; v < labels.size(); ++v) {
    if (degrees.out[v] > degrees.in[v]) {
      labels[v] = 0;
    } else if (degrees.in[v] > degrees.out[v]) {
      labels[v] = 1;
    } else {
      labels[v] = coin(rng) ? 1 : 0;
    }
  }
  return Partition(2, std::move(labels));
}

BlockId heat_bath_resample(ModelState& state, VertexId v, std::mt19937_64& rng) {
  const BlockId k = state.num_blocks();
  if (k == 1) return 0;
  thread_local std::vector<double> weight;
  weight.resize(static_cast<std::size_t>(k));
  double top = -std::numeric_limits<double>::infinity();
  for (BlockId t = 0; t < k; ++t) {
    weight[static_cast<std::size_t>(t)] = state.move_delta(v, t);
    top = std::max(top, weight[static_cast<std::size_t>(t)]);
  }
  double total = 0.0;
  for (auto& w : weight) {
    w = std::isnan(w) ? 0.0 : std::exp(w - top);
    total += w;
  }
  std::uniform_real_distribution<double> unit(0.0, total);
  double u = unit(rng);
  BlockId chosen = k - 1;
  for (BlockId t = 0; t < k; ++t) {
    u -= weight[static_cast<std::size_t>(t)];
    if (u < 0.0) {
      chosen = t;
      break;
    }
  }
  // Guard against rounding landing on a zero-weight tail entry.
  while (weight[static_cast<std::size_t>(chosen)] == 0.0 && chosen > 0) --chosen;
  state.move(v, chosen);
  return chosen;
}

McmcResult heat_bath_mcmc(ModelState& state, std::int64_t steps, std::mt19937_64& rng,
                          std::int64_t trace_every) {
  McmcResult result;
  const VertexId n = state.graph().num_vertices();
  BestTracker best(state);
  if (steps > 0 && n > 0 && state.num_blocks() > 1) {
    std::uniform_int_distribution<VertexId> pick(0, n - 1);
    for (std::int64_t step = 1; step <= steps; ++step) {
      const VertexId v = pick(rng);
      const BlockId before = state.partition()[v];
      const BlockId after = heat_bath_resample(state, v, rng);
      if (after != before) {
        best.record_move(v, after);
        best.offer(state);
      }
      if (step % kResyncInterval == 0) state.resync();
      if (trace_every > 0 && step % trace_every == 0) result.trace.push_back(state.objective());
    }
  }
  result.final_objective = state.objective();
  state.assign(best.partition(state.num_blocks()));
  result.best_objective = state.objective();
  return result;
}

int kl_heuristic(ModelState& state) {
  const VertexId n = state.graph().num_vertices();
  const BlockId k = state.num_blocks();
  if (k == 1 || n == 0) return 0;

  struct Step {
    VertexId vertex;
    BlockId from;
  };
  std::vector<char> moved(static_cast<std::size_t>(n));
  std::vector<Step> history;
  history.reserve(static_cast<std::size_t>(n));

  int passes = 0;
  while (passes < kMaxKlPasses) {
    ++passes;
    std::fill(moved.begin(), moved.end(), 0);
    history.clear();
    const double start = state.objective();
    double gain = 0.0, best_gain = 0.0;
    std::size_t best_len = 0;

    for (VertexId step = 0; step < n; ++step) {
      double best_delta = -std::numeric_limits<double>::infinity();
      VertexId best_v = -1;
      BlockId best_t = 0;
      for (VertexId v = 0; v < n; ++v) {
        if (moved[static_cast<std::size_t>(v)]) continue;
        const BlockId from = state.partition()[v];
        for (BlockId t = 0; t < k; ++t) {
          if (t == from) continue;
          const double d = state.move_delta(v, t);
          if (d > best_delta) {
            best_delta = d;
            best_v = v;
            best_t = t;
          }
        }
      }
      if (best_v < 0) break;
      moved[static_cast<std::size_t>(best_v)] = 1;
      history.push_back({best_v, state.partition()[best_v]});
      state.move(best_v, best_t);
      gain += best_delta;
      if (gain > best_gain + improvement_threshold(start)) {
        best_gain = gain;
        best_len = history.size();
      }
    }
    for (std::size_t i = history.size(); i > best_len; --i) {
      state.move(history[i - 1].vertex, history[i - 1].from);
    }
    state.resync();
    if (best_len == 0) break;
  }
  return passes;
}

Partition initial_partition(const Graph& g, const InferenceConfig& config, std::mt19937_64& rng) {
  switch (config.init) {
    case InitKind::kRandom:
      return random_partition(g.num_vertices(), config.k, rng);
    case InitKind::kNaiveHeuristic:
      if (!g.directed()) throw std::invalid_argument("the naive heuristic needs edge directions");
      if (config.k != 2) throw std::invalid_argument("the naive heuristic needs k = 2");
      return naive_heuristic(degrees(g), rng);
    case InitKind::kGiven: {
      if (!config.given) throw std::invalid_argument("given initialization without a partition");
      const Partition& p = *config.given;
      if (p.size() != g.num_vertices()) {
        throw std::invalid_argument("initial partition has " + std::to_string(p.size()) +
                                    " vertices, graph has " + std::to_string(g.num_vertices()));
      }
      if (p.num_blocks() > config.k) {
        throw std::invalid_argument("initial partition uses more than k blocks");
      }
      return Partition(config.k, std::vector<BlockId>(p.labels().begin(), p.labels().end()));
    }
  }
  throw std::invalid_argument("unknown initialization");
}

InferenceResult run_inference(const Graph& g, const InferenceConfig& config) {
  if (g.num_vertices() == 0) throw std::invalid_argument("cannot infer blocks of an empty graph");
  if (config.k < 1) throw std::invalid_argument("k must be at least 1");
  if (config.runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (config.mcmc_steps < 0) throw std::invalid_argument("mcmc_steps must be non-negative");
  if (g.directed() != family_is_directed(config.model.family)) {
    throw std::invalid_argument("model " + model_name(config.model) + " does not match the graph direction");
  }

  const auto runs = static_cast<std::size_t>(config.runs);
  std::vector<RunTrace> traces(runs);
  std::vector<Partition> finals(runs);
  parallel_for(runs, resolve_threads(config.threads), [&](std::size_t i) {
    const std::uint64_t seed = config.seed + i;
    std::mt19937_64 rng(seed);
    ModelState state(g, config.model, initial_partition(g, config, rng));
    RunTrace& trace = traces[i];
    trace.run = static_cast<int>(i);
    trace.seed = seed;
    trace.initial_objective = state.objective();
    if (config.use_kl) kl_heuristic(state);
    heat_bath_mcmc(state, config.mcmc_steps, rng);
    trace.final_objective = state.objective();
    finals[i] = state.partition();
  });

  InferenceResult result;
  result.seed = config.seed;
  result.runs = traces;
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs; ++i) {
    if (traces[i].final_objective > traces[best].final_objective) best = i;
  }
  result.best_partition = finals[best];
  result.best_objective = traces[best].final_objective;
  return result;
}

}  // namespace blockmodel
