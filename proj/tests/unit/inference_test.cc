#include "blockmodel/inference.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "blockmodel/model_state.h"
#include "unit/test_util.h"

namespace blockmodel {
namespace {

double exhaustive_max(const Graph& g, const ModelSpec& model, BlockId k = 2) {
  const VertexId n = g.num_vertices();
  double best = -kInfinity;
  std::vector<BlockId> labels(static_cast<std::size_t>(n), 0);
  std::int64_t total = 1;
  for (VertexId i = 0; i < n; ++i) total *= k;
  for (std::int64_t code = 0; code < total; ++code) {
    std::int64_t c = code;
    for (auto& b : labels) {
      b = static_cast<BlockId>(c % k);
      c /= k;
    }
    best = std::max(best, full_objective(g, model, Partition(k, labels)));
  }
  return best;
}

Degrees directed_degrees(std::vector<EdgeCount> out, std::vector<EdgeCount> in) {
  Degrees d;
  d.out = std::move(out);
  d.in = std::move(in);
  for (std::size_t i = 0; i < d.out.size(); ++i) d.total.push_back(d.out[i] + d.in[i]);
  return d;
}

TEST(InferenceTest, NaiveHeuristicFollowsDegreeImbalance) {
  std::mt19937_64 rng(1);
  const Partition p = naive_heuristic(directed_degrees({3, 0}, {1, 5}), rng);
  EXPECT_EQ(p[0], 0);
  EXPECT_EQ(p[1], 1);
  EXPECT_EQ(p.num_blocks(), 2);
}

TEST(InferenceTest, NaiveHeuristicBreaksTiesWithAFairCoin) {
  std::mt19937_64 rng(2);
  const int trials = 10000;
  int zeros = 0;
  const Degrees d = directed_degrees({2}, {2});
  for (int i = 0; i < trials; ++i) zeros += naive_heuristic(d, rng)[0] == 0;
  EXPECT_NEAR(zeros, trials * 0.5, 3 * std::sqrt(trials * 0.25));
}

TEST(InferenceTest, HeatBathMatchesConditionalDistribution) {
  std::mt19937_64 rng(3);
  const ModelSpec model = parse_model_name("dc");
  // Pick a graph where the resampled vertex is genuinely uncertain.
  for (int attempt = 0; attempt < 200; ++attempt) {
    const Graph g = testing::random_graph(rng, 5, false, 0.5, 2);
    if (g.num_edges() == 0) continue;
    const Partition start = testing::random_labels(rng, 5, 2);
    const VertexId v = 0;
    std::vector<double> logl(2);
    for (BlockId b = 0; b < 2; ++b) {
      Partition p = start;
      p.set_block(v, b);
      logl[static_cast<std::size_t>(b)] = full_objective(g, model, p);
    }
    const double z = std::exp(logl[0]) + std::exp(logl[1]);
    const double p0 = std::exp(logl[0]) / z;
    if (p0 < 0.1 || p0 > 0.9) continue;

    ModelState state(g, model, start);
    const int samples = 100000;
    int count0 = 0;
    for (int i = 0; i < samples; ++i) count0 += heat_bath_resample(state, v, rng) == 0;
    const double tv = std::abs(static_cast<double>(count0) / samples - p0);
    EXPECT_LT(tv, 0.02);
    return;
  }
  FAIL() << "no suitable graph found";
}

TEST(InferenceTest, HeatBathZeroStepsAndSingleBlock) {
  std::mt19937_64 rng(4);
  const Graph g = testing::random_graph(rng, 10, false);
  const Partition start = testing::random_labels(rng, 10, 2);
  ModelState state(g, parse_model_name("dc"), start);
  heat_bath_mcmc(state, 0, rng);
  EXPECT_EQ(state.partition(), start);

  const Partition one(1, std::vector<BlockId>(10, 0));
  ModelState single(g, parse_model_name("dc"), one);
  heat_bath_mcmc(single, 1000, rng);
  EXPECT_EQ(single.partition(), one);
}

TEST(InferenceTest, HeatBathFindsCliqueSplit) {
  std::mt19937_64 rng(5);
  const Graph g = testing::two_cliques(4);
  const ModelSpec model = parse_model_name("dc");
  const double best = exhaustive_max(g, model);
  ModelState state(g, model, random_partition(8, 2, rng));
  const McmcResult r = heat_bath_mcmc(state, 10000, rng);
  EXPECT_NEAR(r.best_objective, best, 1e-9);
  EXPECT_NEAR(state.objective(), best, 1e-9);
  EXPECT_EQ(state.partition()[0], state.partition()[3]);
  EXPECT_NE(state.partition()[0], state.partition()[4]);
}

TEST(InferenceTest, HeatBathTraceIsSampled) {
  std::mt19937_64 rng(6);
  const Graph g = testing::two_cliques(4);
  ModelState state(g, parse_model_name("dc"), random_partition(8, 2, rng));
  const McmcResult r = heat_bath_mcmc(state, 1000, rng, 100);
  EXPECT_EQ(r.trace.size(), 10u);
  for (const double x : r.trace) EXPECT_LE(x, r.best_objective + 1e-12);
}

void expect_no_improving_move(const ModelState& state) {
  for (VertexId v = 0; v < state.graph().num_vertices(); ++v) {
    for (BlockId b = 0; b < state.num_blocks(); ++b) {
      EXPECT_LE(state.move_delta(v, b), 1e-9 * std::max(1.0, std::abs(state.objective())));
    }
  }
}

TEST(InferenceTest, KlAtOptimumIsUnchanged) {
  const Graph g = testing::two_cliques(4);
  const ModelSpec model = parse_model_name("dc");
  const Partition split(2, {0, 0, 0, 0, 1, 1, 1, 1});
  ASSERT_NEAR(full_objective(g, model, split), exhaustive_max(g, model), 1e-12);
  ModelState state(g, model, split);
  kl_heuristic(state);
  EXPECT_EQ(state.partition(), split);

  const Partition one(1, std::vector<BlockId>(8, 0));
  ModelState single(g, model, one);
  kl_heuristic(single);
  EXPECT_EQ(single.partition(), one);
}

TEST(InferenceTest, KlFromRandomStartsOnTwoCliques) {
  // Many random starts end in single-move local optima of the degree-corrected
  // objective; a separate brute-force pass implementation hits the optimum
  // from about 28% of starts. KL followed by the chain should nearly always.
  const Graph g = testing::two_cliques(4);
  const ModelSpec model = parse_model_name("dc");
  const double best = exhaustive_max(g, model);
  int kl_hits = 0;
  int pipeline_hits = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    ModelState state(g, model, random_partition(8, 2, rng));
    kl_heuristic(state);
    expect_no_improving_move(state);
    kl_hits += std::abs(state.objective() - best) < 1e-9;

    InferenceConfig config;
    config.model = model;
    config.mcmc_steps = 10000;
    config.seed = seed;
    pipeline_hits += std::abs(run_inference(g, config).best_objective - best) < 1e-9;
  }
  EXPECT_GE(kl_hits, 15);
  EXPECT_LE(kl_hits, 45);
  EXPECT_GE(pipeline_hits, 90);
}

TEST(InferenceTest, KlOutputIsALocalOptimum) {
  std::mt19937_64 rng(8);
  for (const std::string name : {"sbm", "dc", "ddc", "odc", "dg-dc", "dg-ddc"}) {
    const ModelSpec model = parse_model_name(name);
    const Graph g = testing::random_graph(rng, 20, family_is_directed(model.family), 0.15);
    ModelState state(g, model, random_partition(20, 3, rng));
    const double before = state.objective();
    kl_heuristic(state);
    EXPECT_GE(state.objective(), before - 1e-9) << name;
    EXPECT_NEAR(state.objective(), full_objective(g, model, state.partition()), 1e-9) << name;
    expect_no_improving_move(state);
  }
}

TEST(InferenceTest, RunInferenceIsDeterministic) {
  std::mt19937_64 rng(9);
  const Graph g = testing::random_graph(rng, 20, true, 0.2);
  InferenceConfig config;
  config.model = parse_model_name("ddc");
  config.mcmc_steps = 2000;
  config.runs = 3;
  config.seed = 17;
  const InferenceResult a = run_inference(g, config);
  const InferenceResult b = run_inference(g, config);
  EXPECT_EQ(a.best_partition, b.best_partition);
  EXPECT_EQ(a.best_objective, b.best_objective);
  ASSERT_EQ(a.runs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.runs[i].seed, 17 + i);
    EXPECT_EQ(a.runs[i].final_objective, b.runs[i].final_objective);
    EXPECT_LE(a.runs[i].final_objective, a.best_objective);
  }

  // A run is independent of how many siblings it has.
  config.runs = 1;
  config.seed = 18;
  EXPECT_EQ(run_inference(g, config).runs[0].final_objective, a.runs[1].final_objective);

  config.runs = 3;
  config.seed = 17;
  config.threads = 2;
  EXPECT_EQ(run_inference(g, config).best_partition, a.best_partition);
}

TEST(InferenceTest, GivenInitPassesThrough) {
  std::mt19937_64 rng(10);
  const Graph g = testing::random_graph(rng, 12, false);
  const Partition truth = testing::random_labels(rng, 12, 2);
  InferenceConfig config;
  config.model = parse_model_name("dc");
  config.init = InitKind::kGiven;
  config.given = truth;
  config.mcmc_steps = 0;
  config.use_kl = false;
  const InferenceResult r = run_inference(g, config);
  EXPECT_EQ(r.best_partition, truth);
  EXPECT_NEAR(r.best_objective, full_objective(g, config.model, truth), 1e-12);
}

TEST(InferenceTest, NeverWorseThanInitialization) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = testing::random_graph(rng, 15, true, 0.2);
    InferenceConfig config;
    config.model = parse_model_name(trial % 2 ? "odc" : "dg-ddc");
    config.mcmc_steps = 500;
    config.runs = 2;
    config.use_kl = trial % 3 != 0;
    config.seed = static_cast<std::uint64_t>(trial);
    const InferenceResult r = run_inference(g, config);
    for (const RunTrace& t : r.runs) EXPECT_GE(t.final_objective, t.initial_objective - 1e-9);
    EXPECT_NEAR(r.best_objective, full_objective(g, config.model, r.best_partition), 1e-9);
  }
}

TEST(InferenceTest, CliqueGraphReachesExhaustiveMaximum) {
  const Graph g = testing::two_cliques(4);
  InferenceConfig config;
  config.model = parse_model_name("dc");
  config.mcmc_steps = 10000;
  for (const bool kl : {true, false}) {
    config.use_kl = kl;
    EXPECT_NEAR(run_inference(g, config).best_objective, exhaustive_max(g, config.model), 1e-9);
  }
}

TEST(InferenceTest, InitialPartitionVariants) {
  std::mt19937_64 rng(12);
  const Graph directed = testing::random_graph(rng, 10, true);
  const Graph undirected = testing::random_graph(rng, 10, false);
  InferenceConfig config;
  config.init = InitKind::kNaiveHeuristic;
  EXPECT_EQ(initial_partition(directed, config, rng).num_blocks(), 2);
  EXPECT_THROW(initial_partition(undirected, config, rng), std::invalid_argument);
  config.k = 3;
  EXPECT_THROW(initial_partition(directed, config, rng), std::invalid_argument);
  config.init = InitKind::kGiven;
  EXPECT_THROW(initial_partition(directed, config, rng), std::invalid_argument);
  config.given = testing::random_labels(rng, 9, 3);
  EXPECT_THROW(initial_partition(directed, config, rng), std::invalid_argument);
}

TEST(InferenceTest, RejectsBadInput) {
  InferenceConfig config;
  config.model = parse_model_name("dc");
  EXPECT_THROW(run_inference(Graph(0, false, {}), config), std::invalid_argument);
  std::mt19937_64 rng(13);
  const Graph g = testing::random_graph(rng, 6, true);
  EXPECT_THROW(run_inference(g, config), std::invalid_argument);
  config.model = parse_model_name("ddc");
  config.runs = 0;
  EXPECT_THROW(run_inference(g, config), std::invalid_argument);
}

}  // namespace
}  // namespace blockmodel
