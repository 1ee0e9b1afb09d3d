#include "blockmodel/likelihood.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "unit/test_util.h"

namespace blockmodel {
namespace {

using testing::relative_close;

const double kLn2 = std::log(2.0);

Graph four_vertex_undirected() {
  const std::vector<EdgeRecord> lines{{0, 1, 1}, {0, 2, 1}, {1, 3, 1}};
  return from_edge_list(lines, false);
}

Graph two_into_one() {
  const std::vector<EdgeRecord> lines{{0, 2, 1}, {1, 2, 1}};
  return from_edge_list(lines, true);
}

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }

// Log-likelihoods with the degree terms restored, so that DDC and ODC are
// comparable.
double full_ddc(const Graph& g, const Partition& p) {
  const Degrees d = degrees(g);
  double sum = loglik_ddc(block_stats(g, p)) - static_cast<double>(g.num_edges());
  for (std::size_t u = 0; u < d.out.size(); ++u) sum += xlogx(d.out[u]) + xlogx(d.in[u]);
  return sum;
}

double full_odc(const Graph& g, const Partition& p) {
  const Degrees d = degrees(g);
  double sum = loglik_odc(block_stats(g, p)) - static_cast<double>(g.num_edges());
  for (const EdgeCount t : d.total) sum += xlogx(static_cast<double>(t));
  return sum;
}

TEST(LikelihoodTest, DegreeCorrectedHandValues) {
  const Graph g = four_vertex_undirected();
  EXPECT_NEAR(loglik_dc(block_stats(g, Partition(2, {0, 0, 1, 1}))), -7 * kLn2, 1e-12);
  const double m = 3.0;
  EXPECT_NEAR(loglik_dc(block_stats(g, Partition(1, {0, 0, 0, 0}))), -m * std::log(2 * m), 1e-12);
  EXPECT_EQ(loglik_dc(block_stats(Graph(3, false, {}), Partition(1, {0, 0, 0}))), 0.0);
}

TEST(LikelihoodTest, DirectedHandValues) {
  const Graph g = two_into_one();
  const BlockStats s = block_stats(g, Partition(2, {0, 0, 1}));
  EXPECT_NEAR(loglik_ddc(s), -2 * kLn2, 1e-12);
  EXPECT_NEAR(loglik_odc(s), -2 * kLn2, 1e-12);

  const std::vector<EdgeRecord> bipartite{{0, 2, 2}, {1, 3, 1}, {0, 3, 2}};
  const double m = 5.0;
  EXPECT_NEAR(loglik_ddc(block_stats(from_edge_list(bipartite, true), Partition(2, {0, 0, 1, 1}))),
              -m * std::log(m), 1e-12);

  const std::vector<EdgeRecord> single{{0, 1, 1}};
  EXPECT_NEAR(loglik_odc(block_stats(from_edge_list(single, true), Partition(1, {0, 0}))), std::log(0.25), 1e-12);
  EXPECT_EQ(loglik_ddc(block_stats(Graph(2, true, {}), Partition(1, {0, 0}))), 0.0);
  EXPECT_EQ(loglik_odc(block_stats(Graph(2, true, {}), Partition(1, {0, 0}))), 0.0);
}

TEST(LikelihoodTest, OrientedDecompositionHandValues) {
  const OdcParts parts = loglik_odc_decomposed(block_stats(two_into_one(), Partition(2, {0, 0, 1})));
  EXPECT_NEAR(parts.undirected, 2 * std::log(0.5), 1e-12);
  EXPECT_NEAR(parts.orientation, 0.0, 1e-12);
  EXPECT_NEAR(parts.total(), -2 * kLn2, 1e-12);

  const std::vector<EdgeRecord> pair{{0, 1, 1}, {1, 0, 1}};
  const OdcParts sym = loglik_odc_decomposed(block_stats(from_edge_list(pair, true), Partition(2, {0, 1})));
  EXPECT_NEAR(sym.orientation, 2 * std::log(0.5), 1e-12);

  std::mt19937_64 rng(2);
  const Graph g = testing::random_graph(rng, 10, true);
  const BlockStats one = block_stats(g, Partition(1, std::vector<BlockId>(10, 0)));
  EXPECT_NEAR(loglik_odc_decomposed(one).orientation, static_cast<double>(one.at(0, 0)) * std::log(0.5), 1e-9);
}

TEST(LikelihoodTest, UncorrectedHandValues) {
  const Graph g = four_vertex_undirected();
  const BlockStats s = block_stats(g, Partition(2, {0, 0, 1, 1}));
  EXPECT_NEAR(loglik_sbm(s), -3 * kLn2, 1e-12);
  const MleParameters mle = mle_parameters(ModelFamily::kSbm, s, degrees(g));
  EXPECT_DOUBLE_EQ(*mle.omega[0], 0.5);
  EXPECT_DOUBLE_EQ(*mle.omega[1], 0.5);
  EXPECT_DOUBLE_EQ(*mle.omega[2], 0.5);
  EXPECT_DOUBLE_EQ(*mle.omega[3], 0.0);
  EXPECT_EQ(loglik_sbm(block_stats(Graph(2, false, {}), Partition(1, {0, 0}))), 0.0);
}

TEST(LikelihoodTest, FamilyDirectionIsChecked) {
  EXPECT_THROW(loglik_dc(block_stats(two_into_one(), Partition(1, {0, 0, 0}))), std::invalid_argument);
  EXPECT_THROW(loglik_ddc(block_stats(four_vertex_undirected(), Partition(1, {0, 0, 0, 0}))),
               std::invalid_argument);
}

TEST(LikelihoodTest, MleParametersHandValues) {
  const Graph g = two_into_one();
  const MleParameters ddc = mle_parameters(ModelFamily::kDdc, block_stats(g, Partition(2, {0, 0, 1})), degrees(g));
  EXPECT_EQ(ddc.theta_out, (std::vector<double>{1, 1, 0}));
  EXPECT_EQ(ddc.theta_in, (std::vector<double>{0, 0, 2}));
  EXPECT_DOUBLE_EQ(*ddc.omega[1], 0.5);
  EXPECT_FALSE(ddc.omega[2].has_value());  // kappa_out of block 1 is zero

  const std::vector<EdgeRecord> pair{{0, 1, 1}, {1, 0, 1}};
  const Graph pg = from_edge_list(pair, true);
  const MleParameters odc = mle_parameters(ModelFamily::kOdc, block_stats(pg, Partition(2, {0, 1})), degrees(pg));
  EXPECT_DOUBLE_EQ(*odc.rho[1], 0.5);
  EXPECT_DOUBLE_EQ(*odc.rho[2], 0.5);
  EXPECT_FALSE(odc.rho[0].has_value());

  const Graph ug = four_vertex_undirected();
  const MleParameters dc = mle_parameters(ModelFamily::kDc, block_stats(ug, Partition(2, {0, 0, 1, 1})), degrees(ug));
  EXPECT_EQ(dc.theta, (std::vector<double>{2, 2, 1, 1}));
}

TEST(LikelihoodTest, OrientationProbabilitiesSumToOne) {
  std::mt19937_64 rng(8);
  const Graph g = testing::random_graph(rng, 15, true);
  const Partition p = testing::random_labels(rng, 15, 3);
  const MleParameters mle = mle_parameters(ModelFamily::kOdc, block_stats(g, p), degrees(g));
  for (int r = 0; r < 3; ++r) {
    for (int s = 0; s < 3; ++s) {
      const auto& a = mle.rho[static_cast<std::size_t>(r * 3 + s)];
      const auto& b = mle.rho[static_cast<std::size_t>(s * 3 + r)];
      if (a && b) EXPECT_NEAR(*a + *b, 1.0, 1e-12);
    }
  }
}

TEST(LikelihoodTest, OrientedDecompositionMatchesDirectForm) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = std::uniform_int_distribution<VertexId>(2, 25)(rng);
    const auto k = std::uniform_int_distribution<BlockId>(1, 4)(rng);
    const Graph g = testing::random_graph(rng, n, true, 0.25, 4);
    const BlockStats s = block_stats(g, testing::random_labels(rng, n, k));
    EXPECT_TRUE(relative_close(loglik_odc_decomposed(s).total(), loglik_odc(s)));
  }
}

TEST(LikelihoodTest, DeltaMatchesFullRecomputation) {
  std::mt19937_64 rng(99);
  for (const ModelFamily family : {ModelFamily::kSbm, ModelFamily::kDc, ModelFamily::kDdc, ModelFamily::kOdc}) {
    const bool directed = family_is_directed(family);
    int checked = 0;
    while (checked < 1000) {
      const auto n = std::uniform_int_distribution<VertexId>(2, 30)(rng);
      const auto k = std::uniform_int_distribution<BlockId>(1, 4)(rng);
      const Graph g = testing::random_graph(rng, n, directed, 0.2);
      const Degrees d = degrees(g);
      Partition p = testing::random_labels(rng, n, k);
      for (int move = 0; move < 20; ++move, ++checked) {
        const BlockStats before = block_stats(g, p);
        const auto v = std::uniform_int_distribution<VertexId>(0, n - 1)(rng);
        const auto to = std::uniform_int_distribution<BlockId>(0, k - 1)(rng);
        const double delta = delta_loglik(family, g, p, before, d, v, to);
        const double l0 = loglik(family, before);
        Partition q = p;
        q.set_block(v, to);
        const double l1 = loglik(family, block_stats(g, q));
        ASSERT_LE(std::abs(delta - (l1 - l0)), 1e-9 * std::max(1.0, std::abs(l0)))
            << family_name(family) << " move " << checked;
        if (to == p[v]) EXPECT_EQ(delta, 0.0);
        p = q;
      }
    }
  }
}

TEST(LikelihoodTest, ApplyMoveMatchesRecomputedStats) {
  std::mt19937_64 rng(4);
  for (const bool directed : {false, true}) {
    const Graph g = testing::random_graph(rng, 20, directed);
    const Degrees d = degrees(g);
    Partition p = testing::random_labels(rng, 20, 3);
    BlockStats s = block_stats(g, p);
    for (int i = 0; i < 200; ++i) {
      const auto v = std::uniform_int_distribution<VertexId>(0, 19)(rng);
      const auto to = std::uniform_int_distribution<BlockId>(0, 2)(rng);
      const auto c = neighbor_block_counts(g, p, v);
      const auto u = static_cast<std::size_t>(v);
      apply_move(s, VertexMove{v, p[v], to, d.out[u], d.in[u], d.total[u], c.out_to_block, c.in_from_block});
      p.set_block(v, to);
      const BlockStats fresh = block_stats(g, p);
      ASSERT_EQ(s.m, fresh.m);
      ASSERT_EQ(s.kappa_total, fresh.kappa_total);
      ASSERT_EQ(s.sizes, fresh.sizes);
    }
  }
}

TEST(LikelihoodTest, BlockRelabelingLeavesValuesUnchanged) {
  std::mt19937_64 rng(6);
  const std::vector<BlockId> perm{2, 0, 3, 1};
  for (int trial = 0; trial < 20; ++trial) {
    const Graph d = testing::random_graph(rng, 16, true);
    const Graph u = undirected_projection(d);
    const Partition p = testing::random_labels(rng, 16, 4);
    std::vector<BlockId> relabeled;
    for (const BlockId b : p.labels()) relabeled.push_back(perm[static_cast<std::size_t>(b)]);
    const Partition q(4, relabeled);
    EXPECT_NEAR(loglik_ddc(block_stats(d, p)), loglik_ddc(block_stats(d, q)), 1e-9);
    EXPECT_NEAR(loglik_odc(block_stats(d, p)), loglik_odc(block_stats(d, q)), 1e-9);
    EXPECT_NEAR(loglik_dc(block_stats(u, p)), loglik_dc(block_stats(u, q)), 1e-9);
    EXPECT_NEAR(loglik_sbm(block_stats(u, p)), loglik_sbm(block_stats(u, q)), 1e-9);
  }
}

TEST(LikelihoodTest, DirectedModelFitsAtLeastAsWellAsOriented) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Graph g = testing::random_graph(rng, 14, true, 0.3);
    const Partition p = testing::random_labels(rng, 14, 3);
    EXPECT_GE(full_ddc(g, p), full_odc(g, p) - 1e-9);
  }
}

TEST(LikelihoodTest, DirectedAndOrientedCoincideForBalancedDegrees) {
  // Union of shifted cycles: every vertex has d_out = d_in.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const VertexId n = 12;
    std::vector<EdgeRecord> lines;
    for (const VertexId shift : {1, 3, 5}) {
      for (VertexId v = 0; v < n; ++v) lines.push_back(EdgeRecord{v, (v + shift) % n, 1});
    }
    const Graph g = from_edge_list(lines, true);
    const Partition p = testing::random_labels(rng, n, 2);
    const BlockStats s = block_stats(g, p);
    bool balanced = true;
    for (BlockId r = 0; r < 2; ++r) balanced &= s.kappa_in[static_cast<std::size_t>(r)] == s.kappa_out[static_cast<std::size_t>(r)];
    if (!balanced) continue;
    EXPECT_TRUE(relative_close(full_ddc(g, p), full_odc(g, p)));
  }
}

// Full Poisson log-likelihood with explicit parameters, expected counts summed
// over all ordered vertex pairs.
double unprofiled_ddc(const Graph& g, const Partition& p, const std::vector<double>& theta_out,
                      const std::vector<double>& theta_in, const std::vector<double>& omega) {
  const BlockId k = p.num_blocks();
  double sum = 0.0;
  for (const auto& e : g.edges()) {
    const double rate = theta_out[static_cast<std::size_t>(e.src)] * theta_in[static_cast<std::size_t>(e.dst)] *
                        omega[static_cast<std::size_t>(p[e.src] * k + p[e.dst])];
    sum += static_cast<double>(e.count) * std::log(rate);
  }
  for (VertexId u = 0; u < p.size(); ++u) {
    for (VertexId v = 0; v < p.size(); ++v) {
      sum -= theta_out[static_cast<std::size_t>(u)] * theta_in[static_cast<std::size_t>(v)] *
             omega[static_cast<std::size_t>(p[u] * k + p[v])];
    }
  }
  return sum;
}

TEST(LikelihoodTest, MaximumLikelihoodPointIsStationary) {
  std::mt19937_64 rng(31);
  const double eps = 1e-4;
  for (int trial = 0; trial < 10; ++trial) {
    const Graph g = testing::random_graph(rng, 10, true, 0.5);
    const Partition p = testing::random_labels(rng, 10, 2);
    const BlockStats s = block_stats(g, p);
    const MleParameters mle = mle_parameters(ModelFamily::kDdc, s, degrees(g));
    std::vector<double> omega;
    for (const auto& w : mle.omega) omega.push_back(w.value_or(0.0));
    const double best = unprofiled_ddc(g, p, mle.theta_out, mle.theta_in, omega);

    for (std::size_t i = 0; i < omega.size(); ++i) {
      if (omega[i] <= eps) continue;
      for (const double sign : {-1.0, 1.0}) {
        auto w = omega;
        w[i] += sign * eps;
        EXPECT_LT(unprofiled_ddc(g, p, mle.theta_out, mle.theta_in, w), best);
      }
    }
    // Shift theta_out between two vertices of one block: block sums stay fixed.
    for (VertexId u = 0; u < 10; ++u) {
      for (VertexId v = u + 1; v < 10; ++v) {
        if (p[u] != p[v] || mle.theta_out[static_cast<std::size_t>(u)] <= eps ||
            mle.theta_out[static_cast<std::size_t>(v)] <= eps) {
          continue;
        }
        auto t = mle.theta_out;
        t[static_cast<std::size_t>(u)] += eps;
        t[static_cast<std::size_t>(v)] -= eps;
        EXPECT_LT(unprofiled_ddc(g, p, t, mle.theta_in, omega), best);
      }
    }
  }
}

TEST(LikelihoodTest, OrientedModelIsDirectedModelWithTiedParameters) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = testing::random_graph(rng, 12, true, 0.4);
    const Partition p = testing::random_labels(rng, 12, 3);
    const MleParameters mle = mle_parameters(ModelFamily::kOdc, block_stats(g, p), degrees(g));
    std::vector<double> tied;
    for (const auto& w : mle.omega_oriented) tied.push_back(w.value_or(0.0));
    EXPECT_TRUE(relative_close(unprofiled_ddc(g, p, mle.theta, mle.theta, tied), full_odc(g, p)));
  }
}

TEST(LikelihoodTest, ModelNames) {
  for (const std::string name : {"sbm", "dc", "ddc", "odc", "dg-dc", "dg-ddc", "dg-odc"}) {
    EXPECT_EQ(model_name(parse_model_name(name)), name);
  }
  EXPECT_TRUE(parse_model_name("dg-odc").degree_generation.has_value());
  EXPECT_THROW(parse_model_name("dg-sbm"), std::invalid_argument);
  try {
    parse_model_name("bogus");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("dg-ddc"), std::string::npos);
  }
}

}  // namespace
}  // namespace blockmodel
