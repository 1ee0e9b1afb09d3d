#pragma once

#include <optional>
#include <random>
#include <vector>

#include "blockmodel/degree_prior.h"
#include "blockmodel/graph.h"

namespace blockmodel {

/// How a Poisson block sets theta. Constant theta = mean makes the block's
/// degrees Poisson; drawn theta uses Poisson integers as theta, which doubles
/// the degree variance.
enum class PoissonTheta { kConstant, kDrawn };

/// How theta is drawn for the vertices of one block.

struct BlockDegreeSpec {
  PriorFamily family = PriorFamily::kPowerLaw;
  double alpha = 1.7;
  double theta_max = 1850.0;
  /// Power law: target mean used to solve for theta_min when theta_min is
  /// unset. Poisson: the mean degree.
  double mean = 20.0;
  std::optional<double> theta_min;
  PoissonTheta poisson_theta = PoissonTheta::kConstant;

  bool operator==(const BlockDegreeSpec&) const = default;
};

inline BlockDegreeSpec poisson_block(double mean = 20.0) {
  BlockDegreeSpec b;
  b.family = PriorFamily::kPoisson;
  b.mean = mean;
  return b;
}

struct SynthSpec {
  VertexId n = 2400;
  bool directed = false;
  double lambda = 0.0;
  std::vector<double> fractions{0.5, 0.5};
  std::vector<BlockDegreeSpec> blocks{BlockDegreeSpec{}, poisson_block()};
  /// Directed planted off-diagonal entry; defaults to min(kappa_1, kappa_2) / 2.
  std::optional<double> omega12;
  /// Directed only: reuse each vertex's out theta as its in theta instead of
  /// drawing it independently.
  bool shared_theta = false;

  bool operator==(const SynthSpec&) const = default;
};

/// Throws std::invalid_argument describing the first problem found.
void validate(const SynthSpec& spec);

/// Vertex counts per block: round(n * fraction), the last block taking the
/// remainder.
std::vector<VertexId> block_sizes(const SynthSpec& spec);

/// lambda * planted + (1 - lambda) * random, row-major k x k.
///   undirected: random = kappa_r kappa_s / 2M, planted = diag(kappa)
///   directed:   random = kappa_r kappa_s / 4M, planted (two blocks) =
///               [[(kappa_1 - w) / 2, w], [0, (kappa_2 - w) / 2]]
/// with w = omega12 or min(kappa_1, kappa_2) / 2. kappa is the total
/// (in + out) degree sum per block and sum(kappa) = 2M.
std::vector<double> omega_interpolate(std::span<const double> kappa, double m, double lambda,
                                      bool directed, std::optional<double> omega12 = std::nullopt);

/// Poisson edge draws for fixed theta and omega; kappa is taken from the
/// theta sums per block. Undirected graphs ignore `theta_in`.
Graph realize_edges(const Partition& blocks, std::span<const double> theta_out,
                    std::span<const double> theta_in, std::span<const double> omega, bool directed,
                    std::mt19937_64& rng);

struct SynthResult {
  Graph graph;
  Partition truth;
  /// Undirected graphs fill theta_out only.
  std::vector<double> theta_out;
  std::vector<double> theta_in;
  std::vector<double> kappa_out;  // realized per-block theta sums
  std::vector<double> kappa_in;
  std::vector<double> omega;      // row-major; equals the expected m matrix
  std::vector<double> theta_min;  // per block, power-law blocks only (else 0)
};

/// Draws theta per block, builds omega from the realized theta sums and
/// samples A_uv ~ Poisson(theta_u theta_v omega_rs / (kappa_r kappa_s))
/// for u < v (undirected) or Poisson(theta_out_u theta_in_v omega_rs /
/// (kappa_out_r kappa_in_s)) for u != v (directed). Vertices are numbered
/// block by block.
SynthResult generate(const SynthSpec& spec, std::mt19937_64& rng);

struct Postprocessed {
  Graph graph;
  Partition truth;
  std::vector<VertexId> new_to_old;
};

/// Keeps the giant weakly connected component, or for lambda == 1 the
/// largest component of each block.
Postprocessed postprocess(const Graph& g, const Partition& truth, double lambda);

}  // namespace blockmodel
