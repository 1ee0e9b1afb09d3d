#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "blockmodel/graph.h"

namespace blockmodel {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Upper end of the exponent bracket. Also caps refitted exponents when a
/// block's nonzero degrees all sit at the cutoff.
inline constexpr double kMaxExponent = 64.0;

/// Zero-inflated continuous power law on [theta_min, theta_max]:
///   P(0) = beta,  p(x) = (1 - beta) * C * x^-alpha  for x >= theta_min,
/// with C = (alpha - 1) / (theta_min^(1-alpha) - theta_max^(1-alpha)).
struct PowerLawParams {
  double alpha = 2.0;
  double beta = 0.0;
  double theta_min = 1.0;
  double theta_max = kInfinity;
};

enum class PriorFamily { kPowerLaw, kPoisson };

/// Degree prior for one block and one degree channel. Unset parameters are
/// refit from the block's current degrees whenever the block changes.
struct BlockPrior {
  PriorFamily family = PriorFamily::kPowerLaw;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> mean;  // Poisson only
  double theta_min = 1.0;
  double theta_max = kInfinity;

  bool operator==(const BlockPrior&) const = default;
};

/// Priors attached to block labels. `total` is used by DG-DC and DG-ODC;
/// DG-DDC uses `out` and `in`. Missing blocks default to a refit power law.
struct DegreePriorSet {
  std::vector<BlockPrior> total;
  std::vector<BlockPrior> out;
  std::vector<BlockPrior> in;

  bool operator==(const DegreePriorSet&) const = default;
};

/// 1 + y / sum(ln(theta / theta_min)) over the nonzero values. Returns
/// +infinity when every nonzero value equals theta_min.
double fit_alpha(std::span<const double> thetas, double theta_min = 1.0);

/// Fraction of zeros.
double fit_beta(std::span<const double> thetas);

/// log P(theta | params); throws for theta in (0, theta_min) or above theta_max.
double log_density(double theta, const PowerLawParams& params);

/// sum_u log P(theta_u | params[g_u]).
double log_prior(std::span<const double> thetas, std::span<const PowerLawParams> per_block,
                 const Partition& partition);

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Maximum-likelihood exponent of a power law bounded to [x_min, x_max]
/// (x_max may be infinite), by bisection on alpha in (1 + 1e-9, 64].
double fit_alpha_bounded(std::span<const double> samples, double x_min, double x_max);

/// Mean of the (non-inflated) truncated power law.
double truncated_power_law_mean(double alpha, double theta_min, double theta_max);

/// theta_min giving the requested truncated mean for fixed alpha and upper
/// bound.
double theta_min_for_mean(double alpha, double theta_max, double target_mean);

/// With probability beta returns 0, otherwise an inverse-CDF draw from the
/// truncated power law.
double sample_power_law(std::mt19937_64& rng, double alpha, double theta_min, double theta_max,
                        double beta = 0.0);

/// Gamma(shape, rate) hyperparameters per block, separately for out- and
/// in-degrees.
struct GammaHyper {
  std::vector<double> alpha_out, beta_out;
  std::vector<double> alpha_in, beta_in;
};

/// log of the closed-form Gamma-Poisson marginal for one degree.
double gamma_marginal_term(EdgeCount d, double alpha, double beta);

/// Sum over vertices and both directions of gamma_marginal_term.
double gamma_marginal_loglik(const Degrees& degrees, const Partition& partition,
                             const GammaHyper& hyper);

struct GammaFit {
  GammaHyper hyper;
  bool converged = true;
  int sweeps = 0;
};

/// Maximizes the marginal per block and direction with coordinate-wise
/// golden-section search over log(alpha), log(beta) in [1e-3, 1e3].
GammaFit fit_gamma_hyper(const Degrees& degrees, const Partition& partition);

/// Fits (alpha, beta) for one set of degrees; exposed for testing.
std::pair<double, double> fit_gamma_pair(std::span<const EdgeCount> degrees, bool* converged = nullptr,
                                         int* sweeps = nullptr);

/// Per-block sufficient statistics of one degree channel.
struct DegreeSummary {
  EdgeCount count = 0;
  EdgeCount zeros = 0;
  double sum_log = 0.0;       // sum ln d over d > 0
  double sum_degree = 0.0;    // sum d
  double sum_log_fact = 0.0;  // sum ln d!

  void add(EdgeCount d, int sign = 1);
};

/// Log-penalty of a block under its prior, refitting unset parameters by
/// maximum likelihood. Empty blocks contribute 0.
double block_penalty(const DegreeSummary& summary, const BlockPrior& prior);

/// Maintains per-block degree summaries and the total DG penalty
/// sum_u log P(d_u | psi_{g_u}) for the channels a model uses.
class DegreePenalty {
 public:
  enum class Channels { kTotal, kOutIn };

  DegreePenalty(const Degrees& degrees, const Partition& partition, Channels channels,
                const DegreePriorSet& priors);

  double value() const { return value_; }

  /// Penalty change if `v` moved from its block `from` to `to`.
  double delta(VertexId v, BlockId from, BlockId to) const;
  void move(VertexId v, BlockId from, BlockId to);

  /// Rebuilds every summary from scratch, discarding accumulated
  /// floating-point drift.
  double rebuild(const Partition& partition);

  const BlockPrior& prior(int channel, BlockId r) const;

 private:
  struct Channel {
    std::vector<EdgeCount> degree;
    std::vector<DegreeSummary> blocks;
    std::vector<BlockPrior> priors;
    std::vector<double> penalty;
  };

  double channel_delta(const Channel& c, VertexId v, BlockId from, BlockId to) const;

  std::vector<Channel> channels_;
  double value_ = 0.0;
};

}  // namespace blockmodel
