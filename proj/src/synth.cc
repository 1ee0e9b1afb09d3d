#include "blockmodel/synth.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace blockmodel {
namespace {

std::string block_name(std::size_t r) { return "block " + std::to_string(r); }

double resolve_theta_min(const BlockDegreeSpec& b) {
  return b.theta_min ? *b.theta_min : theta_min_for_mean(b.alpha, b.theta_max, b.mean);
}

void draw_thetas(const BlockDegreeSpec& b, double theta_min, std::mt19937_64& rng,
                 std::span<double> out) {
  if (b.family == PriorFamily::kPoisson && b.poisson_theta == PoissonTheta::kConstant) {
    std::fill(out.begin(), out.end(), b.mean);
  } else if (b.family == PriorFamily::kPoisson) {
    std::poisson_distribution<long long> draw(b.mean);
    for (auto& t : out) t = static_cast<double>(draw(rng));
  } else {
    for (auto& t : out) t = sample_power_law(rng, b.alpha, theta_min, b.theta_max);
  }
}

}  // namespace

void validate(const SynthSpec& spec) {
  if (spec.n < 2) throw std::invalid_argument("n must be at least 2");
  if (!(spec.lambda >= 0.0 && spec.lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1], got " + std::to_string(spec.lambda));
  }
  if (spec.fractions.empty()) throw std::invalid_argument("at least one block is required");
  if (spec.fractions.size() != spec.blocks.size()) {
    throw std::invalid_argument("block fractions and block degree specs differ in count");
  }
  double sum = 0.0;
  for (const double f : spec.fractions) {
    if (!(f > 0.0)) throw std::invalid_argument("block fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("block fractions must sum to 1");
  for (std::size_t r = 0; r < spec.blocks.size(); ++r) {
    const auto& b = spec.blocks[r];
    if (b.family == PriorFamily::kPoisson) {
      if (!(b.mean > 0.0)) throw std::invalid_argument(block_name(r) + ": Poisson mean must be positive");
      continue;
    }
    if (!(b.alpha > 1.0)) throw std::invalid_argument(block_name(r) + ": alpha must exceed 1");
    if (b.theta_min && !(*b.theta_min > 0.0 && *b.theta_min < b.theta_max)) {
      throw std::invalid_argument(block_name(r) + ": need 0 < theta_min < theta_max");
    }
    if (!b.theta_min && !(b.mean > 0.0 && b.mean < b.theta_max)) {
      throw std::invalid_argument(block_name(r) + ": need 0 < mean < theta_max");
    }
  }
  if (spec.directed && spec.lambda > 0.0 && spec.blocks.size() != 2) {
    throw std::invalid_argument("the directed planted matrix is defined for two blocks");
  }
  if (spec.omega12 && !(*spec.omega12 >= 0.0)) throw std::invalid_argument("omega12 must be non-negative");
  if (spec.shared_theta && !spec.directed) throw std::invalid_argument("shared theta needs a directed spec");
}

std::vector<VertexId> block_sizes(const SynthSpec& spec) {
  std::vector<VertexId> sizes;
  VertexId used = 0;
  for (std::size_t r = 0; r + 1 < spec.fractions.size(); ++r) {
    const auto s = static_cast<VertexId>(std::lround(spec.fractions[r] * spec.n));
    sizes.push_back(s);
    used += s;
  }
  if (used > spec.n) throw std::invalid_argument("block fractions exceed n");
  sizes.push_back(spec.n - used);
  return sizes;
}

std::vector<double> omega_interpolate(std::span<const double> kappa, double m, double lambda,
                                      bool directed, std::optional<double> omega12) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0, 1]");
  const std::size_t k = kappa.size();
  std::vector<double> random(k * k, 0.0), planted(k * k, 0.0);
  if (m > 0.0) {
    const double denom = (directed ? 4.0 : 2.0) * m;
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t s = 0; s < k; ++s) random[r * k + s] = kappa[r] * kappa[s] / denom;
    }
  }
  if (!directed) {
    for (std::size_t r = 0; r < k; ++r) planted[r * k + r] = kappa[r];
  } else if (k == 2) {
    const double w = omega12 ? *omega12 : 0.5 * std::min(kappa[0], kappa[1]);
    planted = {(kappa[0] - w) / 2.0, w, 0.0, (kappa[1] - w) / 2.0};
  } else if (lambda > 0.0) {
    throw std::invalid_argument("the directed planted matrix is defined for two blocks");
  }
  std::vector<double> omega(k * k);
  for (std::size_t i = 0; i < k * k; ++i) omega[i] = lambda * planted[i] + (1.0 - lambda) * random[i];
  return omega;
}

SynthResult generate(const SynthSpec& spec, std::mt19937_64& rng) {
  validate(spec);
  const auto sizes = block_sizes(spec);
  const std::size_t k = sizes.size();
  const auto n = static_cast<std::size_t>(spec.n);

  SynthResult out;
  std::vector<BlockId> labels(n);
  std::vector<std::size_t> start(k + 1, 0);
  for (std::size_t r = 0; r < k; ++r) {
    start[r + 1] = start[r] + static_cast<std::size_t>(sizes[r]);
    std::fill(labels.begin() + static_cast<std::ptrdiff_t>(start[r]),
              labels.begin() + static_cast<std::ptrdiff_t>(start[r + 1]), static_cast<BlockId>(r));
  }
  out.truth = Partition(static_cast<BlockId>(k), labels);

  out.theta_out.assign(n, 0.0);
  if (spec.directed) out.theta_in.assign(n, 0.0);
  out.theta_min.assign(k, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    const auto& b = spec.blocks[r];
    const double tmin = b.family == PriorFamily::kPowerLaw ? resolve_theta_min(b) : 0.0;
    out.theta_min[r] = tmin;
    const auto len = start[r + 1] - start[r];
    draw_thetas(b, tmin, rng, std::span<double>(out.theta_out).subspan(start[r], len));
    if (spec.directed && !spec.shared_theta) {
      draw_thetas(b, tmin, rng, std::span<double>(out.theta_in).subspan(start[r], len));
    }
  }

  if (spec.directed && spec.shared_theta) out.theta_in = out.theta_out;

  auto block_sums = [&](const std::vector<double>& theta) {
    std::vector<double> kappa(k, 0.0);
    for (std::size_t u = 0; u < n; ++u) kappa[static_cast<std::size_t>(labels[u])] += theta[u];
    return kappa;
  };
  out.kappa_out = block_sums(out.theta_out);
  out.kappa_in = spec.directed ? block_sums(out.theta_in) : out.kappa_out;

  std::vector<double> kappa(k);
  for (std::size_t r = 0; r < k; ++r) {
    kappa[r] = spec.directed ? out.kappa_out[r] + out.kappa_in[r] : out.kappa_out[r];
  }
  const double m = std::accumulate(kappa.begin(), kappa.end(), 0.0) / 2.0;
  out.omega = omega_interpolate(kappa, m, spec.lambda, spec.directed, spec.omega12);

  out.graph = realize_edges(out.truth, out.theta_out, out.theta_in, out.omega, spec.directed, rng);
  return out;
}

Graph realize_edges(const Partition& blocks, std::span<const double> theta_out,
                    std::span<const double> theta_in, std::span<const double> omega, bool directed,
                    std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(blocks.size());
  const auto k = static_cast<std::size_t>(blocks.num_blocks());
  if (!directed) theta_in = theta_out;
  if (theta_out.size() != n || theta_in.size() != n || omega.size() != k * k) {
    throw std::invalid_argument("realize_edges: theta or omega sizes do not match the partition");
  }
  const auto labels = blocks.labels();
  std::vector<double> kappa_out(k, 0.0), kappa_in(k, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    kappa_out[static_cast<std::size_t>(labels[u])] += theta_out[u];
    kappa_in[static_cast<std::size_t>(labels[u])] += theta_in[u];
  }
  // Per block pair: omega_rs / (kappa_r kappa_s), so that E[m_rs] = omega_rs.
  std::vector<double> scale(k * k, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t s = 0; s < k; ++s) {
      const double denom = kappa_out[r] * kappa_in[s];
      scale[r * k + s] = denom > 0.0 ? omega[r * k + s] / denom : 0.0;
    }
  }

  std::vector<EdgeRecord> edges;
  auto draw_edge = [&](std::size_t u, std::size_t v) {
    const double rate = theta_out[u] * theta_in[v] *
                        scale[static_cast<std::size_t>(labels[u]) * k + static_cast<std::size_t>(labels[v])];
    if (rate <= 0.0) return;
    const long long count = std::poisson_distribution<long long>(rate)(rng);
    if (count > 0) {
      edges.push_back(EdgeRecord{static_cast<VertexId>(u), static_cast<VertexId>(v), static_cast<EdgeCount>(count)});
    }
  };
  for (std::size_t u = 0; u < n; ++u) {
    if (directed) {
      for (std::size_t v = 0; v < n; ++v) {
        if (u != v) draw_edge(u, v);
      }
    } else {
      for (std::size_t v = u + 1; v < n; ++v) draw_edge(u, v);
    }
  }
  return Graph(static_cast<VertexId>(n), directed, std::move(edges));
}

Postprocessed postprocess(const Graph& g, const Partition& truth, double lambda) {
  const bool per_block = lambda == 1.0;
  Subgraph sub = giant_component(g, per_block ? ComponentMode::kPerBlock : ComponentMode::kWeak,
                                 per_block ? &truth : nullptr);
  Postprocessed out;
  out.truth = restrict_partition(truth, sub.new_to_old);
  out.graph = std::move(sub.graph);
  out.new_to_old = std::move(sub.new_to_old);
  return out;
}

}  // namespace blockmodel
