#include "blockmodel/degree_prior.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace blockmodel {
namespace {

constexpr double kMinBracket = 1.0 + 1e-9;
constexpr double kLogHyperLo = -6.907755278982137;  // ln 1e-3
constexpr double kLogHyperHi = 6.907755278982137;   // ln 1e3

void check_in_support(double theta, double theta_min) {
  if (theta < 0.0 || (theta > 0.0 && theta < theta_min)) {
    throw std::invalid_argument("theta " + std::to_string(theta) +
                                " has zero prior probability (cutoff " + std::to_string(theta_min) + ")");
  }
}

// log of (alpha - 1) / (theta_min^(1-alpha) - theta_max^(1-alpha)).
double log_normalizer(double alpha, double theta_min, double theta_max) {
  const double u = alpha - 1.0;
  const double log_min = std::log(theta_min);
  if (std::isinf(theta_max)) return std::log(u) + u * log_min;
  // theta_min^-u - theta_max^-u = theta_min^-u * (1 - exp(-u * D)), D = ln(max/min)
  const double span = std::log(theta_max) - log_min;
  return std::log(u) + u * log_min - std::log(-std::expm1(-u * span));
}

double golden_section_max(const auto& f, double lo, double hi, double tol = 1e-10) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  // The endpoints are never evaluated by the interior probes.
  double best = 0.5 * (a + b);
  double fbest = f(best);
  for (const double x : {lo, hi}) {
    if (const double fx = f(x); fx > fbest) {
      best = x;
      fbest = fx;
    }
  }
  return best;
}

}  // namespace

double fit_alpha(std::span<const double> thetas, double theta_min) {
  if (thetas.empty()) throw std::invalid_argument("fit_alpha: no values");
  double y = 0.0, sum_log = 0.0;
  for (const double t : thetas) {
    check_in_support(t, theta_min);
    if (t > 0.0) {
      y += 1.0;
      sum_log += std::log(t / theta_min);
    }
  }
  if (sum_log <= 0.0) return kInfinity;
  return 1.0 + y / sum_log;
}

double fit_beta(std::span<const double> thetas) {
  if (thetas.empty()) throw std::invalid_argument("fit_beta: no values");
  const auto zeros = std::count(thetas.begin(), thetas.end(), 0.0);
  return static_cast<double>(zeros) / static_cast<double>(thetas.size());
}

double log_density(double theta, const PowerLawParams& p) {
  check_in_support(theta, p.theta_min);
  if (theta > p.theta_max) {
    throw std::invalid_argument("theta " + std::to_string(theta) + " above the upper bound");
  }
  if (theta == 0.0) return std::log(p.beta);
  if (p.alpha <= 1.0) throw std::invalid_argument("power-law exponent must exceed 1");
  return std::log1p(-p.beta) + log_normalizer(p.alpha, p.theta_min, p.theta_max) -
         p.alpha * std::log(theta);
}

double log_prior(std::span<const double> thetas, std::span<const PowerLawParams> per_block,
                 const Partition& partition) {
  if (static_cast<VertexId>(thetas.size()) != partition.size()) {
    throw std::invalid_argument("log_prior: theta count does not match partition");
  }
  if (static_cast<BlockId>(per_block.size()) < partition.num_blocks()) {
    throw std::invalid_argument("log_prior: missing block parameters");
  }
  double sum = 0.0;
  for (VertexId v = 0; v < partition.size(); ++v) {
    sum += log_density(thetas[static_cast<std::size_t>(v)],
                       per_block[static_cast<std::size_t>(partition[v])]);
  }
  return sum;
}

double fit_alpha_bounded(std::span<const double> samples, double x_min, double x_max) {
  if (samples.empty()) throw std::invalid_argument("fit_alpha_bounded: no samples");
  if (!(x_min > 0.0) || !(x_max > x_min)) {
    throw std::invalid_argument("fit_alpha_bounded: need 0 < x_min < x_max");
  }
  double mean_log = 0.0;
  for (const double x : samples) {
    if (x < x_min || x > x_max) {
      throw std::invalid_argument("fit_alpha_bounded: sample outside [x_min, x_max]");
    }
    mean_log += std::log(x);
  }
  mean_log /= static_cast<double>(samples.size());

  const double log_min = std::log(x_min);
  const double span = std::isinf(x_max) ? kInfinity : std::log(x_max) - log_min;
  // Score equation divided by n. With D = ln(x_max / x_min) the bounded term
  // (x_min^(1-a) ln x_min - x_max^(1-a) ln x_max) / (x_min^(1-a) - x_max^(1-a))
  // equals ln x_min - D / expm1((a - 1) D).
  auto residual = [&](double alpha) {
    const double u = alpha - 1.0;
    const double bounded = std::isinf(span) ? 0.0 : span / std::expm1(u * span);
    return 1.0 / u + log_min - bounded - mean_log;
  };

  double lo = kMinBracket, hi = kMaxExponent;
  double r_lo = residual(lo), r_hi = residual(hi);
  if (r_lo < 0.0 || r_hi > 0.0) {
    throw SolverError("fit_alpha_bounded: no sign change of the score in (1, 64]");
  }
  if (r_hi == 0.0) return hi;
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double r = residual(mid);
    if (std::abs(r) <= 1e-9 && hi - lo < 1e-12) return mid;
    if (r > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-15) break;
  }
  return 0.5 * (lo + hi);
}

double truncated_power_law_mean(double alpha, double theta_min, double theta_max) {
  if (!(alpha > 1.0) || !(theta_min > 0.0) || !(theta_max > theta_min)) {
    throw std::invalid_argument("truncated_power_law_mean: invalid parameters");
  }
  if (std::isinf(theta_max)) {
    return alpha > 2.0 ? theta_min * (alpha - 1.0) / (alpha - 2.0) : kInfinity;
  }
  const double c = std::exp(log_normalizer(alpha, theta_min, theta_max));
  if (std::abs(alpha - 2.0) < 1e-12) return c * std::log(theta_max / theta_min);
  return c * (std::pow(theta_max, 2.0 - alpha) - std::pow(theta_min, 2.0 - alpha)) / (2.0 - alpha);
}

double theta_min_for_mean(double alpha, double theta_max, double target_mean) {
  if (!(target_mean > 0.0) || !(target_mean < theta_max)) {
    throw std::invalid_argument("theta_min_for_mean: target must lie in (0, theta_max)");
  }
  // The mean increases with theta_min; bisect in log space.
  double lo = std::log(theta_max) - 60.0;
  double hi = std::log(theta_max) + std::log1p(-1e-12);
  auto mean_at = [&](double log_t) { return truncated_power_law_mean(alpha, std::exp(log_t), theta_max); };
  if (mean_at(lo) > target_mean || mean_at(hi) < target_mean) {
    throw SolverError("theta_min_for_mean: target mean not attainable");
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mean_at(mid) < target_mean) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

double sample_power_law(std::mt19937_64& rng, double alpha, double theta_min, double theta_max,
                        double beta) {
  if (!(alpha > 1.0) || !(theta_min > 0.0) || !(theta_max > theta_min) || beta < 0.0 || beta > 1.0) {
    throw std::invalid_argument("sample_power_law: invalid parameters");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  if (beta > 0.0 && unit(rng) < beta) return 0.0;
  const double u = alpha - 1.0;
  const double q = unit(rng);
  // Inverse CDF in log space: x = theta_min * (1 - q (1 - r))^(-1/u),
  // r = (theta_min / theta_max)^u.
  const double r = std::isinf(theta_max) ? 0.0 : std::exp(-u * std::log(theta_max / theta_min));
  const double x = theta_min * std::pow(1.0 - q * (1.0 - r), -1.0 / u);
  return std::clamp(x, theta_min, theta_max);
}

double gamma_marginal_term(EdgeCount d, double alpha, double beta) {
  const auto dd = static_cast<double>(d);
  return alpha * std::log(beta) + std::lgamma(alpha + dd) - (alpha + dd) * std::log1p(beta) -
         std::lgamma(dd + 1.0) - std::lgamma(alpha);
}

double gamma_marginal_loglik(const Degrees& degrees, const Partition& partition,
                             const GammaHyper& hyper) {
  double sum = 0.0;
  for (VertexId v = 0; v < partition.size(); ++v) {
    const auto r = static_cast<std::size_t>(partition[v]);
    const auto i = static_cast<std::size_t>(v);
    sum += gamma_marginal_term(degrees.out[i], hyper.alpha_out.at(r), hyper.beta_out.at(r));
    sum += gamma_marginal_term(degrees.in[i], hyper.alpha_in.at(r), hyper.beta_in.at(r));
  }
  return sum;
}

std::pair<double, double> fit_gamma_pair(std::span<const EdgeCount> degrees, bool* converged,
                                         int* sweeps) {
  std::map<EdgeCount, double> histogram;
  for (const EdgeCount d : degrees) histogram[d] += 1.0;
  auto objective = [&](double log_alpha, double log_beta) {
    const double a = std::exp(log_alpha), b = std::exp(log_beta);
    double sum = 0.0;
    for (const auto& [d, count] : histogram) sum += count * gamma_marginal_term(d, a, b);
    return sum;
  };

  // For fixed alpha the best beta is alpha / mean degree (clamped to the
  // box), which removes the alpha-beta ridge before the coordinate sweeps.
  double total = 0.0;
  for (const auto& [d, count] : histogram) total += count * static_cast<double>(d);
  const double log_mean = std::log(total / static_cast<double>(degrees.size()));
  auto profiled_beta = [&](double log_alpha) {
    return std::isfinite(log_mean) ? std::clamp(log_alpha - log_mean, kLogHyperLo, kLogHyperHi) : kLogHyperHi;
  };
  double la = golden_section_max([&](double x) { return objective(x, profiled_beta(x)); }, kLogHyperLo,
                                 kLogHyperHi);
  double lb = profiled_beta(la);
  double current = objective(la, lb);
  bool done = false;
  int sweep = 0;
  for (; sweep < 200 && !done; ++sweep) {
    la = golden_section_max([&](double x) { return objective(x, lb); }, kLogHyperLo, kLogHyperHi);
    lb = golden_section_max([&](double x) { return objective(la, x); }, kLogHyperLo, kLogHyperHi);
    const double next = objective(la, lb);
    done = next - current < 1e-8;
    current = std::max(current, next);
  }
  if (converged) *converged = done;
  if (sweeps) *sweeps = sweep;
  return {std::exp(la), std::exp(lb)};
}

GammaFit fit_gamma_hyper(const Degrees& degrees, const Partition& partition) {
  const auto k = static_cast<std::size_t>(partition.num_blocks());
  std::vector<std::vector<EdgeCount>> out(k), in(k);
  for (VertexId v = 0; v < partition.size(); ++v) {
    const auto r = static_cast<std::size_t>(partition[v]);
    out[r].push_back(degrees.out[static_cast<std::size_t>(v)]);
    in[r].push_back(degrees.in[static_cast<std::size_t>(v)]);
  }
  GammaFit fit;
  auto& h = fit.hyper;
  for (std::size_t r = 0; r < k; ++r) {
    if (out[r].empty()) {
      throw std::invalid_argument("fit_gamma_hyper: block " + std::to_string(r) + " is empty");
    }
    bool ok = true;
    int sweeps = 0;
    auto [ao, bo] = fit_gamma_pair(out[r], &ok, &sweeps);
    fit.converged = fit.converged && ok;
    fit.sweeps = std::max(fit.sweeps, sweeps);
    auto [ai, bi] = fit_gamma_pair(in[r], &ok, &sweeps);
    fit.converged = fit.converged && ok;
    fit.sweeps = std::max(fit.sweeps, sweeps);
    h.alpha_out.push_back(ao);
    h.beta_out.push_back(bo);
    h.alpha_in.push_back(ai);
    h.beta_in.push_back(bi);
  }
  return fit;
}

void DegreeSummary::add(EdgeCount d, int sign) {
  count += sign;
  if (d == 0) {
    zeros += sign;
    return;
  }
  const auto x = static_cast<double>(d);
  sum_log += sign * std::log(x);
  sum_degree += sign * x;
  sum_log_fact += sign * std::lgamma(x + 1.0);
}

double block_penalty(const DegreeSummary& s, const BlockPrior& prior) {
  if (s.count <= 0) return 0.0;
  const auto n = static_cast<double>(s.count);

  if (prior.family == PriorFamily::kPoisson) {
    const double mean = prior.mean ? *prior.mean : s.sum_degree / n;
    if (mean <= 0.0) return s.sum_degree > 0.0 ? -kInfinity : -s.sum_log_fact;
    return s.sum_degree * std::log(mean) - n * mean - s.sum_log_fact;
  }

  const auto z = static_cast<double>(s.zeros);
  const double y = n - z;
  double value = 0.0;
  if (prior.beta) {
    // Fixed zero mass of exactly 0 or 1 would make the objective infinite.
    const double beta = std::clamp(*prior.beta, 1e-12, 1.0 - 1e-12);
    value += z * std::log(beta) + y * std::log1p(-beta);
  } else {
    if (z > 0.0) value += z * std::log(z / n);
    if (y > 0.0) value += y * std::log(y / n);
  }
  if (y > 0.0) {
    double alpha = 0.0;
    if (prior.alpha) {
      alpha = *prior.alpha;
    } else {
      const double scaled = s.sum_log - y * std::log(prior.theta_min);
      alpha = scaled > 0.0 ? std::min(1.0 + y / scaled, kMaxExponent) : kMaxExponent;
    }
    value += y * log_normalizer(alpha, prior.theta_min, prior.theta_max) - alpha * s.sum_log;
  }
  return value;
}

DegreePenalty::DegreePenalty(const Degrees& degrees, const Partition& partition, Channels channels,
                             const DegreePriorSet& priors) {
  const BlockId k = partition.num_blocks();
  auto make = [&](const std::vector<EdgeCount>& degree, const std::vector<BlockPrior>& given) {
    if (static_cast<BlockId>(given.size()) > k) {
      throw std::invalid_argument("degree priors given for " + std::to_string(given.size()) +
                                  " blocks, model has " + std::to_string(k));
    }
    Channel c;
    c.degree = degree;
    c.priors = given;
    c.priors.resize(static_cast<std::size_t>(k));
    channels_.push_back(std::move(c));
  };
  if (channels == Channels::kTotal) {
    make(degrees.total, priors.total);
  } else {
    make(degrees.out, priors.out);
    make(degrees.in, priors.in.empty() ? priors.out : priors.in);
  }
  rebuild(partition);
}

double DegreePenalty::rebuild(const Partition& partition) {
  value_ = 0.0;
  const auto k = static_cast<std::size_t>(partition.num_blocks());
  for (auto& c : channels_) {
    c.blocks.assign(k, DegreeSummary{});
    c.penalty.assign(k, 0.0);
    for (VertexId v = 0; v < partition.size(); ++v) {
      c.blocks[static_cast<std::size_t>(partition[v])].add(c.degree[static_cast<std::size_t>(v)]);
    }
    for (std::size_t r = 0; r < k; ++r) {
      c.penalty[r] = block_penalty(c.blocks[r], c.priors[r]);
      value_ += c.penalty[r];
    }
  }
  return value_;
}

double DegreePenalty::channel_delta(const Channel& c, VertexId v, BlockId from, BlockId to) const {
  const auto r = static_cast<std::size_t>(from);
  const auto s = static_cast<std::size_t>(to);
  const EdgeCount d = c.degree[static_cast<std::size_t>(v)];
  DegreeSummary a = c.blocks[r], b = c.blocks[s];
  a.add(d, -1);
  b.add(d, +1);
  return block_penalty(a, c.priors[r]) + block_penalty(b, c.priors[s]) - c.penalty[r] - c.penalty[s];
}

double DegreePenalty::delta(VertexId v, BlockId from, BlockId to) const {
  if (from == to) return 0.0;
  double sum = 0.0;
  for (const auto& c : channels_) sum += channel_delta(c, v, from, to);
  return sum;
}

void DegreePenalty::move(VertexId v, BlockId from, BlockId to) {
  if (from == to) return;
  const auto r = static_cast<std::size_t>(from);
  const auto s = static_cast<std::size_t>(to);
  for (auto& c : channels_) {
    const EdgeCount d = c.degree[static_cast<std::size_t>(v)];
    c.blocks[r].add(d, -1);
    c.blocks[s].add(d, +1);
    const double pr = block_penalty(c.blocks[r], c.priors[r]);
    const double ps = block_penalty(c.blocks[s], c.priors[s]);
    value_ += pr + ps - c.penalty[r] - c.penalty[s];
    c.penalty[r] = pr;
    c.penalty[s] = ps;
  }
}

const BlockPrior& DegreePenalty::prior(int channel, BlockId r) const {
  return channels_.at(static_cast<std::size_t>(channel)).priors.at(static_cast<std::size_t>(r));
}

}  // namespace blockmodel
