#include "blockmodel/likelihood.h"

#include <cmath>
#include <stdexcept>

namespace blockmodel {
namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// m log(m / denom) with the 0 log 0 = 0 convention.
double term(double m, double denom) { return m > 0.0 ? m * std::log(m / denom) : 0.0; }

double kappa_log_size(EdgeCount kappa, VertexId size, const LogTable* table) {
  if (kappa == 0 || size == 0) return 0.0;
  return static_cast<double>(kappa) * (table ? table->log(size) : std::log(static_cast<double>(size)));
}

void require_undirected(const BlockStats& stats, const char* what) {
  if (stats.directed) throw std::invalid_argument(std::string(what) + " needs undirected stats");
}

void require_directed(const BlockStats& stats, const char* what) {
  if (!stats.directed) throw std::invalid_argument(std::string(what) + " needs directed stats");
}

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

bool family_is_directed(ModelFamily family) {
  return family == ModelFamily::kDdc || family == ModelFamily::kOdc;
}

std::string family_name(ModelFamily family) {
  switch (family) {
    case ModelFamily::kSbm: return "sbm";
    case ModelFamily::kDc: return "dc";
    case ModelFamily::kDdc: return "ddc";
    case ModelFamily::kOdc: return "odc";
  }
  return "?";
}

ModelSpec parse_model_name(const std::string& name) {
  ModelSpec spec;
  std::string base = name;
  if (base.rfind("dg-", 0) == 0) {
    spec.degree_generation = DegreePriorSet{};
    base = base.substr(3);
  }
  if (base == "sbm" && !spec.degree_generation) {
    spec.family = ModelFamily::kSbm;
  } else if (base == "dc") {
    spec.family = ModelFamily::kDc;
  } else if (base == "ddc") {
    spec.family = ModelFamily::kDdc;
  } else if (base == "odc") {
    spec.family = ModelFamily::kOdc;
  } else {
    throw std::invalid_argument("unknown model '" + name +
                                "'; expected one of sbm, dc, ddc, odc, dg-dc, dg-ddc, dg-odc");
  }
  return spec;
}

std::string model_name(const ModelSpec& model) {
  return (model.degree_generation ? "dg-" : "") + family_name(model.family);
}

double loglik_dc(const BlockStats& stats) {
  require_undirected(stats, "loglik_dc");
  double sum = 0.0;
  for (BlockId r = 0; r < stats.k; ++r) {
    for (BlockId s = 0; s < stats.k; ++s) {
      sum += term(static_cast<double>(stats.at(r, s)),
                  static_cast<double>(stats.kappa_total[r]) * static_cast<double>(stats.kappa_total[s]));
    }
  }
  return 0.5 * sum;
}

double loglik_ddc(const BlockStats& stats) {
  require_directed(stats, "loglik_ddc");
  double sum = 0.0;
  for (BlockId r = 0; r < stats.k; ++r) {
    for (BlockId s = 0; s < stats.k; ++s) {
      sum += term(static_cast<double>(stats.at(r, s)),
                  static_cast<double>(stats.kappa_out[r]) * static_cast<double>(stats.kappa_in[s]));
    }
  }
  return sum;
}

double loglik_odc(const BlockStats& stats) {
  require_directed(stats, "loglik_odc");
  double sum = 0.0;
  for (BlockId r = 0; r < stats.k; ++r) {
    for (BlockId s = 0; s < stats.k; ++s) {
      sum += term(static_cast<double>(stats.at(r, s)),
                  static_cast<double>(stats.kappa_total[r]) * static_cast<double>(stats.kappa_total[s]));
    }
  }
  return sum;
}

OdcParts loglik_odc_decomposed(const BlockStats& stats) {
  require_directed(stats, "loglik_odc_decomposed");
  OdcParts parts;
  for (BlockId r = 0; r < stats.k; ++r) {
    for (BlockId s = 0; s < stats.k; ++s) {
      const auto m = static_cast<double>(stats.at(r, s));
      const auto mbar = m + static_cast<double>(stats.at(s, r));
      parts.undirected +=
          0.5 * term(mbar, static_cast<double>(stats.kappa_total[r]) *
                               static_cast<double>(stats.kappa_total[s]));
      parts.orientation += term(m, mbar);
    }
  }
  return parts;
}

double loglik_sbm(const BlockStats& stats) {
  require_undirected(stats, "loglik_sbm");
  double sum = 0.0;
  for (BlockId r = 0; r < stats.k; ++r) {
    for (BlockId s = 0; s < stats.k; ++s) {
      sum += term(static_cast<double>(stats.at(r, s)),
                  static_cast<double>(stats.sizes[r]) * static_cast<double>(stats.sizes[s]));
    }
  }
  return 0.5 * sum;
}

double loglik(ModelFamily family, const BlockStats& stats) {
  switch (family) {
    case ModelFamily::kSbm: return loglik_sbm(stats);
    case ModelFamily::kDc: return loglik_dc(stats);
    case ModelFamily::kDdc: return loglik_ddc(stats);
    case ModelFamily::kOdc: return loglik_odc(stats);
  }
  return 0.0;
}

LogTable::LogTable(std::size_t size) : xlogx_(size), log_(size) {
  for (std::size_t i = 0; i < size; ++i) {
    const auto x = static_cast<double>(i);
    xlogx_[i] = blockmodel::xlogx(x);
    log_[i] = i == 0 ? -kInfinity : std::log(x);
  }
}

double LogTable::xlogx(EdgeCount x) const {
  const auto i = static_cast<std::size_t>(x);
  return i < xlogx_.size() ? xlogx_[i] : blockmodel::xlogx(static_cast<double>(x));
}

double LogTable::log(EdgeCount x) const {
  const auto i = static_cast<std::size_t>(x);
  return i < log_.size() ? log_[i] : std::log(static_cast<double>(x));
}

NeighborBlockCounts neighbor_block_counts(const Graph& g, const Partition& p, VertexId v) {
  const auto k = static_cast<std::size_t>(p.num_blocks());
  NeighborBlockCounts c{std::vector<EdgeCount>(k, 0), std::vector<EdgeCount>(k, 0)};
  for (const auto& nb : g.out_neighbors(v)) c.out_to_block[static_cast<std::size_t>(p[nb.vertex])] += nb.count;
  for (const auto& nb : g.in_neighbors(v)) c.in_from_block[static_cast<std::size_t>(p[nb.vertex])] += nb.count;
  return c;
}

namespace {

// Change of m(a, b) when the move is applied.
inline EdgeCount cell_change(const VertexMove& mv, BlockId a, BlockId b) {
  EdgeCount d = 0;
  if (a == mv.from) d -= mv.out_to_block[static_cast<std::size_t>(b)];
  if (a == mv.to) d += mv.out_to_block[static_cast<std::size_t>(b)];
  if (b == mv.from) d -= mv.in_from_block[static_cast<std::size_t>(a)];
  if (b == mv.to) d += mv.in_from_block[static_cast<std::size_t>(a)];
  return d;
}

template <typename F>
void for_each_touched_cell(const BlockStats& stats, const VertexMove& mv, F&& visit) {
  for (BlockId t = 0; t < stats.k; ++t) {
    visit(mv.from, t);
    visit(mv.to, t);
  }
  for (BlockId t = 0; t < stats.k; ++t) {
    if (t == mv.from || t == mv.to) continue;
    visit(t, mv.from);
    visit(t, mv.to);
  }
}

}  // namespace

double delta_loglik(ModelFamily family, const BlockStats& stats, const VertexMove& mv,
                    const LogTable* table) {
  if (mv.from == mv.to) return 0.0;
  auto f = [table](EdgeCount x) { return table ? table->xlogx(x) : xlogx(static_cast<double>(x)); };

  double d_edges = 0.0;
  for_each_touched_cell(stats, mv, [&](BlockId a, BlockId b) {
    const EdgeCount change = cell_change(mv, a, b);
    if (change != 0) {
      const EdgeCount old = stats.at(a, b);
      d_edges += f(old + change) - f(old);
    }
  });

  const auto r = static_cast<std::size_t>(mv.from);
  const auto s = static_cast<std::size_t>(mv.to);
  auto d_kappa = [&](const std::vector<EdgeCount>& kappa, EdgeCount d) {
    return f(kappa[r] - d) + f(kappa[s] + d) - f(kappa[r]) - f(kappa[s]);
  };

  switch (family) {
    case ModelFamily::kDc:
      return 0.5 * d_edges - d_kappa(stats.kappa_total, mv.d_total);
    case ModelFamily::kSbm: {
      const EdgeCount kr = stats.kappa_total[r], ks = stats.kappa_total[s];
      const VertexId nr = stats.sizes[r], ns = stats.sizes[s];
      const double before = kappa_log_size(kr, nr, table) + kappa_log_size(ks, ns, table);
      const double after = kappa_log_size(kr - mv.d_total, nr - 1, table) +
                           kappa_log_size(ks + mv.d_total, ns + 1, table);
      return 0.5 * d_edges - (after - before);
    }
    case ModelFamily::kDdc:
      return d_edges - d_kappa(stats.kappa_out, mv.d_out) - d_kappa(stats.kappa_in, mv.d_in);
    case ModelFamily::kOdc:
      return d_edges - d_kappa(stats.kappa_total, mv.d_total);
  }
  return 0.0;
}

double delta_loglik(ModelFamily family, const Graph& g, const Partition& p, const BlockStats& stats,
                    const Degrees& degrees, VertexId v, BlockId to) {
  const auto counts = neighbor_block_counts(g, p, v);
  const auto i = static_cast<std::size_t>(v);
  const VertexMove mv{v, p[v], to, degrees.out[i], degrees.in[i], degrees.total[i],
                      counts.out_to_block, counts.in_from_block};
  return delta_loglik(family, stats, mv);
}

void apply_move(BlockStats& stats, const VertexMove& mv) {
  if (mv.from == mv.to) return;
  // cell_change depends only on the move, so updating in place is fine as
  // long as each touched cell is visited once.
  for_each_touched_cell(stats, mv, [&](BlockId a, BlockId b) { stats.at(a, b) += cell_change(mv, a, b); });
  const auto r = static_cast<std::size_t>(mv.from);
  const auto s = static_cast<std::size_t>(mv.to);
  stats.kappa_out[r] -= mv.d_out;
  stats.kappa_out[s] += mv.d_out;
  stats.kappa_in[r] -= mv.d_in;
  stats.kappa_in[s] += mv.d_in;
  stats.kappa_total[r] -= mv.d_total;
  stats.kappa_total[s] += mv.d_total;
  --stats.sizes[r];
  ++stats.sizes[s];
}

MleParameters mle_parameters(ModelFamily family, const BlockStats& stats, const Degrees& degrees) {
  if (family_is_directed(family) != stats.directed) {
    throw std::invalid_argument("mle_parameters: " + family_name(family) +
                                " does not match the direction of the stats");
  }
  MleParameters p;
  const auto k = static_cast<std::size_t>(stats.k);
  p.omega.resize(k * k);
  auto to_double = [](const std::vector<EdgeCount>& v) {
    return std::vector<double>(v.begin(), v.end());
  };
  for (BlockId r = 0; r < stats.k; ++r) {
    for (BlockId s = 0; s < stats.k; ++s) {
      const auto m = static_cast<double>(stats.at(r, s));
      const auto idx = static_cast<std::size_t>(r * stats.k + s);
      const auto kr = static_cast<double>(stats.kappa_total[r]);
      const auto ks = static_cast<double>(stats.kappa_total[s]);
      switch (family) {
        case ModelFamily::kSbm:
          p.omega[idx] = ratio(m, static_cast<double>(stats.sizes[r]) * static_cast<double>(stats.sizes[s]));
          break;
        case ModelFamily::kDc:
          p.omega[idx] = ratio(m, kr * ks);
          break;
        case ModelFamily::kDdc:
          p.omega[idx] = ratio(m, static_cast<double>(stats.kappa_out[r]) *
                                      static_cast<double>(stats.kappa_in[s]));
          break;
        case ModelFamily::kOdc:
          p.omega[idx] = ratio(m + static_cast<double>(stats.at(s, r)), kr * ks);
          break;
      }
    }
  }
  switch (family) {
    case ModelFamily::kSbm:
      p.theta.assign(degrees.total.size(), 1.0);
      break;
    case ModelFamily::kDc:
      p.theta = to_double(degrees.total);
      break;
    case ModelFamily::kDdc:
      p.theta_out = to_double(degrees.out);
      p.theta_in = to_double(degrees.in);
      break;
    case ModelFamily::kOdc:
      p.theta = to_double(degrees.total);
      p.rho.resize(k * k);
      p.omega_oriented.resize(k * k);
      for (BlockId r = 0; r < stats.k; ++r) {
        for (BlockId s = 0; s < stats.k; ++s) {
          const auto idx = static_cast<std::size_t>(r * stats.k + s);
          const auto m = static_cast<double>(stats.at(r, s));
          p.rho[idx] = ratio(m, m + static_cast<double>(stats.at(s, r)));
          p.omega_oriented[idx] = ratio(m, static_cast<double>(stats.kappa_total[r]) *
                                               static_cast<double>(stats.kappa_total[s]));
        }
      }
      break;
  }
  return p;
}

}  // namespace blockmodel
