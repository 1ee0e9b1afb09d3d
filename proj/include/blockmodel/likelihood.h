#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blockmodel/degree_prior.h"
#include "blockmodel/graph.h"

namespace blockmodel {

// All log-likelihoods below are natural-log profile likelihoods with the
// partition-independent constants dropped. Values from different families
// are not comparable. Terms with m_rs = 0 (and blocks with kappa_r = 0)
// contribute 0.

enum class ModelFamily { kSbm, kDc, kDdc, kOdc };

/// SBM and DC are undirected models; DDC and ODC need directed input.
bool family_is_directed(ModelFamily family);

std::string family_name(ModelFamily family);

struct ModelSpec {
  ModelFamily family = ModelFamily::kDc;
  /// Present for degree-generated variants (not allowed with SBM).
  std::optional<DegreePriorSet> degree_generation;

  bool operator==(const ModelSpec&) const = default;
};

/// Parses sbm, dc, ddc, odc, dg-dc, dg-ddc, dg-odc. Throws
/// std::invalid_argument listing the accepted names.
ModelSpec parse_model_name(const std::string& name);
std::string model_name(const ModelSpec& model);

/// (1/2) sum_rs m_rs log(m_rs / (kappa_r kappa_s))
double loglik_dc(const BlockStats& stats);

/// sum_rs m_rs log(m_rs / (kappa_out_r kappa_in_s))
double loglik_ddc(const BlockStats& stats);

/// sum_rs m_rs log(m_rs / (kappa_r kappa_s)), kappa = kappa_in + kappa_out
double loglik_odc(const BlockStats& stats);

/// Undirected degree-corrected term of the projected graph plus the edge
/// orientation term at rho_rs = m_rs / (m_rs + m_sr).
struct OdcParts {
  double undirected = 0.0;
  double orientation = 0.0;
  double total() const { return undirected + orientation; }
};
OdcParts loglik_odc_decomposed(const BlockStats& stats);

/// (1/2) sum_rs m_rs log(m_rs / (n_r n_s)) on undirected stats.
double loglik_sbm(const BlockStats& stats);

double loglik(ModelFamily family, const BlockStats& stats);

/// Caches x log x and log x for small non-negative integers.
class LogTable {
 public:
  explicit LogTable(std::size_t size = 0);

  double xlogx(EdgeCount x) const;
  double log(EdgeCount x) const;

 private:
  std::vector<double> xlogx_;
  std::vector<double> log_;
};

/// A candidate single-vertex move together with the vertex's edge counts to
/// and from each block under the current partition (self excluded).
struct VertexMove {
  VertexId vertex = 0;
  BlockId from = 0;
  BlockId to = 0;
  EdgeCount d_out = 0;
  EdgeCount d_in = 0;
  EdgeCount d_total = 0;
  std::span<const EdgeCount> out_to_block;   // edges vertex -> block t
  std::span<const EdgeCount> in_from_block;  // edges block t -> vertex
};

struct NeighborBlockCounts {
  std::vector<EdgeCount> out_to_block;
  std::vector<EdgeCount> in_from_block;
};

NeighborBlockCounts neighbor_block_counts(const Graph& g, const Partition& p, VertexId v);

/// loglik(after) - loglik(before) touching only rows and columns `from`, `to`.
double delta_loglik(ModelFamily family, const BlockStats& stats, const VertexMove& move,
                    const LogTable* table = nullptr);

/// Convenience overload that gathers the neighbor counts itself.
double delta_loglik(ModelFamily family, const Graph& g, const Partition& p,
                    const BlockStats& stats, const Degrees& degrees, VertexId v, BlockId to);

/// Applies the move to the sufficient statistics in place.
void apply_move(BlockStats& stats, const VertexMove& move);

struct MleParameters {
  /// DC, ODC: total degrees; SBM: all ones; DDC: empty.
  std::vector<double> theta;
  /// DDC only.
  std::vector<double> theta_out;
  std::vector<double> theta_in;
  /// k x k, row-major. SBM: m/(n n); DC: m/(k k); DDC: m/(k_out k_in);
  /// ODC: mbar/(k k) for the undirected part.
  std::vector<std::optional<double>> omega;
  /// ODC only: rho_rs = m_rs / mbar_rs, and omega'_rs = m_rs / (k_r k_s).
  std::vector<std::optional<double>> rho;
  std::vector<std::optional<double>> omega_oriented;
};

MleParameters mle_parameters(ModelFamily family, const BlockStats& stats, const Degrees& degrees);

}  // namespace blockmodel
