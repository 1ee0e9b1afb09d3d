#pragma once

#include <optional>
#include <vector>

#include "blockmodel/degree_prior.h"
#include "blockmodel/graph.h"
#include "blockmodel/likelihood.h"

namespace blockmodel {

/// Family log-likelihood plus, for DG variants, the degree penalty with
/// theta set to the observed degrees.
double dg_objective(const ModelSpec& model, const BlockStats& stats, const Degrees& degrees,
                    const Partition& partition);

/// Convenience wrapper that computes the stats itself.
double full_objective(const Graph& g, const ModelSpec& model, const Partition& partition);

/// Mutable (graph, partition) pair with cached block statistics and
/// per-vertex neighbor block counts, so that a single-vertex move delta costs
/// O(K) and applying it costs O(K + degree).
///
/// The graph must outlive the state and its direction must match the model
/// family.
class ModelState {
 public:
  ModelState(const Graph& g, ModelSpec model, Partition partition);

  const Graph& graph() const { return *graph_; }
  const ModelSpec& model() const { return model_; }
  const Partition& partition() const { return partition_; }
  const BlockStats& stats() const { return stats_; }
  const Degrees& degrees() const { return degrees_; }
  BlockId num_blocks() const { return partition_.num_blocks(); }

  double objective() const { return objective_; }

  double move_delta(VertexId v, BlockId to) const;
  void move(VertexId v, BlockId to);

  /// Replaces the partition and rebuilds every cache.
  void assign(Partition partition);

  /// Recomputes the objective and caches from scratch.
  void resync();

 private:
  VertexMove make_move(VertexId v, BlockId to) const;
  std::span<const EdgeCount> row(const std::vector<EdgeCount>& table, VertexId v) const;

  const Graph* graph_;
  ModelSpec model_;
  Partition partition_;
  Degrees degrees_;
  BlockStats stats_;
  LogTable table_;
  std::vector<EdgeCount> out_to_;   // n x k: edges v -> block t
  std::vector<EdgeCount> in_from_;  // n x k: edges block t -> v; unused when undirected
  std::optional<DegreePenalty> penalty_;
  double objective_ = 0.0;
};

}  // namespace blockmodel
