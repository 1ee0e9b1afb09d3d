#include "blockmodel/model_state.h"

#include <algorithm>
#include <stdexcept>

namespace blockmodel {
namespace {

constexpr std::size_t kMaxTableSize = std::size_t{1} << 22;

DegreePenalty::Channels channels_for(ModelFamily family) {
  return family == ModelFamily::kDdc ? DegreePenalty::Channels::kOutIn : DegreePenalty::Channels::kTotal;
}

void check_model(const ModelSpec& model) {
  if (model.degree_generation && model.family == ModelFamily::kSbm) {
    throw std::invalid_argument("degree generation is not defined for the uncorrected model");
  }
}

}  // namespace

double dg_objective(const ModelSpec& model, const BlockStats& stats, const Degrees& degrees,
                    const Partition& partition) {
  check_model(model);
  double value = loglik(model.family, stats);
  if (model.degree_generation) {
    DegreePenalty penalty(degrees, partition, channels_for(model.family), *model.degree_generation);
    value += penalty.value();
  }
  return value;
}

double full_objective(const Graph& g, const ModelSpec& model, const Partition& partition) {
  return dg_objective(model, block_stats(g, partition), degrees(g), partition);
}

ModelState::ModelState(const Graph& g, ModelSpec model, Partition partition)
    : graph_(&g), model_(std::move(model)), partition_(std::move(partition)), degrees_(blockmodel::degrees(g)) {
  check_model(model_);
  if (g.directed() != family_is_directed(model_.family)) {
    throw std::invalid_argument("model " + model_name(model_) + " needs a" +
                                (g.directed() ? "n undirected" : " directed") + " graph");
  }
  if (partition_.size() != g.num_vertices()) {
    throw std::invalid_argument("partition size does not match the graph");
  }
  const auto cells = static_cast<std::size_t>(2 * g.num_edges() + 2);
  table_ = LogTable(std::min(std::max(cells, static_cast<std::size_t>(g.num_vertices()) + 2), kMaxTableSize));
  resync();
}

void ModelState::assign(Partition partition) {
  if (partition.size() != graph_->num_vertices()) {
    throw std::invalid_argument("partition size does not match the graph");
  }
  partition_ = std::move(partition);
  resync();
}

void ModelState::resync() {
  const Graph& g = *graph_;
  const auto k = static_cast<std::size_t>(partition_.num_blocks());
  const auto n = static_cast<std::size_t>(g.num_vertices());
  stats_ = block_stats(g, partition_);
  out_to_.assign(n * k, 0);
  if (g.directed()) in_from_.assign(n * k, 0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto base = static_cast<std::size_t>(v) * k;
    for (const auto& nb : g.out_neighbors(v)) {
      out_to_[base + static_cast<std::size_t>(partition_[nb.vertex])] += nb.count;
    }
    if (!g.directed()) continue;
    for (const auto& nb : g.in_neighbors(v)) {
      in_from_[base + static_cast<std::size_t>(partition_[nb.vertex])] += nb.count;
    }
  }
  objective_ = loglik(model_.family, stats_);
  if (model_.degree_generation) {
    penalty_.emplace(degrees_, partition_, channels_for(model_.family), *model_.degree_generation);
    objective_ += penalty_->value();
  }
}

std::span<const EdgeCount> ModelState::row(const std::vector<EdgeCount>& table, VertexId v) const {
  const auto k = static_cast<std::size_t>(partition_.num_blocks());
  return std::span<const EdgeCount>(table).subspan(static_cast<std::size_t>(v) * k, k);
}

VertexMove ModelState::make_move(VertexId v, BlockId to) const {
  const auto i = static_cast<std::size_t>(v);
  const auto out = row(out_to_, v);
  const auto in = graph_->directed() ? row(in_from_, v) : out;
  return VertexMove{v, partition_[v], to, degrees_.out[i], degrees_.in[i], degrees_.total[i], out, in};
}

double ModelState::move_delta(VertexId v, BlockId to) const {
  const BlockId from = partition_[v];
  if (from == to) return 0.0;
  double d = delta_loglik(model_.family, stats_, make_move(v, to), &table_);
  if (penalty_) d += penalty_->delta(v, from, to);
  return d;
}

void ModelState::move(VertexId v, BlockId to) {
  const BlockId from = partition_[v];
  if (from == to) return;
  const VertexMove mv = make_move(v, to);
  double d = delta_loglik(model_.family, stats_, mv, &table_);
  if (penalty_) {
    d += penalty_->delta(v, from, to);
    penalty_->move(v, from, to);
  }
  apply_move(stats_, mv);
  objective_ += d;
  partition_.set_block(v, to);

  const auto k = static_cast<std::size_t>(partition_.num_blocks());
  const auto r = static_cast<std::size_t>(from);
  const auto s = static_cast<std::size_t>(to);
  const Graph& g = *graph_;
  if (!g.directed()) {
    for (const auto& nb : g.out_neighbors(v)) {
      const auto base = static_cast<std::size_t>(nb.vertex) * k;
      out_to_[base + r] -= nb.count;
      out_to_[base + s] += nb.count;
    }
    return;
  }
  for (const auto& nb : g.out_neighbors(v)) {
    const auto base = static_cast<std::size_t>(nb.vertex) * k;
    in_from_[base + r] -= nb.count;
    in_from_[base + s] += nb.count;
  }
  for (const auto& nb : g.in_neighbors(v)) {
    const auto base = static_cast<std::size_t>(nb.vertex) * k;
    out_to_[base + r] -= nb.count;
    out_to_[base + s] += nb.count;
  }
}

}  // namespace blockmodel
