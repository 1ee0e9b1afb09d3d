#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace blockmodel {

using VertexId = std::int32_t;
using BlockId = std::int32_t;
using EdgeCount = std::int64_t;

/// Thrown when an edge cannot be represented (self-loops, non-positive counts,
/// negative ids).
class RejectedEdgeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EdgeRecord {
  VertexId src = 0;
  VertexId dst = 0;
  EdgeCount count = 1;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct Neighbor {
  VertexId vertex = 0;
  EdgeCount count = 0;
};

/// Integer-weighted multigraph without self-loops.
///
/// Directed graphs store ordered pairs (u, v) with multiplicity A_uv.
/// Undirected graphs store each unordered pair once, as (min, max), with
/// multiplicity Ā_uv. Adjacency is kept in CSR form; for undirected graphs the
/// in- and out-neighbor views coincide.
class Graph {
 public:
  Graph() = default;

  /// Aggregates duplicate entries. Entries must already be valid
  /// (ids in range, no self-loops, positive counts).
  Graph(VertexId n, bool directed, std::vector<EdgeRecord> entries);

  VertexId num_vertices() const { return n_; }
  bool directed() const { return directed_; }

  /// Total edge count M (sum of multiplicities).
  EdgeCount num_edges() const { return total_; }

  /// Stored entries, sorted by (src, dst). Undirected entries have src < dst.
  std::span<const EdgeRecord> edges() const { return edges_; }

  std::span<const Neighbor> out_neighbors(VertexId v) const;
  std::span<const Neighbor> in_neighbors(VertexId v) const;

  /// A_uv for directed graphs, Ā_uv for undirected ones.
  EdgeCount multiplicity(VertexId u, VertexId v) const;

 private:
  VertexId n_ = 0;
  bool directed_ = true;
  EdgeCount total_ = 0;
  std::vector<EdgeRecord> edges_;
  std::vector<std::size_t> out_offsets_{0};
  std::vector<Neighbor> out_adj_;
  std::vector<std::size_t> in_offsets_{0};
  std::vector<Neighbor> in_adj_;
};

/// Per-vertex degrees. For undirected graphs d_out = d_in = d_total = d.
struct Degrees {
  std::vector<EdgeCount> out;
  std::vector<EdgeCount> in;
  std::vector<EdgeCount> total;
};

class Partition {
 public:
  Partition() = default;
  Partition(BlockId k, std::vector<BlockId> labels);

  BlockId num_blocks() const { return k_; }
  VertexId size() const { return static_cast<VertexId>(labels_.size()); }
  BlockId operator[](VertexId v) const { return labels_[static_cast<std::size_t>(v)]; }
  std::span<const BlockId> labels() const { return labels_; }

  void set_block(VertexId v, BlockId b);

  /// Number of blocks that contain at least one vertex.
  BlockId occupied_blocks() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  BlockId k_ = 1;
  std::vector<BlockId> labels_;
};

/// Sufficient statistics of a (graph, partition) pair.
///
/// m(r, s) counts edges from block r to block s. For undirected graphs the
/// matrix is symmetric and within-block edges are counted twice, so that
/// sum_s m(r, s) = kappa_total[r] in both cases.
struct BlockStats {
  BlockId k = 0;
  bool directed = true;
  std::vector<EdgeCount> m;  // row-major k x k
  std::vector<EdgeCount> kappa_out;
  std::vector<EdgeCount> kappa_in;
  std::vector<EdgeCount> kappa_total;
  std::vector<VertexId> sizes;

  EdgeCount& at(BlockId r, BlockId s) { return m[static_cast<std::size_t>(r * k + s)]; }
  EdgeCount at(BlockId r, BlockId s) const { return m[static_cast<std::size_t>(r * k + s)]; }
};

/// Builds a graph from integer-id edge records; n = 1 + largest id unless
/// `min_vertices` is larger.
Graph from_edge_list(std::span<const EdgeRecord> records, bool directed,
                     VertexId min_vertices = 0);

/// Ā_uv = A_uv + A_vu.
Graph undirected_projection(const Graph& g);

Degrees degrees(const Graph& g);

enum class ComponentMode { kWeak, kPerBlock };

struct Subgraph {
  Graph graph;
  std::vector<VertexId> old_to_new;  // -1 for dropped vertices
  std::vector<VertexId> new_to_old;
};

/// Largest weakly connected component (ties: smallest minimum original id),
/// or in per-block mode the union of the largest component of each block's
/// induced subgraph. Isolated vertices are never retained.
Subgraph giant_component(const Graph& g, ComponentMode mode = ComponentMode::kWeak,
                         const Partition* truth = nullptr);

/// Induced subgraph on `keep` (sorted ascending, unique).
Subgraph induced_subgraph(const Graph& g, std::span<const VertexId> keep);

/// Restricts a partition through a vertex remap.
Partition restrict_partition(const Partition& p, std::span<const VertexId> new_to_old);

BlockStats block_stats(const Graph& g, const Partition& p);

}  // namespace blockmodel
