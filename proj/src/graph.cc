#include "blockmodel/graph.h"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

namespace blockmodel {
namespace {

void build_csr(VertexId n, std::span<const EdgeRecord> entries, bool reverse,
               std::vector<std::size_t>& offsets, std::vector<Neighbor>& adj) {
  offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : entries) {
    ++offsets[static_cast<std::size_t>(reverse ? e.dst : e.src) + 1];
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  adj.resize(entries.size());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (const auto& e : entries) {
    const VertexId from = reverse ? e.dst : e.src;
    const VertexId to = reverse ? e.src : e.dst;
    adj[cursor[static_cast<std::size_t>(from)]++] = Neighbor{to, e.count};
  }
}

// Connected components over the undirected view, optionally only following
// edges whose endpoints share a label.
std::vector<VertexId> component_labels(const Graph& g, const Partition* same_block) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  std::vector<VertexId> comp(n, -1);
  VertexId next = 0;
  std::vector<VertexId> stack;
  for (VertexId s = 0; s < g.num_vertices(); ++s) {
    if (comp[static_cast<std::size_t>(s)] != -1) continue;
    comp[static_cast<std::size_t>(s)] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      auto visit = [&](std::span<const Neighbor> nbrs) {
        for (const auto& nb : nbrs) {
          if (comp[static_cast<std::size_t>(nb.vertex)] != -1) continue;
          if (same_block && (*same_block)[nb.vertex] != (*same_block)[v]) continue;
          comp[static_cast<std::size_t>(nb.vertex)] = next;
          stack.push_back(nb.vertex);
        }
      };
      visit(g.out_neighbors(v));
      if (g.directed()) visit(g.in_neighbors(v));
    }
    ++next;
  }
  return comp;
}

}  // namespace

Graph::Graph(VertexId n, bool directed, std::vector<EdgeRecord> entries)
    : n_(n), directed_(directed) {
  if (!directed_) {
    for (auto& e : entries) {
      if (e.src > e.dst) std::swap(e.src, e.dst);
    }
  }
  std::sort(entries.begin(), entries.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });
  for (const auto& e : entries) {
    if (!edges_.empty() && edges_.back().src == e.src && edges_.back().dst == e.dst) {
      edges_.back().count += e.count;
    } else {
      edges_.push_back(e);
    }
    total_ += e.count;
  }

  if (directed_) {
    build_csr(n_, edges_, false, out_offsets_, out_adj_);
    build_csr(n_, edges_, true, in_offsets_, in_adj_);
  } else {
    std::vector<EdgeRecord> both;
    both.reserve(edges_.size() * 2);
    for (const auto& e : edges_) {
      both.push_back(e);
      both.push_back(EdgeRecord{e.dst, e.src, e.count});
    }
    std::sort(both.begin(), both.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
      return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    build_csr(n_, both, false, out_offsets_, out_adj_);
  }
}

std::span<const Neighbor> Graph::out_neighbors(VertexId v) const {
  const auto i = static_cast<std::size_t>(v);
  return std::span<const Neighbor>(out_adj_).subspan(out_offsets_[i],
                                                     out_offsets_[i + 1] - out_offsets_[i]);
}

std::span<const Neighbor> Graph::in_neighbors(VertexId v) const {
  if (!directed_) return out_neighbors(v);
  const auto i = static_cast<std::size_t>(v);
  return std::span<const Neighbor>(in_adj_).subspan(in_offsets_[i],
                                                    in_offsets_[i + 1] - in_offsets_[i]);
}

EdgeCount Graph::multiplicity(VertexId u, VertexId v) const {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) return 0;
  const auto nbrs = out_neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                             [](const Neighbor& nb, VertexId x) { return nb.vertex < x; });
  return (it != nbrs.end() && it->vertex == v) ? it->count : 0;
}

Partition::Partition(BlockId k, std::vector<BlockId> labels) : k_(k), labels_(std::move(labels)) {
  if (k_ < 1) throw std::invalid_argument("partition needs at least one block");
  for (const BlockId b : labels_) {
    if (b < 0 || b >= k_) {
      throw std::invalid_argument("block label " + std::to_string(b) + " outside [0, " +
                                  std::to_string(k_) + ")");
    }
  }
}

void Partition::set_block(VertexId v, BlockId b) {
  if (b < 0 || b >= k_) throw std::invalid_argument("block label out of range");
  labels_.at(static_cast<std::size_t>(v)) = b;
}

BlockId Partition::occupied_blocks() const {
  std::vector<bool> seen(static_cast<std::size_t>(k_), false);
  BlockId count = 0;
  for (const BlockId b : labels_) {
    if (!seen[static_cast<std::size_t>(b)]) {
      seen[static_cast<std::size_t>(b)] = true;
      ++count;
    }
  }
  return count;
}

Graph from_edge_list(std::span<const EdgeRecord> records, bool directed, VertexId min_vertices) {
  VertexId n = min_vertices;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& e = records[i];
    if (e.src < 0 || e.dst < 0) {
      throw RejectedEdgeError("edge " + std::to_string(i) + ": negative vertex id");
    }
    if (e.count <= 0) {
      throw RejectedEdgeError("edge " + std::to_string(i) + ": count must be positive");
    }
    if (e.src == e.dst) {
      throw RejectedEdgeError("edge " + std::to_string(i) + ": self-loop on vertex " +
                              std::to_string(e.src));
    }
    n = std::max({n, e.src + 1, e.dst + 1});
  }
  return Graph(n, directed, std::vector<EdgeRecord>(records.begin(), records.end()));
}

Graph undirected_projection(const Graph& g) {
  if (!g.directed()) {
    throw std::invalid_argument("undirected_projection: graph is already undirected");
  }
  return Graph(g.num_vertices(), false,
               std::vector<EdgeRecord>(g.edges().begin(), g.edges().end()));
}

Degrees degrees(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.num_vertices());
  Degrees d{std::vector<EdgeCount>(n, 0), std::vector<EdgeCount>(n, 0),
            std::vector<EdgeCount>(n, 0)};
  for (const auto& e : g.edges()) {
    const auto u = static_cast<std::size_t>(e.src);
    const auto v = static_cast<std::size_t>(e.dst);
    d.out[u] += e.count;
    d.in[v] += e.count;
    if (!g.directed()) {
      d.out[v] += e.count;
      d.in[u] += e.count;
    }
  }
  for (std::size_t v = 0; v < n; ++v) {
    d.total[v] = g.directed() ? d.out[v] + d.in[v] : d.out[v];
  }
  return d;
}

Subgraph induced_subgraph(const Graph& g, std::span<const VertexId> keep) {
  Subgraph sub;
  sub.old_to_new.assign(static_cast<std::size_t>(g.num_vertices()), -1);
  sub.new_to_old.assign(keep.begin(), keep.end());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    sub.old_to_new[static_cast<std::size_t>(keep[i])] = static_cast<VertexId>(i);
  }
  std::vector<EdgeRecord> entries;
  for (const auto& e : g.edges()) {
    const VertexId u = sub.old_to_new[static_cast<std::size_t>(e.src)];
    const VertexId v = sub.old_to_new[static_cast<std::size_t>(e.dst)];
    if (u >= 0 && v >= 0) entries.push_back(EdgeRecord{u, v, e.count});
  }
  sub.graph = Graph(static_cast<VertexId>(keep.size()), g.directed(), std::move(entries));
  return sub;
}

Subgraph giant_component(const Graph& g, ComponentMode mode, const Partition* truth) {
  if (mode == ComponentMode::kPerBlock) {
    if (truth == nullptr) {
      throw std::invalid_argument("per-block giant component needs a ground-truth partition");
    }
    if (truth->size() != g.num_vertices()) {
      throw std::invalid_argument("partition size does not match graph");
    }
  }
  const auto comp = component_labels(g, mode == ComponentMode::kPerBlock ? truth : nullptr);
  const auto n = static_cast<std::size_t>(g.num_vertices());

  // Components are numbered in order of their smallest vertex id, so the
  // first maximum encountered wins ties.
  const std::size_t num_comp =
      n == 0 ? 0 : static_cast<std::size_t>(*std::max_element(comp.begin(), comp.end())) + 1;
  std::vector<VertexId> comp_size(num_comp, 0);
  std::vector<BlockId> comp_block(num_comp, 0);
  for (std::size_t v = 0; v < n; ++v) {
    ++comp_size[static_cast<std::size_t>(comp[v])];
    if (truth) comp_block[static_cast<std::size_t>(comp[v])] = (*truth)[static_cast<VertexId>(v)];
  }

  std::vector<bool> chosen(num_comp, false);
  if (mode == ComponentMode::kWeak) {
    std::size_t best = num_comp;
    for (std::size_t c = 0; c < num_comp; ++c) {
      if (comp_size[c] < 2) continue;
      if (best == num_comp || comp_size[c] > comp_size[best]) best = c;
    }
    if (best != num_comp) chosen[best] = true;
  } else {
    std::vector<std::size_t> best(static_cast<std::size_t>(truth->num_blocks()), num_comp);
    for (std::size_t c = 0; c < num_comp; ++c) {
      if (comp_size[c] < 2) continue;
      auto& b = best[static_cast<std::size_t>(comp_block[c])];
      if (b == num_comp || comp_size[c] > comp_size[b]) b = c;
    }
    for (const auto c : best) {
      if (c != num_comp) chosen[c] = true;
    }
  }

  std::vector<VertexId> keep;
  for (std::size_t v = 0; v < n; ++v) {
    if (chosen[static_cast<std::size_t>(comp[v])]) keep.push_back(static_cast<VertexId>(v));
  }
  return induced_subgraph(g, keep);
}

Partition restrict_partition(const Partition& p, std::span<const VertexId> new_to_old) {
  std::vector<BlockId> labels;
  labels.reserve(new_to_old.size());
  for (const VertexId old : new_to_old) labels.push_back(p[old]);
  return Partition(p.num_blocks(), std::move(labels));
}

BlockStats block_stats(const Graph& g, const Partition& p) {
  if (p.size() != g.num_vertices()) {
    throw std::invalid_argument("block_stats: partition has " + std::to_string(p.size()) +
                                " vertices, graph has " + std::to_string(g.num_vertices()));
  }
  const BlockId k = p.num_blocks();
  const auto kk = static_cast<std::size_t>(k);
  BlockStats s;
  s.k = k;
  s.directed = g.directed();
  s.m.assign(kk * kk, 0);
  s.kappa_out.assign(kk, 0);
  s.kappa_in.assign(kk, 0);
  s.kappa_total.assign(kk, 0);
  s.sizes.assign(kk, 0);

  for (const auto& e : g.edges()) {
    const BlockId r = p[e.src];
    const BlockId t = p[e.dst];
    s.at(r, t) += e.count;
    if (!g.directed()) s.at(t, r) += e.count;
  }
  const Degrees d = degrees(g);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto r = static_cast<std::size_t>(p[v]);
    const auto i = static_cast<std::size_t>(v);
    s.kappa_out[r] += d.out[i];
    s.kappa_in[r] += d.in[i];
    s.kappa_total[r] += d.total[i];
    ++s.sizes[r];
  }
  return s;
}

}  // namespace blockmodel
