#include "blockmodel/edge_list_io.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace blockmodel {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(f);
  return fields;
}

bool skip_line(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

template <typename Int>
bool parse_int(const std::string& s, Int& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

LabeledGraph read_edge_list(std::istream& in, bool directed, const std::string& source) {
  LabeledGraph out;
  std::unordered_map<std::string, VertexId> ids;
  auto id_of = [&](const std::string& label) {
    auto [it, inserted] = ids.emplace(label, static_cast<VertexId>(out.labels.size()));
    if (inserted) out.labels.push_back(label);
    return it->second;
  };

  std::vector<EdgeRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    const auto fields = split_fields(line);
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(source, lineno, "expected 'src<TAB>dst[<TAB>count]'");
    }
    EdgeCount count = 1;
    if (fields.size() == 3 && (!parse_int(fields[2], count) || count <= 0)) {
      throw ParseError(source, lineno, "count must be a positive integer, got '" + fields[2] + "'");
    }
    if (fields[0] == fields[1]) {
      throw RejectedEdgeError(source + ":" + std::to_string(lineno) + ": self-loop on '" +
                              fields[0] + "'");
    }
    const VertexId u = id_of(fields[0]);
    const VertexId v = id_of(fields[1]);
    records.push_back(EdgeRecord{u, v, count});
  }
  out.graph = Graph(static_cast<VertexId>(out.labels.size()), directed, std::move(records));
  return out;
}

LabeledGraph read_edge_list_file(const std::string& path, bool directed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");
  return read_edge_list(in, directed, path);
}

void write_edge_list(std::ostream& out, const Graph& g, const std::vector<std::string>* labels) {
  auto name = [&](VertexId v) {
    return labels ? (*labels)[static_cast<std::size_t>(v)] : std::to_string(v);
  };
  for (const auto& e : g.edges()) {
    out << name(e.src) << '\t' << name(e.dst);
    if (e.count != 1) out << '\t' << e.count;
    out << '\n';
  }
}

void write_label_map(std::ostream& out, const std::vector<std::string>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) out << labels[i] << '\t' << i << '\n';
}

std::vector<std::string> read_label_map(std::istream& in, const std::string& source) {
  std::vector<std::pair<VertexId, std::string>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    const auto fields = split_fields(line);
    VertexId id = 0;
    if (fields.size() != 2 || !parse_int(fields[1], id) || id < 0) {
      throw ParseError(source, lineno, "expected 'label<TAB>internal_id'");
    }
    rows.emplace_back(id, fields[0]);
  }
  std::sort(rows.begin(), rows.end());
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].first != static_cast<VertexId>(i)) {
      throw ParseError(source, 0, "internal ids are not dense 0..n-1");
    }
    labels.push_back(rows[i].second);
  }
  return labels;
}

std::vector<PartitionEntry> read_partition(std::istream& in, const std::string& source) {
  std::vector<PartitionEntry> entries;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (skip_line(line)) continue;
    const auto fields = split_fields(line);
    BlockId b = 0;
    if (fields.size() != 2 || !parse_int(fields[1], b) || b < 0) {
      throw ParseError(source, lineno, "expected 'vertex<TAB>block' with block >= 0");
    }
    entries.push_back(PartitionEntry{fields[0], b});
  }
  return entries;
}

std::vector<PartitionEntry> read_partition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open partition file '" + path + "'");
  return read_partition(in, path);
}

void write_partition(std::ostream& out, const Partition& p, const std::vector<std::string>* labels) {
  for (VertexId v = 0; v < p.size(); ++v) {
    out << (labels ? (*labels)[static_cast<std::size_t>(v)] : std::to_string(v)) << '\t' << p[v]
        << '\n';
  }
}

Partition align_partition(const std::vector<PartitionEntry>& entries,
                          const std::vector<std::string>& labels, BlockId min_blocks) {
  std::unordered_map<std::string, BlockId> by_label;
  BlockId k = min_blocks;
  for (const auto& e : entries) {
    if (!by_label.emplace(e.vertex, e.block).second) {
      throw std::invalid_argument("vertex '" + e.vertex + "' listed twice in partition");
    }
    k = std::max(k, e.block + 1);
  }
  if (by_label.size() != labels.size()) {
    throw std::invalid_argument("partition lists " + std::to_string(by_label.size()) +
                                " vertices, expected " + std::to_string(labels.size()));
  }
  std::vector<BlockId> blocks;
  blocks.reserve(labels.size());
  for (const auto& label : labels) {
    auto it = by_label.find(label);
    if (it == by_label.end()) {
      throw std::invalid_argument("vertex '" + label + "' missing from partition");
    }
    blocks.push_back(it->second);
  }
  return Partition(k, std::move(blocks));
}

std::vector<std::string> integer_labels(VertexId n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (VertexId v = 0; v < n; ++v) labels.push_back(std::to_string(v));
  return labels;
}

}  // namespace blockmodel
