#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "blockmodel/graph.h"

namespace blockmodel {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A graph whose dense vertex ids map back to external labels.
struct LabeledGraph {
  Graph graph;
  std::vector<std::string> labels;  // internal id -> label
};

/// Reads `src<TAB>dst[<TAB>count]` lines. Blank lines and lines starting with
/// '#' are skipped. Labels are assigned dense ids in order of first
/// appearance. Self-loops raise RejectedEdgeError naming the line.
LabeledGraph read_edge_list(std::istream& in, bool directed, const std::string& source = "<input>");
LabeledGraph read_edge_list_file(const std::string& path, bool directed);

/// Writes stored entries, one per line, using labels when provided.
void write_edge_list(std::ostream& out, const Graph& g,
                     const std::vector<std::string>* labels = nullptr);

/// `label<TAB>internal_id`
void write_label_map(std::ostream& out, const std::vector<std::string>& labels);
std::vector<std::string> read_label_map(std::istream& in, const std::string& source = "<input>");

struct PartitionEntry {
  std::string vertex;
  BlockId block = 0;
};

/// `vertex<TAB>block` lines.
std::vector<PartitionEntry> read_partition(std::istream& in, const std::string& source = "<input>");
std::vector<PartitionEntry> read_partition_file(const std::string& path);
void write_partition(std::ostream& out, const Partition& p,
                     const std::vector<std::string>* labels = nullptr);

/// Orders partition entries by the given vertex labels. Throws
/// std::invalid_argument if the label sets differ or a label repeats.
Partition align_partition(const std::vector<PartitionEntry>& entries,
                          const std::vector<std::string>& labels, BlockId min_blocks = 1);

/// Identity labels "0", "1", ... for graphs built from integer ids.
std::vector<std::string> integer_labels(VertexId n);

}  // namespace blockmodel
