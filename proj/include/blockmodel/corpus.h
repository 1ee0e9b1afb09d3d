#pragma once

#include <istream>
#include <set>
#include <string>
#include <vector>

#include "blockmodel/graph.h"

namespace blockmodel {

/// One token with its part-of-speech tag, or a document separator.
struct TaggedRecord {
  std::string token;
  std::string tag;
  bool separator = false;

  static TaggedRecord boundary() { return TaggedRecord{{}, {}, true}; }
  friend bool operator==(const TaggedRecord&, const TaggedRecord&) = default;
};

using TaggedStream = std::vector<TaggedRecord>;

/// Reads `token<TAB>tag` lines; a blank line is a document separator.
/// Tokens are lowercased (ASCII).
TaggedStream read_tagged_stream(std::istream& in, const std::string& source = "<stream>");
TaggedStream read_tagged_stream_file(const std::string& path);

enum WordClass : BlockId { kAdjective = 0, kNoun = 1 };

struct IngestConfig {
  std::set<std::string> adjective_tags{"JJ", "JJR", "JJS", "JJT", "ADJ"};
  std::set<std::string> noun_tags{"NN", "NNS", "NP", "NPS", "NOUN"};
  /// Minimum number of adjective- or noun-tagged occurrences.
  int min_count = 1;
  bool multigraph = true;
  bool restrict_to_giant = false;
  /// Let adjacency run across tokens outside the vocabulary.
  bool bridge_nonvocab = false;
};

struct CorpusNetwork {
  Graph graph;       // directed
  Partition truth;   // kAdjective / kNoun
  std::vector<std::string> labels;
};

/// Vertices are the adjective/noun words reaching min_count, in order of
/// first appearance, labelled by their majority class (ties go to noun).
/// Each pair of consecutive vocabulary tokens u, v within a document adds
/// an edge u -> v; repeated words are skipped.
CorpusNetwork build_network(const TaggedStream& stream, const IngestConfig& config);

struct NetworkSummary {
  VertexId n = 0;
  VertexId adjectives = 0;
  VertexId nouns = 0;
  EdgeCount edges = 0;

  friend bool operator==(const NetworkSummary&, const NetworkSummary&) = default;
};

NetworkSummary network_summary(const Graph& g, const Partition& truth);

}  // namespace blockmodel
