#include "blockmodel/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "blockmodel/edge_list_io.h"

namespace blockmodel {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

struct WordStats {
  VertexId id = -1;
  EdgeCount adjective = 0;
  EdgeCount noun = 0;
};

}  // namespace

TaggedStream read_tagged_stream(std::istream& in, const std::string& source) {
  TaggedStream stream;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = trim(line);
    if (body.empty()) {
      stream.push_back(TaggedRecord::boundary());
      continue;
    }
    std::string token, tag;
    if (const auto tab = body.find('\t'); tab != std::string::npos) {
      token = trim(body.substr(0, tab));
      tag = trim(body.substr(tab + 1));
    } else {
      std::istringstream fields(body);
      std::string extra;
      fields >> token >> tag;
      if (fields >> extra) tag.clear();
    }
    if (token.empty() || tag.empty() || tag.find_first_of(" \t") != std::string::npos) {
      throw ParseError(source, lineno, "expected 'token<TAB>tag'");
    }
    stream.push_back(TaggedRecord{lowercase(token), tag, false});
  }
  return stream;
}

TaggedStream read_tagged_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tagged corpus '" + path + "'");
  return read_tagged_stream(in, path);
}

CorpusNetwork build_network(const TaggedStream& stream, const IngestConfig& config) {
  if (config.min_count < 1) throw std::invalid_argument("min_count must be at least 1");
  for (const auto& tag : config.adjective_tags) {
    if (config.noun_tags.contains(tag)) {
      throw std::invalid_argument("tag '" + tag + "' is both an adjective and a noun tag");
    }
  }

  std::unordered_map<std::string, WordStats> words;
  std::vector<std::string> order;
  for (const auto& rec : stream) {
    if (rec.separator) continue;
    const bool adj = config.adjective_tags.contains(rec.tag);
    const bool noun = config.noun_tags.contains(rec.tag);
    if (!adj && !noun) continue;
    auto [it, inserted] = words.try_emplace(rec.token);
    if (inserted) order.push_back(rec.token);
    ++(adj ? it->second.adjective : it->second.noun);
  }

  CorpusNetwork net;
  std::vector<BlockId> classes;
  for (const auto& word : order) {
    WordStats& w = words[word];
    if (w.adjective + w.noun < config.min_count) continue;
    w.id = static_cast<VertexId>(net.labels.size());
    net.labels.push_back(word);
    classes.push_back(w.adjective > w.noun ? kAdjective : kNoun);
  }
  if (net.labels.empty()) throw std::invalid_argument("no adjective or noun reaches the frequency threshold");

  std::map<std::pair<VertexId, VertexId>, EdgeCount> pairs;
  VertexId prev = -1;
  for (const auto& rec : stream) {
    if (rec.separator) {
      prev = -1;
      continue;
    }
    const auto it = words.find(rec.token);
    const VertexId cur = it == words.end() ? -1 : it->second.id;
    if (cur < 0) {
      if (!config.bridge_nonvocab) prev = -1;
      continue;
    }
    if (prev >= 0 && prev != cur) ++pairs[{prev, cur}];
    prev = cur;
  }

  std::vector<EdgeRecord> edges;
  edges.reserve(pairs.size());
  for (const auto& [uv, count] : pairs) {
    edges.push_back(EdgeRecord{uv.first, uv.second, config.multigraph ? count : 1});
  }
  const auto n = static_cast<VertexId>(net.labels.size());
  net.graph = Graph(n, true, std::move(edges));
  net.truth = Partition(2, std::move(classes));

  if (config.restrict_to_giant) {
    Subgraph sub = giant_component(net.graph);
    std::vector<std::string> kept;
    kept.reserve(sub.new_to_old.size());
    for (const VertexId old : sub.new_to_old) kept.push_back(net.labels[static_cast<std::size_t>(old)]);
    net.truth = restrict_partition(net.truth, sub.new_to_old);
    net.graph = std::move(sub.graph);
    net.labels = std::move(kept);
  }
  return net;
}

NetworkSummary network_summary(const Graph& g, const Partition& truth) {
  if (truth.size() != g.num_vertices()) throw std::invalid_argument("truth does not match the graph");
  NetworkSummary s;
  s.n = g.num_vertices();
  for (VertexId v = 0; v < truth.size(); ++v) {
    if (truth[v] == kAdjective) {
      ++s.adjectives;
    } else {
      ++s.nouns;
    }
  }
  s.edges = g.num_edges();
  return s;
}

}  // namespace blockmodel
