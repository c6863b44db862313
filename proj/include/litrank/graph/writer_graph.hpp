#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "litrank/ranking/measures.hpp"

namespace litrank::graph {

using rdf::TermId;

inline constexpr std::uint32_t kDefaultThreshold = 60;
inline constexpr std::uint64_t kDefaultSeed = 42;

struct WriterNode {
  TermId entity = rdf::kNoTerm;   // English entity id
  std::string label;              // article title with spaces
  double pagerank = 0.0;          // PageRank within the writer subgraph
  std::uint32_t writer_in_degree = 0;
  friend bool operator==(const WriterNode&, const WriterNode&) = default;
};

// Nodes are ordered by IRI; edges are (source, target) node indices, sorted,
// without self-loops or duplicates.
struct WriterGraph {
  std::string language;
  std::vector<WriterNode> nodes;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  friend bool operator==(const WriterGraph&, const WriterGraph&) = default;
};

// Writers with a local article become nodes; A -> B iff A's article links to
// B's article.
WriterGraph build_writer_graph(const writers::WriterSet& set, const ranking::Edition& edition,
                               const ranking::PageRankParams& params = {});

// Keeps nodes whose in-degree in the unfiltered graph is at least
// min_in_links, then the edges between them. Node attributes are unchanged.
WriterGraph threshold_filter(const WriterGraph& graph, std::uint32_t min_in_links);

// Community id per node index, numbered 0.. in order of first appearance.
using Communities = std::vector<std::uint32_t>;

// Label propagation on the undirected projection; the weight of a pair is
// the number of directed edges between them. Nodes are visited in a fresh
// seeded shuffle each round. A node keeps its label if that label is among
// the heaviest; otherwise it takes the smallest heaviest label. Stops when a
// round changes nothing or after max_rounds.
Communities detect_communities(const WriterGraph& graph, std::uint64_t seed = kDefaultSeed,
                               int max_rounds = 100);

// Newman modularity of a partition on the same undirected projection.
double modularity(const WriterGraph& graph, const Communities& communities);

enum class GraphFormat { dot, graphml };
GraphFormat parse_graph_format(std::string_view name);
std::string_view to_string(GraphFormat f);

void export_graph(std::ostream& out, const WriterGraph& graph, const Communities& communities,
                  GraphFormat format, const rdf::InternTable& terms);

}  // namespace litrank::graph
