#include "litrank/graph/writer_graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "litrank/util/error.hpp"

namespace litrank::graph {

namespace {

std::string label_of(std::string_view iri) {
  const auto cut = iri.rfind('/');
  std::string s(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
  std::replace(s.begin(), s.end(), '_', ' ');
  return s;
}

// Undirected weighted adjacency, neighbors sorted by index.
using Adjacency = std::vector<std::vector<std::pair<std::uint32_t, double>>>;

Adjacency undirected(const WriterGraph& g) {
  std::vector<std::map<std::uint32_t, double>> acc(g.nodes.size());
  for (const auto& [u, v] : g.edges) {
    if (u == v) continue;
    acc[u][v] += 1.0;
    acc[v][u] += 1.0;
  }
  Adjacency adj(g.nodes.size());
  for (std::size_t i = 0; i < acc.size(); ++i) adj[i].assign(acc[i].begin(), acc[i].end());
  return adj;
}

// Unbiased draw from [0, bound) using only the mt19937_64 output sequence,
// which is fixed by the standard, unlike the distributions.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
  for (;;) {
    const auto x = rng();
    if (x < limit) return x % bound;
  }
}

std::string dot_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::uint32_t community_of(const Communities& c, std::size_t i) {
  return i < c.size() ? c[i] : 0;
}

}  // namespace

WriterGraph build_writer_graph(const writers::WriterSet& set, const ranking::Edition& edition,
                               const ranking::PageRankParams& params) {
  WriterGraph out;
  out.language = edition.language();
  const auto induced = ranking::induced_writer_graph(set, edition);
  const auto n = induced.entities.size();
  if (n == 0) return out;
  const auto pr = ranking::pagerank(induced.graph, params);
  const auto& terms = edition.english.terms;

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    return terms.text(induced.entities[a]) < terms.text(induced.entities[b]);
  });
  std::vector<std::uint32_t> position(n);
  for (std::uint32_t i = 0; i < n; ++i) position[order[i]] = i;

  out.nodes.resize(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto src = order[i];
    auto& node = out.nodes[i];
    node.entity = induced.entities[src];
    const auto local = edition.article(node.entity);
    node.label = label_of(edition.local.iri(*local));
    node.pagerank = pr.scores[src];
  }
  for (store::NodeId u = 0; u < n; ++u) {
    for (const auto v : induced.graph.out(u)) {
      if (u != v) out.edges.emplace_back(position[u], position[v]);
    }
  }
  std::sort(out.edges.begin(), out.edges.end());
  out.edges.erase(std::unique(out.edges.begin(), out.edges.end()), out.edges.end());
  for (const auto& [u, v] : out.edges) ++out.nodes[v].writer_in_degree;
  return out;
}

WriterGraph threshold_filter(const WriterGraph& graph, std::uint32_t min_in_links) {
  WriterGraph out;
  out.language = graph.language;
  constexpr auto kDropped = static_cast<std::uint32_t>(-1);
  std::vector<std::uint32_t> remap(graph.nodes.size(), kDropped);
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (graph.nodes[i].writer_in_degree >= min_in_links) {
      remap[i] = static_cast<std::uint32_t>(out.nodes.size());
      out.nodes.push_back(graph.nodes[i]);
    }
  }
  for (const auto& [u, v] : graph.edges) {
    if (remap[u] != kDropped && remap[v] != kDropped) out.edges.emplace_back(remap[u], remap[v]);
  }
  return out;
}

Communities detect_communities(const WriterGraph& graph, std::uint64_t seed, int max_rounds) {
  const auto n = graph.nodes.size();
  if (n == 0) return {};
  const auto adj = undirected(graph);
  std::vector<std::uint32_t> label(n);
  std::iota(label.begin(), label.end(), 0u);
  std::vector<std::uint32_t> order(n);
  std::mt19937_64 rng(seed);
  std::map<std::uint32_t, double> weight;

  for (int round = 0; round < max_rounds; ++round) {
    std::iota(order.begin(), order.end(), 0u);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[draw(rng, i)]);
    bool changed = false;
    for (const auto u : order) {
      if (adj[u].empty()) continue;
      weight.clear();
      for (const auto& [v, w] : adj[u]) weight[label[v]] += w;
      double best = 0.0;
      for (const auto& [l, w] : weight) best = std::max(best, w);
      const auto own = weight.find(label[u]);
      if (own != weight.end() && own->second == best) continue;
      // std::map iterates labels in ascending order, so the first maximum is
      // the smallest.
      for (const auto& [l, w] : weight) {
        if (w == best) {
          label[u] = l;
          changed = true;
          break;
        }
      }
    }
    if (!changed) break;
  }

  Communities out(n);
  std::map<std::uint32_t, std::uint32_t> renumber;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [it, inserted] =
        renumber.emplace(label[i], static_cast<std::uint32_t>(renumber.size()));
    out[i] = it->second;
  }
  return out;
}

double modularity(const WriterGraph& graph, const Communities& communities) {
  if (communities.size() != graph.nodes.size()) {
    throw Error("modularity: partition size does not match the graph");
  }
  const auto adj = undirected(graph);
  double two_m = 0.0;
  std::map<std::uint32_t, double> internal;  // sum of A_ij within a community, both directions
  std::map<std::uint32_t, double> degree;
  for (std::size_t u = 0; u < adj.size(); ++u) {
    for (const auto& [v, w] : adj[u]) {
      two_m += w;
      degree[communities[u]] += w;
      if (communities[u] == communities[v]) internal[communities[u]] += w;
    }
  }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (const auto& [c, d] : degree) {
    const double in = internal.contains(c) ? internal.at(c) : 0.0;
    q += in / two_m - (d / two_m) * (d / two_m);
  }
  return q;
}

GraphFormat parse_graph_format(std::string_view name) {
  if (name == "dot") return GraphFormat::dot;
  if (name == "graphml") return GraphFormat::graphml;
  throw Error("unknown graph format '" + std::string(name) + "' (expected dot or graphml)");
}

std::string_view to_string(GraphFormat f) {
  return f == GraphFormat::dot ? "dot" : "graphml";
}

void export_graph(std::ostream& out, const WriterGraph& graph, const Communities& communities,
                  GraphFormat format, const rdf::InternTable& terms) {
  const auto& nodes = graph.nodes;
  if (format == GraphFormat::dot) {
    out << "digraph writers {\n";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      out << "  n" << i << " [label=\"" << dot_escape(nodes[i].label) << "\", iri=\""
          << dot_escape(terms.text(nodes[i].entity))
          << "\", pagerank=" << ranking::format_score(nodes[i].pagerank)
          << ", writer_in_degree=" << nodes[i].writer_in_degree
          << ", community=" << community_of(communities, i) << "];\n";
    }
    for (const auto& [u, v] : graph.edges) out << "  n" << u << " -> n" << v << ";\n";
    out << "}\n";
    return;
  }
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
         "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
         "  <key id=\"iri\" for=\"node\" attr.name=\"iri\" attr.type=\"string\"/>\n"
         "  <key id=\"pagerank\" for=\"node\" attr.name=\"pagerank\" attr.type=\"double\"/>\n"
         "  <key id=\"writer_in_degree\" for=\"node\" attr.name=\"writer_in_degree\" "
         "attr.type=\"int\"/>\n"
         "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n"
         "  <graph id=\"writers\" edgedefault=\"directed\">\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    out << "    <node id=\"n" << i << "\">\n"
        << "      <data key=\"label\">" << xml_escape(nodes[i].label) << "</data>\n"
        << "      <data key=\"iri\">" << xml_escape(terms.text(nodes[i].entity)) << "</data>\n"
        << "      <data key=\"pagerank\">" << ranking::format_score(nodes[i].pagerank)
        << "</data>\n"
        << "      <data key=\"writer_in_degree\">" << nodes[i].writer_in_degree << "</data>\n"
        << "      <data key=\"community\">" << community_of(communities, i) << "</data>\n"
        << "    </node>\n";
  }
  std::size_t e = 0;
  for (const auto& [u, v] : graph.edges) {
    out << "    <edge id=\"e" << e++ << "\" source=\"n" << u << "\" target=\"n" << v << "\"/>\n";
  }
  out << "  </graph>\n</graphml>\n";
}

}  // namespace litrank::graph
