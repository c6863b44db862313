#include "litrank/ranking/measures.hpp"

#include <algorithm>

namespace litrank::ranking {

std::optional<TermId> Edition::article(TermId english_entity) const {
  if (&local == &english) return english_entity;
  const auto foreign = english.interlang.counterpart(english_entity, local.language);
  if (!foreign) return std::nullopt;
  return local.id(english.iri(*foreign));
}

namespace {

template <typename Score>
Ranking rank_by(std::string measure, const writers::WriterSet& set, const Edition& edition,
                Score&& score) {
  std::vector<std::pair<TermId, double>> scores;
  scores.reserve(set.size());
  for (const auto id : set.ids) {
    const auto local = edition.article(id);
    scores.emplace_back(id, local ? score(*local) : 0.0);
  }
  return make_ranking(std::move(measure), edition.language(), std::move(scores),
                      edition.english.terms);
}

}  // namespace

Ranking rank_page_length(const writers::WriterSet& set, const Edition& edition) {
  return rank_by(std::string(measure::kPageLength), set, edition, [&](TermId local) {
    return static_cast<double>(edition.local.length_of(local));
  });
}

Ranking rank_in_links(const writers::WriterSet& set, const Edition& edition) {
  return rank_by(std::string(measure::kInLinks), set, edition, [&](TermId local) {
    return static_cast<double>(edition.local.links.in_degree(local));
  });
}

InducedGraph induced_writer_graph(const writers::WriterSet& set, const Edition& edition) {
  // Node i of the induced graph is the i-th writer that has a local article.
  InducedGraph out;
  std::vector<std::optional<store::NodeId>> graph_node;
  for (const auto id : set.ids) {
    if (const auto local = edition.article(id)) {
      out.entities.push_back(id);
      graph_node.push_back(edition.local.links.node_of(*local));
    }
  }
  // Local graph node -> induced node(s); several writers may share an article.
  std::vector<std::pair<store::NodeId, store::NodeId>> by_graph_node;
  for (store::NodeId i = 0; i < out.entities.size(); ++i) {
    if (graph_node[i]) by_graph_node.emplace_back(*graph_node[i], i);
  }
  std::sort(by_graph_node.begin(), by_graph_node.end());
  const auto& g = edition.local.links.graph();
  std::vector<std::pair<store::NodeId, store::NodeId>> edges;
  for (store::NodeId i = 0; i < out.entities.size(); ++i) {
    if (!graph_node[i]) continue;
    for (const auto target : g.out(*graph_node[i])) {
      auto it = std::lower_bound(by_graph_node.begin(), by_graph_node.end(),
                                 std::pair<store::NodeId, store::NodeId>{target, 0});
      for (; it != by_graph_node.end() && it->first == target; ++it) {
        edges.emplace_back(i, it->second);
      }
    }
  }
  out.graph = store::Digraph(out.entities.size(), std::move(edges));
  return out;
}

Ranking rank_pagerank_writers(const writers::WriterSet& set, const Edition& edition,
                              const PageRankParams& params) {
  const auto induced = induced_writer_graph(set, edition);
  std::vector<std::pair<TermId, double>> scores;
  for (const auto id : set.ids) {
    if (!edition.article(id)) scores.emplace_back(id, 0.0);
  }
  if (!induced.entities.empty()) {
    const auto pr = pagerank(induced.graph, params);
    for (std::size_t i = 0; i < induced.entities.size(); ++i) {
      scores.emplace_back(induced.entities[i], pr.scores[i]);
    }
  }
  return make_ranking(std::string(measure::kPageRankWriters), edition.language(),
                      std::move(scores), edition.english.terms);
}

Ranking rank_pagerank_complete(const writers::WriterSet& set, const Edition& edition,
                               const PageRankResult& complete) {
  return rank_by(std::string(measure::kPageRankComplete), set, edition, [&](TermId local) {
    const auto node = edition.local.links.node_of(local);
    return node && *node < complete.scores.size() ? complete.scores[*node] : 0.0;
  });
}

Ranking rank_page_views(const writers::WriterSet& set, const PageViewCounts& views, int year,
                        const Edition& edition) {
  std::vector<std::pair<TermId, double>> scores;
  scores.reserve(set.size());
  for (const auto id : set.ids) {
    scores.emplace_back(id, static_cast<double>(views.views(id, year)));
  }
  return make_ranking(measure::views(year), edition.language(), std::move(scores),
                      edition.english.terms);
}

std::string title_of(std::string_view iri) {
  const auto cut = iri.rfind('/');
  return normalize_title(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
}

std::unordered_map<std::string, TermId> writer_titles(const writers::WriterSet& set,
                                                      const Edition& edition) {
  std::unordered_map<std::string, TermId> out;
  for (const auto id : set.ids) {
    if (const auto local = edition.article(id)) {
      out.emplace(title_of(edition.local.iri(*local)), id);
    }
  }
  return out;
}

std::unordered_map<std::string, std::string> redirect_titles(const store::DatasetStore& local) {
  std::vector<std::pair<TermId, TermId>> pairs(local.redirects.begin(), local.redirects.end());
  std::sort(pairs.begin(), pairs.end());
  std::unordered_map<std::string, std::string> out;
  for (const auto& [from, to] : pairs) {
    out.emplace(title_of(local.iri(from)), title_of(local.iri(to)));
  }
  return out;
}

}  // namespace litrank::ranking
