#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "litrank/ranking/pagerank.hpp"
#include "litrank/ranking/pageviews.hpp"
#include "litrank/ranking/ranking.hpp"
#include "litrank/store/dataset_store.hpp"
#include "litrank/writers/writer_set.hpp"

namespace litrank::ranking {

// A language edition seen from the English hub. Rankings are always keyed by
// English entity ids; scores come from the edition's own store.
struct Edition {
  const store::DatasetStore& english;
  const store::DatasetStore& local;

  const std::string& language() const { return local.language; }
  // Article id in the local store for an English entity, if it has one.
  std::optional<TermId> article(TermId english_entity) const;
};

// Missing data scores 0 in every measure so all rankings over one set have
// the same length.
Ranking rank_page_length(const writers::WriterSet& set, const Edition& edition);
Ranking rank_in_links(const writers::WriterSet& set, const Edition& edition);

// Subgraph of the edition's link graph induced by the writers' local
// articles. Node i is entities[i]; writers without a local article are left out.
struct InducedGraph {
  std::vector<TermId> entities;
  store::Digraph graph;
};
InducedGraph induced_writer_graph(const writers::WriterSet& set, const Edition& edition);

// PageRank on the subgraph induced by the writers' local articles.
Ranking rank_pagerank_writers(const writers::WriterSet& set, const Edition& edition,
                              const PageRankParams& params = {});

// `complete` holds PageRank scores over the edition's whole link graph
// (indexed by its node ids). Writers outside the graph score 0.
Ranking rank_pagerank_complete(const writers::WriterSet& set, const Edition& edition,
                               const PageRankResult& complete);

Ranking rank_page_views(const writers::WriterSet& set, const PageViewCounts& views, int year,
                        const Edition& edition);

// Normalized local title -> English entity, for the writers of `set`.
std::unordered_map<std::string, TermId> writer_titles(const writers::WriterSet& set,
                                                      const Edition& edition);
// Normalized redirect source title -> normalized target title.
std::unordered_map<std::string, std::string> redirect_titles(const store::DatasetStore& local);

// Resource local name of an IRI, normalized like a page-view title.
std::string title_of(std::string_view iri);

}  // namespace litrank::ranking
