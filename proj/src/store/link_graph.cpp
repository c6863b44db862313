#include "litrank/store/link_graph.hpp"

#include <algorithm>

#include "litrank/util/error.hpp"

namespace litrank::store {

Digraph::Digraph(std::size_t node_count, std::vector<std::pair<NodeId, NodeId>> edges)
    : offsets_(node_count + 1, 0) {
  for (const auto& [u, v] : edges) {
    if (u >= node_count || v >= node_count) throw Error("edge endpoint out of range");
    ++offsets_[u + 1];
  }
  for (std::size_t i = 0; i < node_count; ++i) offsets_[i + 1] += offsets_[i];
  targets_.resize(edges.size());
  std::vector<std::uint64_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges) targets_[cursor[u]++] = v;
  for (std::size_t u = 0; u < node_count; ++u) {
    std::sort(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]),
              targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]));
  }
  compute_in_degrees();
}

Digraph Digraph::from_csr(std::vector<std::uint64_t> offsets, std::vector<NodeId> targets) {
  if (offsets.empty() || offsets.front() != 0 || offsets.back() != targets.size() ||
      !std::is_sorted(offsets.begin(), offsets.end())) {
    throw Error("inconsistent CSR offsets");
  }
  const auto n = offsets.size() - 1;
  for (const auto t : targets) {
    if (t >= n) throw Error("CSR target out of range");
  }
  Digraph g;
  g.offsets_ = std::move(offsets);
  g.targets_ = std::move(targets);
  g.compute_in_degrees();
  return g;
}

void Digraph::compute_in_degrees() {
  in_degree_.assign(node_count(), 0);
  for (const auto v : targets_) ++in_degree_[v];
}

std::size_t LinkGraph::finalize() {
  if (pending_.empty()) return 0;
  // Merge existing edges back into the pending list so repeated loads compose.
  for (NodeId u = 0; u < graph_.node_count(); ++u) {
    for (const auto v : graph_.out(u)) pending_.emplace_back(terms_[u], terms_[v]);
  }
  std::sort(pending_.begin(), pending_.end());
  const auto total = pending_.size();
  pending_.erase(std::unique(pending_.begin(), pending_.end()), pending_.end());
  const auto dropped = total - pending_.size();

  std::vector<rdf::TermId> terms;
  terms.reserve(pending_.size());
  for (const auto& [u, v] : pending_) {
    terms.push_back(u);
    terms.push_back(v);
  }
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

  auto local = [&terms](rdf::TermId t) {
    return static_cast<NodeId>(std::lower_bound(terms.begin(), terms.end(), t) - terms.begin());
  };
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(pending_.size());
  for (const auto& [u, v] : pending_) edges.emplace_back(local(u), local(v));
  pending_.clear();
  pending_.shrink_to_fit();

  terms_ = std::move(terms);
  graph_ = Digraph(terms_.size(), std::move(edges));
  return dropped;
}

std::optional<NodeId> LinkGraph::node_of(rdf::TermId term) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
  if (it == terms_.end() || *it != term) return std::nullopt;
  return static_cast<NodeId>(it - terms_.begin());
}

std::uint32_t LinkGraph::in_degree(rdf::TermId term) const {
  const auto n = node_of(term);
  return n ? graph_.in_degree(*n) : 0;
}

bool LinkGraph::links_to(rdf::TermId from, rdf::TermId to) const {
  const auto u = node_of(from);
  const auto v = node_of(to);
  if (!u || !v) return false;
  const auto out = graph_.out(*u);
  return std::binary_search(out.begin(), out.end(), *v);
}

LinkGraph LinkGraph::from_parts(std::vector<rdf::TermId> terms, Digraph graph) {
  if (terms.size() != graph.node_count()) throw Error("link graph term table size mismatch");
  if (!std::is_sorted(terms.begin(), terms.end()) ||
      std::adjacent_find(terms.begin(), terms.end()) != terms.end()) {
    throw Error("link graph term table not strictly increasing");
  }
  LinkGraph g;
  g.terms_ = std::move(terms);
  g.graph_ = std::move(graph);
  return g;
}

}  // namespace litrank::store
