#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "litrank/rdf/term.hpp"

namespace litrank::store {

using NodeId = std::uint32_t;

// Compressed sparse row digraph over dense node ids 0..n-1.
class Digraph {
 public:
  Digraph() : offsets_(1, 0) {}
  // Edges may arrive in any order; duplicates are kept.
  Digraph(std::size_t node_count, std::vector<std::pair<NodeId, NodeId>> edges);

  std::size_t node_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size(); }
  std::span<const NodeId> out(NodeId u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  std::size_t out_degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  std::uint32_t in_degree(NodeId v) const { return in_degree_[v]; }
  std::span<const std::uint32_t> in_degrees() const { return in_degree_; }
  std::span<const std::uint64_t> offsets() const { return offsets_; }
  std::span<const NodeId> targets() const { return targets_; }

  static Digraph from_csr(std::vector<std::uint64_t> offsets, std::vector<NodeId> targets);

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  void compute_in_degrees();

  std::vector<std::uint64_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<std::uint32_t> in_degree_;
};

// The page-link graph of one edition. Nodes are the articles that occur in at
// least one link, numbered by ascending TermId. Parallel links between the
// same article pair collapse into one edge.
class LinkGraph {
 public:
  void add_link(rdf::TermId from, rdf::TermId to) { pending_.emplace_back(from, to); }
  // Folds pending links into the CSR structure. Returns the number of
  // duplicate links dropped.
  std::size_t finalize();
  bool has_pending() const { return !pending_.empty(); }

  std::size_t node_count() const { return graph_.node_count(); }
  std::size_t edge_count() const { return graph_.edge_count(); }
  const Digraph& graph() const { return graph_; }

  std::optional<NodeId> node_of(rdf::TermId term) const;
  rdf::TermId term_of(NodeId node) const { return terms_[node]; }
  std::span<const rdf::TermId> terms() const { return terms_; }

  // 0 for articles without incoming links or absent from the graph.
  std::uint32_t in_degree(rdf::TermId term) const;
  bool links_to(rdf::TermId from, rdf::TermId to) const;

  static LinkGraph from_parts(std::vector<rdf::TermId> terms, Digraph graph);

  friend bool operator==(const LinkGraph& a, const LinkGraph& b) {
    return a.terms_ == b.terms_ && a.graph_ == b.graph_;
  }

 private:
  std::vector<std::pair<rdf::TermId, rdf::TermId>> pending_;
  std::vector<rdf::TermId> terms_;
  Digraph graph_;
};

}  // namespace litrank::store
