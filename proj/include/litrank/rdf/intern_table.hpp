#pragma once

#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "litrank/rdf/term.hpp"

namespace litrank::rdf {

// Bijective IRI <-> id map. Ids are dense from 0 in insertion order.
// Not thread-safe; each store owns one table and interns from a single thread.
class InternTable {
 public:
  InternTable() = default;
  InternTable(const InternTable& other);
  InternTable& operator=(const InternTable& other);
  InternTable(InternTable&&) noexcept = default;
  InternTable& operator=(InternTable&&) noexcept = default;

  TermId intern(std::string_view iri);
  std::optional<TermId> find(std::string_view iri) const;
  const std::string& text(TermId id) const { return strings_.at(id); }
  std::size_t size() const { return strings_.size(); }
  bool empty() const { return strings_.empty(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  // deque keeps element addresses stable so the map can key on views.
  std::deque<std::string> strings_;
  std::unordered_map<std::string_view, TermId, Hash> ids_;
};

}  // namespace litrank::rdf
