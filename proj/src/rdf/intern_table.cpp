#include "litrank/rdf/intern_table.hpp"

#include <limits>

#include "litrank/util/error.hpp"

namespace litrank::rdf {

InternTable::InternTable(const InternTable& other) { *this = other; }

InternTable& InternTable::operator=(const InternTable& other) {
  if (this == &other) return *this;
  strings_.clear();
  ids_.clear();
  ids_.reserve(other.size());
  for (const auto& s : other.strings_) intern(s);
  return *this;
}

TermId InternTable::intern(std::string_view iri) {
  if (auto it = ids_.find(iri); it != ids_.end()) return it->second;
  if (strings_.size() >= std::numeric_limits<TermId>::max() - 1) {
    throw Error("intern table overflow");
  }
  const auto id = static_cast<TermId>(strings_.size());
  const auto& stored = strings_.emplace_back(iri);
  ids_.emplace(std::string_view(stored), id);
  return id;
}

std::optional<TermId> InternTable::find(std::string_view iri) const {
  if (auto it = ids_.find(iri); it != ids_.end()) return it->second;
  return std::nullopt;
}

}  // namespace litrank::rdf
