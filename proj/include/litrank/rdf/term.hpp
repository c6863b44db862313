#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

namespace litrank::rdf {

// Dense id handed out by an InternTable. Ids are only meaningful relative to
// the table that produced them.
using TermId = std::uint32_t;

inline constexpr TermId kNoTerm = ~TermId{0};

struct Iri {
  TermId id = kNoTerm;
  friend bool operator==(const Iri&, const Iri&) = default;
};

// A literal carries at most one of lang / datatype.
struct Literal {
  std::string lexical;
  std::optional<std::string> lang;
  std::optional<TermId> datatype;
  friend bool operator==(const Literal&, const Literal&) = default;
};

using Term = std::variant<Iri, Literal>;

struct Triple {
  TermId subject = kNoTerm;
  TermId predicate = kNoTerm;
  Term object;
  friend bool operator==(const Triple&, const Triple&) = default;
};

inline bool is_iri(const Term& t) { return std::holds_alternative<Iri>(t); }
inline const Literal* as_literal(const Term& t) { return std::get_if<Literal>(&t); }
inline std::optional<TermId> iri_id(const Term& t) {
  if (const auto* i = std::get_if<Iri>(&t)) return i->id;
  return std::nullopt;
}

}  // namespace litrank::rdf
