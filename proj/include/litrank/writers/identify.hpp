#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "litrank/store/dataset_store.hpp"
#include "litrank/writers/writer_set.hpp"

namespace litrank::writers {

// Articles typed with `type_iri` in instance_types. A type that never occurs
// yields an empty set and a warning.
WriterSet identify_by_template(const store::DatasetStore& store, std::string_view type_iri);

struct CategoryQuery {
  std::string root;
  // Non-root categories are entered only if their label contains this word
  // (ASCII case-insensitive).
  std::optional<std::string> filter_word;
  // Depth of the root is 0. Unbounded when empty; the visited set alone
  // guarantees termination.
  std::optional<int> max_depth;
};

struct CategoryTraversal {
  std::vector<TermId> visited;   // breadth-first order, each category once
  std::vector<TermId> articles;  // sorted, unique, before the person filter
};

// Throws Error if the root category is unknown to the store.
CategoryTraversal traverse_categories(const store::DatasetStore& store, const CategoryQuery& query);

// Breadth-first collection from the root, then intersection with the
// persondata set (skipped with a warning when no persondata was loaded).
WriterSet identify_by_category(const store::DatasetStore& store, const CategoryQuery& query);

// Label used for filtering: skos:prefLabel when present, otherwise the IRI's
// local name without a "Category:" prefix and with underscores as spaces.
std::string category_label(const store::DatasetStore& store, TermId category);

// True iff some case-insensitive occurrence of an include term in `value` is
// not contained in an occurrence of an exclude term.
bool occupation_matches(std::string_view value, std::span<const std::string> include,
                        std::span<const std::string> exclude);

struct OccupationQuery {
  std::string predicate;
  std::vector<std::string> include;
  std::vector<std::string> exclude;
};

// Scans the raw infobox property index. Throws Error on an empty include list.
WriterSet identify_by_occupation(const store::DatasetStore& store, const OccupationQuery& query);

// Text of a property value: literal lexical form, or the IRI's local name with
// underscores as spaces.
std::string value_text(const store::DatasetStore& store, const rdf::Term& value);

}  // namespace litrank::writers
