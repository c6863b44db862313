#pragma once

#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "litrank/store/dataset_store.hpp"

namespace litrank::writers {

using rdf::TermId;

// A duplicate-free set of English entity ids produced by one approach.
struct WriterSet {
  std::string approach;
  std::vector<TermId> ids;  // sorted ascending, unique
  std::map<std::string, std::size_t> stats;

  static WriterSet from(std::string approach, std::vector<TermId> ids);
  bool contains(TermId id) const;
  std::size_t size() const { return ids.size(); }
  bool empty() const { return ids.empty(); }
};

// Reference list of entities (e.g. Nobel laureates in literature). Entries
// that do not resolve against the store are kept by name in `unresolved`.
struct CanonList {
  std::string name;
  std::vector<TermId> ids;  // sorted, unique
  std::vector<std::string> unresolved;

  std::size_t size() const { return ids.size() + unresolved.size(); }
  bool contains(TermId id) const;
};

struct WriterRecord {
  TermId entity = rdf::kNoTerm;
  std::optional<int> birth_year;
  std::optional<int> death_year;
  std::uint32_t in_links_en = 0;
  std::map<std::string, TermId> per_language;
  std::vector<std::string> native_languages;
};

// One line of a tab-separated list file: article key and the remaining field.
struct ListEntry {
  std::size_t line = 0;
  std::string key;
  std::string field;
};

// Reads `key TAB field` lines. Blank lines and lines starting with '#' are
// skipped; a missing field is an empty string.
std::vector<ListEntry> read_list_file(std::istream& in);

// Resolves a key that is either an absolute IRI or an article title
// (spaces or underscores) under resource_prefix.
std::string article_iri(std::string_view key, std::string_view resource_prefix);

inline constexpr std::string_view kDefaultResourcePrefix = "http://dbpedia.org/resource/";

CanonList load_canon(std::string name, std::istream& in, const store::DatasetStore& store,
                     std::string_view resource_prefix = kDefaultResourcePrefix);

// entity -> native language codes. Multiple codes per line are separated by
// commas and/or whitespace.
using NativeMap = std::unordered_map<TermId, std::vector<std::string>>;

NativeMap load_native_languages(std::istream& in, const store::DatasetStore& store,
                                std::string_view resource_prefix = kDefaultResourcePrefix,
                                std::vector<std::string>* unresolved = nullptr);

}  // namespace litrank::writers
