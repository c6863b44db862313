#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "litrank/rdf/intern_table.hpp"
#include "litrank/rdf/ntriples.hpp"
#include "litrank/rdf/term.hpp"
#include "litrank/store/link_graph.hpp"

namespace litrank::store {

using rdf::TermId;

enum class DatasetKind {
  instance_types,
  article_categories,
  skos_categories,
  infobox_properties,
  mappingbased_properties,
  page_length,
  page_links,
  interlanguage_links,
  persondata,
  redirects,
};

const char* to_string(DatasetKind kind);
// Throws Error for names outside the known set.
DatasetKind parse_dataset_kind(std::string_view name);
std::span<const DatasetKind> all_dataset_kinds();

// Predicate IRIs matched per dataset. Defaults follow the DBpedia 2014 dumps.
struct Predicates {
  std::string type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
  std::string subject = "http://purl.org/dc/terms/subject";
  std::string broader = "http://www.w3.org/2004/02/skos/core#broader";
  std::string pref_label = "http://www.w3.org/2004/02/skos/core#prefLabel";
  std::string page_length = "http://dbpedia.org/ontology/wikiPageLength";
  std::string page_link = "http://dbpedia.org/ontology/wikiPageWikiLink";
  std::string same_as = "http://www.w3.org/2002/07/owl#sameAs";
  std::string redirect = "http://dbpedia.org/ontology/wikiPageRedirects";
};

// type -> instances
class TypeIndex {
 public:
  void add(TermId type, TermId instance) { map_[type].push_back(instance); }
  void freeze();
  // Sorted, duplicate-free once frozen.
  std::span<const TermId> instances(TermId type) const;
  const std::unordered_map<TermId, std::vector<TermId>>& raw() const { return map_; }
  std::unordered_map<TermId, std::vector<TermId>>& raw() { return map_; }
  friend bool operator==(const TypeIndex&, const TypeIndex&) = default;

 private:
  std::unordered_map<TermId, std::vector<TermId>> map_;
};

// Article membership plus the category graph (parent -> subcategory edges).
// The category graph may contain cycles.
class CategoryIndex {
 public:
  void add_membership(TermId article, TermId category) {
    members_[category].push_back(article);
  }
  void add_broader(TermId child, TermId parent) { children_[parent].push_back(child); }
  void set_label(TermId category, std::string label) { labels_[category] = std::move(label); }
  void freeze();

  std::span<const TermId> articles_in(TermId category) const;
  std::span<const TermId> subcategories(TermId category) const;
  // Falls back to nullopt; callers derive a label from the IRI.
  std::optional<std::string_view> label(TermId category) const;
  bool known(TermId category) const;

  std::unordered_map<TermId, std::vector<TermId>>& members() { return members_; }
  std::unordered_map<TermId, std::vector<TermId>>& children() { return children_; }
  std::unordered_map<TermId, std::string>& labels() { return labels_; }
  const std::unordered_map<TermId, std::vector<TermId>>& members() const { return members_; }
  const std::unordered_map<TermId, std::vector<TermId>>& children() const { return children_; }
  const std::unordered_map<TermId, std::string>& labels() const { return labels_; }
  friend bool operator==(const CategoryIndex&, const CategoryIndex&) = default;

 private:
  std::unordered_map<TermId, std::vector<TermId>> members_;
  std::unordered_map<TermId, std::vector<TermId>> children_;
  std::unordered_map<TermId, std::string> labels_;
};

// (entity, predicate) -> values in load order; repeated values are kept.
class PropertyIndex {
 public:
  static std::uint64_t key(TermId entity, TermId predicate) {
    return (std::uint64_t{entity} << 32) | predicate;
  }
  void add(TermId entity, TermId predicate, rdf::Term value) {
    map_[key(entity, predicate)].push_back(std::move(value));
  }
  std::span<const rdf::Term> values(TermId entity, TermId predicate) const;
  std::size_t size() const { return map_.size(); }
  const std::unordered_map<std::uint64_t, std::vector<rdf::Term>>& raw() const { return map_; }
  std::unordered_map<std::uint64_t, std::vector<rdf::Term>>& raw() { return map_; }
  friend bool operator==(const PropertyIndex&, const PropertyIndex&) = default;

 private:
  std::unordered_map<std::uint64_t, std::vector<rdf::Term>> map_;
};

// entity -> language -> counterpart article (interned in the same store).
class InterlangMap {
 public:
  // Returns false if (entity, lang) already had a counterpart.
  bool add(TermId entity, const std::string& lang, TermId foreign);
  std::optional<TermId> counterpart(TermId entity, std::string_view lang) const;
  const std::unordered_map<TermId, std::map<std::string, TermId, std::less<>>>& raw() const {
    return map_;
  }
  friend bool operator==(const InterlangMap&, const InterlangMap&) = default;

 private:
  std::unordered_map<TermId, std::map<std::string, TermId, std::less<>>> map_;
};

// Everything loaded for one language edition. Mutable while loading, then
// frozen; a frozen store is only read, so it can be shared between threads.
struct DatasetStore {
  explicit DatasetStore(std::string lang = "en") : language(std::move(lang)) {}

  std::string language;
  rdf::InternTable terms;
  TypeIndex types;
  CategoryIndex categories;
  PropertyIndex infobox_properties;
  PropertyIndex mapping_properties;
  InterlangMap interlang;
  std::unordered_map<TermId, std::uint64_t> page_length;
  LinkGraph links;
  std::vector<TermId> persons;  // sorted once frozen
  std::unordered_map<TermId, TermId> redirects;
  bool frozen = false;

  void freeze();

  // Convenience lookups by IRI text.
  std::optional<TermId> id(std::string_view iri) const { return terms.find(iri); }
  const std::string& iri(TermId id) const { return terms.text(id); }
  bool is_person(TermId id) const;
  std::uint64_t length_of(TermId id) const;

  friend bool operator==(const DatasetStore& a, const DatasetStore& b);
};

struct LoadStats {
  DatasetKind kind{};
  std::size_t read = 0;
  std::size_t indexed = 0;
  std::size_t skipped = 0;
  rdf::ParseStats parse;
};

LoadStats load_dataset(DatasetKind kind, const std::filesystem::path& path, DatasetStore& store,
                       const Predicates& predicates = {}, const rdf::ParseOptions& options = {});
LoadStats load_dataset(DatasetKind kind, std::istream& in, DatasetStore& store,
                       const Predicates& predicates = {}, const rdf::ParseOptions& options = {});

// Language code of a DBpedia resource IRI: http://dbpedia.org/... is "en",
// http://xx.dbpedia.org/... is "xx". nullopt for anything else.
std::optional<std::string> dbpedia_language(std::string_view iri);

// DBpedia 2014 file naming: <name>_<lang>.nt, optionally .bz2/.gz etc.
std::string dataset_file_stem(DatasetKind kind, std::string_view lang);

}  // namespace litrank::store
