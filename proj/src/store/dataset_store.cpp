#include "litrank/store/dataset_store.hpp"

#include <algorithm>
#include <array>
#include <charconv>

#include "litrank/rdf/input.hpp"
#include "litrank/util/error.hpp"

namespace litrank::store {

namespace {

constexpr std::array kKinds = {
    DatasetKind::instance_types,      DatasetKind::article_categories,
    DatasetKind::skos_categories,     DatasetKind::infobox_properties,
    DatasetKind::mappingbased_properties, DatasetKind::page_length,
    DatasetKind::page_links,          DatasetKind::interlanguage_links,
    DatasetKind::persondata,          DatasetKind::redirects,
};

void sort_unique(std::vector<TermId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

template <typename Map>
std::span<const TermId> lookup_span(const Map& m, TermId key) {
  auto it = m.find(key);
  if (it == m.end()) return {};
  return it->second;
}

std::optional<std::uint64_t> parse_non_negative(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

const char* to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::instance_types: return "instance_types";
    case DatasetKind::article_categories: return "article_categories";
    case DatasetKind::skos_categories: return "skos_categories";
    case DatasetKind::infobox_properties: return "infobox_properties";
    case DatasetKind::mappingbased_properties: return "mappingbased_properties";
    case DatasetKind::page_length: return "page_length";
    case DatasetKind::page_links: return "page_links";
    case DatasetKind::interlanguage_links: return "interlanguage_links";
    case DatasetKind::persondata: return "persondata";
    case DatasetKind::redirects: return "redirects";
  }
  return "?";
}

DatasetKind parse_dataset_kind(std::string_view name) {
  for (const auto k : kKinds) {
    if (name == to_string(k)) return k;
  }
  throw Error("unknown dataset kind '" + std::string(name) + "'");
}

std::span<const DatasetKind> all_dataset_kinds() { return kKinds; }

std::string dataset_file_stem(DatasetKind kind, std::string_view lang) {
  return std::string(to_string(kind)) + "_" + std::string(lang);
}

std::optional<std::string> dbpedia_language(std::string_view iri) {
  constexpr std::string_view kHttp = "http://";
  constexpr std::string_view kHost = "dbpedia.org/";
  if (!iri.starts_with(kHttp)) return std::nullopt;
  iri.remove_prefix(kHttp.size());
  if (iri.starts_with(kHost)) return "en";
  const auto dot = iri.find('.');
  if (dot == std::string_view::npos || dot == 0) return std::nullopt;
  if (!iri.substr(dot + 1).starts_with(kHost)) return std::nullopt;
  return std::string(iri.substr(0, dot));
}

void TypeIndex::freeze() {
  for (auto& [type, ids] : map_) sort_unique(ids);
}

std::span<const TermId> TypeIndex::instances(TermId type) const {
  return lookup_span(map_, type);
}

void CategoryIndex::freeze() {
  for (auto& [c, ids] : members_) sort_unique(ids);
  for (auto& [c, ids] : children_) sort_unique(ids);
}

std::span<const TermId> CategoryIndex::articles_in(TermId category) const {
  return lookup_span(members_, category);
}

std::span<const TermId> CategoryIndex::subcategories(TermId category) const {
  return lookup_span(children_, category);
}

std::optional<std::string_view> CategoryIndex::label(TermId category) const {
  auto it = labels_.find(category);
  if (it == labels_.end()) return std::nullopt;
  return std::string_view(it->second);
}

bool CategoryIndex::known(TermId category) const {
  return members_.contains(category) || children_.contains(category) ||
         labels_.contains(category);
}

std::span<const rdf::Term> PropertyIndex::values(TermId entity, TermId predicate) const {
  auto it = map_.find(key(entity, predicate));
  if (it == map_.end()) return {};
  return it->second;
}

bool InterlangMap::add(TermId entity, const std::string& lang, TermId foreign) {
  return map_[entity].emplace(lang, foreign).second;
}

std::optional<TermId> InterlangMap::counterpart(TermId entity, std::string_view lang) const {
  auto it = map_.find(entity);
  if (it == map_.end()) return std::nullopt;
  auto jt = it->second.find(lang);
  if (jt == it->second.end()) return std::nullopt;
  return jt->second;
}

void DatasetStore::freeze() {
  links.finalize();
  types.freeze();
  categories.freeze();
  sort_unique(persons);
  frozen = true;
}

bool DatasetStore::is_person(TermId id) const {
  return std::binary_search(persons.begin(), persons.end(), id);
}

std::uint64_t DatasetStore::length_of(TermId id) const {
  auto it = page_length.find(id);
  return it == page_length.end() ? 0 : it->second;
}

bool operator==(const DatasetStore& a, const DatasetStore& b) {
  if (a.language != b.language || a.terms.size() != b.terms.size()) return false;
  for (TermId i = 0; i < a.terms.size(); ++i) {
    if (a.terms.text(i) != b.terms.text(i)) return false;
  }
  return a.types == b.types && a.categories == b.categories &&
         a.infobox_properties == b.infobox_properties &&
         a.mapping_properties == b.mapping_properties && a.interlang == b.interlang &&
         a.page_length == b.page_length && a.links == b.links && a.persons == b.persons &&
         a.redirects == b.redirects;
}

namespace {

// `in` is already decompressed.
LoadStats load_decoded(DatasetKind kind, std::istream& in, DatasetStore& store,
                       const Predicates& predicates, const rdf::ParseOptions& options) {
  if (store.frozen) throw Error("cannot load into a frozen store");
  auto& terms = store.terms;
  const TermId p_type = terms.intern(predicates.type);
  const TermId p_subject = terms.intern(predicates.subject);
  const TermId p_broader = terms.intern(predicates.broader);
  const TermId p_label = terms.intern(predicates.pref_label);
  const TermId p_length = terms.intern(predicates.page_length);
  const TermId p_link = terms.intern(predicates.page_link);
  const TermId p_same = terms.intern(predicates.same_as);
  const TermId p_redirect = terms.intern(predicates.redirect);

  LoadStats stats;
  stats.kind = kind;

  auto sink = [&](const rdf::Triple& t) {
    ++stats.read;
    const auto object = rdf::iri_id(t.object);
    bool used = false;
    switch (kind) {
      case DatasetKind::instance_types:
        if (t.predicate == p_type && object) {
          store.types.add(*object, t.subject);
          used = true;
        }
        break;
      case DatasetKind::article_categories:
        if (t.predicate == p_subject && object) {
          store.categories.add_membership(t.subject, *object);
          used = true;
        }
        break;
      case DatasetKind::skos_categories:
        if (t.predicate == p_broader && object) {
          store.categories.add_broader(t.subject, *object);
          used = true;
        } else if (const auto* lit = rdf::as_literal(t.object); t.predicate == p_label && lit) {
          store.categories.set_label(t.subject, lit->lexical);
          used = true;
        }
        break;
      case DatasetKind::infobox_properties:
        store.infobox_properties.add(t.subject, t.predicate, t.object);
        used = true;
        break;
      case DatasetKind::mappingbased_properties:
        store.mapping_properties.add(t.subject, t.predicate, t.object);
        used = true;
        break;
      case DatasetKind::page_length:
        if (const auto* lit = rdf::as_literal(t.object); t.predicate == p_length && lit) {
          if (const auto v = parse_non_negative(lit->lexical)) {
            store.page_length[t.subject] = *v;
            used = true;
          }
        }
        break;
      case DatasetKind::page_links:
        if (t.predicate == p_link && object) {
          store.links.add_link(t.subject, *object);
          used = true;
        }
        break;
      case DatasetKind::interlanguage_links:
        if (t.predicate == p_same && object) {
          const auto lang = dbpedia_language(terms.text(*object));
          if (lang && *lang != store.language) used = store.interlang.add(t.subject, *lang, *object);
        }
        break;
      case DatasetKind::persondata:
        store.persons.push_back(t.subject);
        used = true;
        break;
      case DatasetKind::redirects:
        if (t.predicate == p_redirect && object) {
          used = store.redirects.emplace(t.subject, *object).second;
        }
        break;
    }
    if (used) {
      ++stats.indexed;
    } else {
      ++stats.skipped;
    }
  };

  rdf::NTriplesParser parser(terms, options);
  parser.parse_stream(in, sink);
  stats.parse = parser.stats();

  if (kind == DatasetKind::page_links) {
    const auto dropped = store.links.finalize();
    stats.indexed -= dropped;
    stats.skipped += dropped;
  }
  return stats;
}

}  // namespace

LoadStats load_dataset(DatasetKind kind, const std::filesystem::path& path, DatasetStore& store,
                       const Predicates& predicates, const rdf::ParseOptions& options) {
  rdf::InputFile file(path);
  return load_decoded(kind, file.stream(), store, predicates, options);
}

LoadStats load_dataset(DatasetKind kind, std::istream& in, DatasetStore& store,
                       const Predicates& predicates, const rdf::ParseOptions& options) {
  rdf::DecodedInput decoded(in);
  return load_decoded(kind, decoded.stream(), store, predicates, options);
}

}  // namespace litrank::store
