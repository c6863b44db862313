#include "litrank/writers/identify.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "litrank/util/error.hpp"
#include "litrank/util/log.hpp"

namespace litrank::writers {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string local_name(std::string_view iri) {
  const auto cut = iri.find_last_of("/#");
  std::string name(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
  std::replace(name.begin(), name.end(), '_', ' ');
  return name;
}

// Applies the persondata filter in place; records what happened in stats.
void restrict_to_persons(const store::DatasetStore& store, WriterSet& set) {
  set.stats["before_person_filter"] = set.ids.size();
  if (store.persons.empty()) {
    logger().warn("no persondata loaded; {} result is not restricted to persons", set.approach);
    set.stats["person_filter_applied"] = 0;
    return;
  }
  std::erase_if(set.ids, [&store](TermId id) { return !store.is_person(id); });
  set.stats["person_filter_applied"] = 1;
}

}  // namespace

WriterSet identify_by_template(const store::DatasetStore& store, std::string_view type_iri) {
  const auto type = store.id(type_iri);
  std::span<const TermId> instances;
  if (type) instances = store.types.instances(*type);
  if (instances.empty()) {
    logger().warn("type {} has no instances in the {} store", type_iri, store.language);
  }
  auto set = WriterSet::from("template", {instances.begin(), instances.end()});
  set.stats["instances"] = set.size();
  return set;
}

std::string category_label(const store::DatasetStore& store, TermId category) {
  if (const auto l = store.categories.label(category)) return std::string(*l);
  auto name = local_name(store.iri(category));
  constexpr std::string_view kPrefix = "Category:";
  if (std::string_view(name).starts_with(kPrefix)) name.erase(0, kPrefix.size());
  return name;
}

CategoryTraversal traverse_categories(const store::DatasetStore& store, const CategoryQuery& query) {
  const auto root = store.id(query.root);
  if (!root || !store.categories.known(*root)) {
    throw Error("unknown root category " + query.root);
  }
  const auto filter = query.filter_word ? std::optional(ascii_lower(*query.filter_word))
                                        : std::nullopt;

  CategoryTraversal out;
  std::unordered_set<TermId> seen{*root};
  std::deque<std::pair<TermId, int>> queue{{*root, 0}};
  while (!queue.empty()) {
    const auto [cat, depth] = queue.front();
    queue.pop_front();
    out.visited.push_back(cat);
    const auto arts = store.categories.articles_in(cat);
    out.articles.insert(out.articles.end(), arts.begin(), arts.end());
    if (query.max_depth && depth >= *query.max_depth) continue;
    for (const auto child : store.categories.subcategories(cat)) {
      if (seen.contains(child)) continue;
      if (filter && ascii_lower(category_label(store, child)).find(*filter) == std::string::npos) {
        continue;
      }
      seen.insert(child);
      queue.emplace_back(child, depth + 1);
    }
  }
  std::sort(out.articles.begin(), out.articles.end());
  out.articles.erase(std::unique(out.articles.begin(), out.articles.end()), out.articles.end());
  return out;
}

WriterSet identify_by_category(const store::DatasetStore& store, const CategoryQuery& query) {
  auto traversal = traverse_categories(store, query);
  auto set = WriterSet::from("category", std::move(traversal.articles));
  set.stats["categories_visited"] = traversal.visited.size();
  restrict_to_persons(store, set);
  return set;
}

bool occupation_matches(std::string_view value, std::span<const std::string> include,
                        std::span<const std::string> exclude) {
  const auto text = ascii_lower(value);
  std::vector<std::pair<std::size_t, std::size_t>> masked;
  for (const auto& term : exclude) {
    if (term.empty()) continue;
    const auto t = ascii_lower(term);
    for (auto pos = text.find(t); pos != std::string::npos; pos = text.find(t, pos + 1)) {
      masked.emplace_back(pos, pos + t.size());
    }
  }
  for (const auto& term : include) {
    if (term.empty()) continue;
    const auto t = ascii_lower(term);
    for (auto pos = text.find(t); pos != std::string::npos; pos = text.find(t, pos + 1)) {
      const auto end = pos + t.size();
      const bool shadowed = std::any_of(masked.begin(), masked.end(), [&](const auto& m) {
        return m.first <= pos && end <= m.second;
      });
      if (!shadowed) return true;
    }
  }
  return false;
}

std::string value_text(const store::DatasetStore& store, const rdf::Term& value) {
  if (const auto* lit = rdf::as_literal(value)) return lit->lexical;
  return local_name(store.iri(std::get<rdf::Iri>(value).id));
}

WriterSet identify_by_occupation(const store::DatasetStore& store, const OccupationQuery& query) {
  if (query.include.empty()) throw Error("occupation query needs at least one include term");
  std::vector<TermId> hits;
  std::size_t with_property = 0;
  if (const auto pred = store.id(query.predicate)) {
    for (const auto& [key, values] : store.infobox_properties.raw()) {
      if ((key & 0xFFFFFFFFu) != *pred) continue;
      ++with_property;
      const bool match = std::any_of(values.begin(), values.end(), [&](const rdf::Term& v) {
        return occupation_matches(value_text(store, v), query.include, query.exclude);
      });
      if (match) hits.push_back(static_cast<TermId>(key >> 32));
    }
  } else {
    logger().warn("occupation predicate {} not present in the {} store", query.predicate,
                  store.language);
  }
  auto set = WriterSet::from("occupation", std::move(hits));
  set.stats["with_property"] = with_property;
  set.stats["matching_value"] = set.size();
  restrict_to_persons(store, set);
  return set;
}

}  // namespace litrank::writers
