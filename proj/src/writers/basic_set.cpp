#include "litrank/writers/basic_set.hpp"

#include <algorithm>

#include "litrank/util/error.hpp"

namespace litrank::writers {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::optional<int> first_year(const store::DatasetStore& store, TermId entity,
                              std::optional<TermId> pred, bool& seen) {
  if (!pred) return std::nullopt;
  for (const auto& v : store.mapping_properties.values(entity, *pred)) {
    seen = true;
    if (const auto* lit = rdf::as_literal(v)) {
      if (auto y = leading_year(lit->lexical)) return y;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> leading_year(std::string_view lexical) {
  while (!lexical.empty() && lexical.front() == ' ') lexical.remove_prefix(1);
  if (lexical.size() < 4) return std::nullopt;
  for (int i = 0; i < 4; ++i) {
    if (!is_digit(lexical[i])) return std::nullopt;
  }
  if (lexical.size() > 4 && is_digit(lexical[4])) return std::nullopt;
  return (lexical[0] - '0') * 1000 + (lexical[1] - '0') * 100 + (lexical[2] - '0') * 10 +
         (lexical[3] - '0');
}

LifeYears life_years(const store::DatasetStore& store, TermId entity, const LifePredicates& preds) {
  LifeYears out;
  bool seen = false;
  out.birth = first_year(store, entity, store.id(preds.birth_date), seen);
  if (!out.birth) out.birth = first_year(store, entity, store.id(preds.birth_year), seen);
  out.death = first_year(store, entity, store.id(preds.death_date), seen);
  if (!out.death) out.death = first_year(store, entity, store.id(preds.death_year), seen);
  out.has_any_property = seen;
  if (out.birth && out.death && *out.death < *out.birth) out.death.reset();
  return out;
}

WriterSet filter_basic_set(const WriterSet& set, const store::DatasetStore& store,
                           const LifePredicates& preds, std::uint32_t min_in_links) {
  std::vector<TermId> kept;
  std::size_t no_life = 0;
  std::size_t few_links = 0;
  for (const auto id : set.ids) {
    const bool has_life = life_years(store, id, preds).has_any_property;
    const bool linked = store.links.in_degree(id) >= min_in_links;
    if (!has_life) ++no_life;
    if (!linked) ++few_links;
    if (has_life && linked) kept.push_back(id);
  }
  auto out = WriterSet::from(set.approach, std::move(kept));
  out.stats["input"] = set.size();
  out.stats["without_life_data"] = no_life;
  out.stats["below_min_in_links"] = few_links;
  out.stats["min_in_links"] = min_in_links;
  return out;
}

WriterSet project_to_language(const WriterSet& basic, const store::DatasetStore& english,
                              std::string_view lang, std::span<const std::string> languages) {
  if (std::find(languages.begin(), languages.end(), lang) == languages.end()) {
    throw Error("unknown language code '" + std::string(lang) + "'");
  }
  if (lang == english.language) {
    auto out = basic;
    out.approach = basic.approach + "@" + std::string(lang);
    return out;
  }
  std::vector<TermId> kept;
  for (const auto id : basic.ids) {
    if (english.interlang.counterpart(id, lang)) kept.push_back(id);
  }
  return WriterSet::from(basic.approach + "@" + std::string(lang), std::move(kept));
}

std::vector<WriterRecord> build_records(const WriterSet& basic, const store::DatasetStore& english,
                                        const LifePredicates& preds,
                                        std::span<const std::string> languages,
                                        const NativeMap* natives) {
  std::vector<WriterRecord> out;
  out.reserve(basic.size());
  for (const auto id : basic.ids) {
    WriterRecord r;
    r.entity = id;
    const auto years = life_years(english, id, preds);
    r.birth_year = years.birth;
    r.death_year = years.death;
    r.in_links_en = english.links.in_degree(id);
    for (const auto& lang : languages) {
      if (lang == english.language) {
        r.per_language[lang] = id;
      } else if (const auto f = english.interlang.counterpart(id, lang)) {
        r.per_language[lang] = *f;
      }
    }
    if (natives) {
      if (auto it = natives->find(id); it != natives->end()) r.native_languages = it->second;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace litrank::writers
