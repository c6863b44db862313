#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "litrank/store/dataset_store.hpp"
#include "litrank/writers/writer_set.hpp"

namespace litrank::writers {

// Cleaned (mapping-based) properties that carry birth and death information.
struct LifePredicates {
  std::string birth_date = "http://dbpedia.org/ontology/birthDate";
  std::string birth_year = "http://dbpedia.org/ontology/birthYear";
  std::string death_date = "http://dbpedia.org/ontology/deathDate";
  std::string death_year = "http://dbpedia.org/ontology/deathYear";
};

inline constexpr std::uint32_t kDefaultMinInLinks = 10;

// Leading four-digit year of a date literal ("1820-05-01", "1820").
// Negative and shorter years yield nullopt.
std::optional<int> leading_year(std::string_view lexical);

struct LifeYears {
  std::optional<int> birth;
  std::optional<int> death;
  // True if any of the four predicates has a value, parseable or not.
  bool has_any_property = false;
};

// Dates win over bare years. A death before birth drops the death year.
LifeYears life_years(const store::DatasetStore& store, TermId entity, const LifePredicates& preds);

// Keeps entities with at least one birth/death property AND at least
// min_in_links English in-links.
WriterSet filter_basic_set(const WriterSet& set, const store::DatasetStore& store,
                           const LifePredicates& preds, std::uint32_t min_in_links = kDefaultMinInLinks);

// Subset of the basic set that has an article in `lang`. English maps to
// itself. Throws Error if lang is not among `languages`.
WriterSet project_to_language(const WriterSet& basic, const store::DatasetStore& english,
                              std::string_view lang, std::span<const std::string> languages);

std::vector<WriterRecord> build_records(const WriterSet& basic, const store::DatasetStore& english,
                                        const LifePredicates& preds,
                                        std::span<const std::string> languages,
                                        const NativeMap* natives = nullptr);

}  // namespace litrank::writers
