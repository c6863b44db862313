#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>

#include "litrank/rdf/term.hpp"

namespace litrank::ranking {

using rdf::TermId;

// Percent-decodes `raw`, turns spaces into underscores and upper-cases the
// first character (ASCII only), matching DBpedia resource local names.
std::string normalize_title(std::string_view raw);
std::string percent_decode(std::string_view s);

struct PagecountStats {
  std::size_t lines = 0;
  std::size_t matched = 0;
  std::size_t malformed = 0;
};

using PagecountSink = std::function<void(std::string_view title, std::uint64_t count)>;

// Reads `project title count bytes` lines, emitting decoded (not normalized)
// titles for lines whose project equals `project`. Returns lines emitted.
std::size_t parse_pagecounts(std::istream& in, std::string_view project, const PagecountSink& sink,
                             PagecountStats* stats = nullptr);

// title -> summed count, titles normalized. The file may be compressed.
using TitleCounts = std::unordered_map<std::string, std::uint64_t>;
TitleCounts count_titles(const std::filesystem::path& path, std::string_view project,
                         PagecountStats* stats = nullptr);
// One pass over a file for several projects at once; every requested project
// has an entry in the result.
std::map<std::string, TitleCounts> count_titles_by_project(const std::filesystem::path& path,
                                                           std::span<const std::string> projects,
                                                           PagecountStats* stats = nullptr);
// Associative merge of per-file counts.
void merge_counts(TitleCounts& into, const TitleCounts& from);

class PageViewCounts {
 public:
  void add(TermId entity, int year, std::uint64_t views) { map_[{entity, year}] += views; }
  std::uint64_t views(TermId entity, int year) const;
  const std::map<std::pair<TermId, int>, std::uint64_t>& raw() const { return map_; }

 private:
  std::map<std::pair<TermId, int>, std::uint64_t> map_;
};

struct AggregateStats {
  std::size_t redirect_cycles_broken = 0;
  std::size_t unmatched_titles = 0;
  std::uint64_t unmatched_views = 0;
  std::size_t redirected_titles = 0;
};

// Folds redirect titles onto their final targets and attributes the views to
// entities via title_map. Redirect cycles are broken by dropping the edge that
// closes the cycle. All titles must already be normalized.
PageViewCounts aggregate_views(const TitleCounts& counts,
                               const std::unordered_map<std::string, std::string>& redirects,
                               const std::unordered_map<std::string, TermId>& title_map, int year,
                               AggregateStats* stats = nullptr);

}  // namespace litrank::ranking
