#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "litrank/rdf/intern_table.hpp"

namespace litrank::ranking {

using rdf::TermId;

// Measure tags used in file names and reports.
namespace measure {
inline constexpr std::string_view kPageLength = "PL";
inline constexpr std::string_view kInLinks = "IL";
inline constexpr std::string_view kPageRankWriters = "PW";
inline constexpr std::string_view kPageRankComplete = "PC";
// Page-view measures are "V" + two-digit year, e.g. V14.
std::string views(int year);
}  // namespace measure

struct RankedEntry {
  TermId entity = rdf::kNoTerm;
  double score = 0.0;
  std::size_t rank = 0;  // 1-based
  friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

// Scores are non-increasing; equal scores are ordered by ascending IRI, so
// ranks are 1..n with no shared ranks.
struct Ranking {
  std::string measure;
  std::string language;
  std::vector<RankedEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  // Position of an entity (1-based), nullopt if absent. Linear scan.
  std::optional<std::size_t> rank_of(TermId entity) const;
  std::optional<double> score_of(TermId entity) const;
};

Ranking make_ranking(std::string measure, std::string language,
                     std::vector<std::pair<TermId, double>> scores, const rdf::InternTable& terms);

// Shortest decimal text that round-trips to the same double.
std::string format_score(double v);

// `rank TAB score TAB iri` per line.
void write_ranking_tsv(std::ostream& out, const Ranking& ranking, const rdf::InternTable& terms);
// IRIs unknown to `terms` are reported through `unknown` and skipped.
Ranking read_ranking_tsv(std::istream& in, std::string measure, std::string language,
                         const rdf::InternTable& terms, std::vector<std::string>* unknown = nullptr);

}  // namespace litrank::ranking
