#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "litrank/ranking/ranking.hpp"
#include "litrank/writers/writer_set.hpp"

namespace litrank::crosslang {

using rdf::TermId;

inline constexpr std::size_t kDefaultTopK = 25;

struct NativeCount {
  std::size_t count = 0;
  double fraction = 0.0;    // count / k, even when the ranking is shorter than k
  std::size_t uncovered = 0;  // top-k entities missing from the native map
};

NativeCount native_topk_count(const ranking::Ranking& ranking, std::string_view lang,
                              std::size_t k, const writers::NativeMap& natives);

struct NativeSummary {
  double mean_count = 0.0;
  double stddev_count = 0.0;  // sample standard deviation over languages
  double mean_fraction = 0.0;
  std::map<std::string, NativeCount> per_language;
};

// Mean over languages of native_topk_count for one measure.
NativeSummary summarize_native(const std::map<std::string, ranking::Ranking>& by_language,
                               std::size_t k, const writers::NativeMap& natives);

struct Contribution {
  std::size_t rank = 0;
  double reciprocal = 0.0;
};

struct CrossLangScore {
  TermId entity = rdf::kNoTerm;
  std::vector<std::string> native_languages;
  double score = 0.0;
  std::map<std::string, Contribution> contributions;  // never a native language
};

// Sum of 1/rank over non-native editions where the entity ranks within top_k.
double reciprocal_rank_sum(std::span<const std::size_t> ranks, std::size_t top_k = kDefaultTopK);

// language -> ranking of one measure
using RankingsByLanguage = std::map<std::string, ranking::Ranking>;

CrossLangScore reciprocal_rank_score(TermId entity, const RankingsByLanguage& rankings,
                                     const writers::NativeMap& natives,
                                     std::size_t top_k = kDefaultTopK);

struct ForeignRanking {
  std::string language;
  std::vector<CrossLangScore> writers;  // score desc, IRI asc
  // Natives of `language` that reach the top_k of at least one foreign edition.
  std::size_t count_top_k = 0;
};

// All writers of `basic` native to `language`, ordered by cross-language score.
ForeignRanking foreign_ranking(std::string_view language, const writers::WriterSet& basic,
                               const RankingsByLanguage& rankings,
                               const writers::NativeMap& natives, const rdf::InternTable& terms,
                               std::size_t top_k = kDefaultTopK);

// `position TAB score TAB iri TAB contributions` with contributions as
// lang:rank pairs separated by commas.
void write_foreign_tsv(std::ostream& out, const ForeignRanking& ranking,
                       const rdf::InternTable& terms);

}  // namespace litrank::crosslang
