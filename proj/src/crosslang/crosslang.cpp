#include "litrank/crosslang/crosslang.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "litrank/util/log.hpp"

namespace litrank::crosslang {

namespace {

const std::vector<std::string>& languages_of(TermId entity, const writers::NativeMap& natives) {
  static const std::vector<std::string> kNone;
  auto it = natives.find(entity);
  return it == natives.end() ? kNone : it->second;
}

bool is_native(TermId entity, std::string_view lang, const writers::NativeMap& natives) {
  const auto& langs = languages_of(entity, natives);
  return std::find(langs.begin(), langs.end(), lang) != langs.end();
}

}  // namespace

NativeCount native_topk_count(const ranking::Ranking& ranking, std::string_view lang,
                              std::size_t k, const writers::NativeMap& natives) {
  NativeCount out;
  const auto limit = std::min(k, ranking.size());
  for (std::size_t i = 0; i < limit; ++i) {
    const auto entity = ranking.entries[i].entity;
    if (!natives.contains(entity)) {
      ++out.uncovered;
      continue;
    }
    if (is_native(entity, lang, natives)) ++out.count;
  }
  if (out.uncovered > 0) {
    logger().warn("{} of the top {} in {}/{} have no native-language entry", out.uncovered, k,
                  ranking.measure, lang);
  }
  out.fraction = k == 0 ? 0.0 : static_cast<double>(out.count) / static_cast<double>(k);
  return out;
}

NativeSummary summarize_native(const std::map<std::string, ranking::Ranking>& by_language,
                               std::size_t k, const writers::NativeMap& natives) {
  NativeSummary s;
  if (by_language.empty()) return s;
  double sum = 0.0;
  double frac = 0.0;
  for (const auto& [lang, r] : by_language) {
    const auto c = native_topk_count(r, lang, k, natives);
    s.per_language.emplace(lang, c);
    sum += static_cast<double>(c.count);
    frac += c.fraction;
  }
  const auto n = static_cast<double>(by_language.size());
  s.mean_count = sum / n;
  s.mean_fraction = frac / n;
  if (by_language.size() > 1) {
    double sq = 0.0;
    for (const auto& [lang, c] : s.per_language) {
      const double d = static_cast<double>(c.count) - s.mean_count;
      sq += d * d;
    }
    s.stddev_count = std::sqrt(sq / (n - 1.0));
  }
  return s;
}

double reciprocal_rank_sum(std::span<const std::size_t> ranks, std::size_t top_k) {
  double s = 0.0;
  for (const auto r : ranks) {
    if (r >= 1 && r <= top_k) s += 1.0 / static_cast<double>(r);
  }
  return s;
}

CrossLangScore reciprocal_rank_score(TermId entity, const RankingsByLanguage& rankings,
                                     const writers::NativeMap& natives, std::size_t top_k) {
  CrossLangScore out;
  out.entity = entity;
  out.native_languages = languages_of(entity, natives);
  for (const auto& [lang, r] : rankings) {
    if (is_native(entity, lang, natives)) continue;
    const auto limit = std::min(top_k, r.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (r.entries[i].entity != entity) continue;
      const auto rank = r.entries[i].rank;
      out.contributions[lang] = {rank, 1.0 / static_cast<double>(rank)};
      break;
    }
  }
  // Summed in language order so the result does not depend on map internals.
  for (const auto& [lang, c] : out.contributions) out.score += c.reciprocal;
  return out;
}

ForeignRanking foreign_ranking(std::string_view language, const writers::WriterSet& basic,
                               const RankingsByLanguage& rankings,
                               const writers::NativeMap& natives, const rdf::InternTable& terms,
                               std::size_t top_k) {
  ForeignRanking out;
  out.language = std::string(language);
  for (const auto id : basic.ids) {
    if (!is_native(id, language, natives)) continue;
    auto s = reciprocal_rank_score(id, rankings, natives, top_k);
    if (!s.contributions.empty()) ++out.count_top_k;
    out.writers.push_back(std::move(s));
  }
  std::sort(out.writers.begin(), out.writers.end(), [&terms](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return terms.text(a.entity) < terms.text(b.entity);
  });
  return out;
}

void write_foreign_tsv(std::ostream& out, const ForeignRanking& ranking,
                       const rdf::InternTable& terms) {
  std::size_t pos = 0;
  for (const auto& w : ranking.writers) {
    out << ++pos << '\t' << ranking::format_score(w.score) << '\t' << terms.text(w.entity) << '\t';
    bool first = true;
    for (const auto& [lang, c] : w.contributions) {
      if (!first) out << ',';
      out << lang << ':' << c.rank;
      first = false;
    }
    out << '\n';
  }
}

}  // namespace litrank::crosslang
