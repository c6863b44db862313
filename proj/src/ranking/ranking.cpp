#include "litrank/ranking/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "litrank/util/error.hpp"

namespace litrank::ranking {

std::string measure::views(int year) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "V%02d", year % 100);
  return buf;
}

std::optional<std::size_t> Ranking::rank_of(TermId entity) const {
  for (const auto& e : entries) {
    if (e.entity == entity) return e.rank;
  }
  return std::nullopt;
}

std::optional<double> Ranking::score_of(TermId entity) const {
  for (const auto& e : entries) {
    if (e.entity == entity) return e.score;
  }
  return std::nullopt;
}

Ranking make_ranking(std::string measure, std::string language,
                     std::vector<std::pair<TermId, double>> scores, const rdf::InternTable& terms) {
  std::sort(scores.begin(), scores.end(), [&terms](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return terms.text(a.first) < terms.text(b.first);
  });
  std::vector<TermId> ids;
  ids.reserve(scores.size());
  for (const auto& [id, score] : scores) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw Error("ranking input lists an entity twice");
  }
  Ranking r;
  r.measure = std::move(measure);
  r.language = std::move(language);
  r.entries.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    r.entries.push_back({scores[i].first, scores[i].second, i + 1});
  }
  return r;
}

std::string format_score(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("cannot format score");
  return std::string(buf, ptr);
}

void write_ranking_tsv(std::ostream& out, const Ranking& ranking, const rdf::InternTable& terms) {
  for (const auto& e : ranking.entries) {
    out << e.rank << '\t' << format_score(e.score) << '\t' << terms.text(e.entity) << '\n';
  }
}

Ranking read_ranking_tsv(std::istream& in, std::string measure, std::string language,
                         const rdf::InternTable& terms, std::vector<std::string>* unknown) {
  Ranking r;
  r.measure = std::move(measure);
  r.language = std::move(language);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw ParseError(n, "ranking line needs three fields");
    RankedEntry e;
    double score = 0;
    const char* b = line.data();
    auto [p1, e1] = std::from_chars(b, b + t1, e.rank);
    auto [p2, e2] = std::from_chars(b + t1 + 1, b + t2, score);
    if (e1 != std::errc() || p1 != b + t1 || e2 != std::errc() || p2 != b + t2) {
      throw ParseError(n, "bad rank or score");
    }
    e.score = score;
    const auto iri = line.substr(t2 + 1);
    const auto id = terms.find(iri);
    if (!id) {
      if (unknown) unknown->push_back(iri);
      continue;
    }
    e.entity = *id;
    r.entries.push_back(e);
  }
  return r;
}

}  // namespace litrank::ranking
