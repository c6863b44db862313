#include "litrank/ranking/pageviews.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>
#include <vector>

#include "litrank/rdf/input.hpp"

namespace litrank::ranking {

namespace {

int hex(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool parse_u64(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      const int hi = hex(s[i + 1]);
      const int lo = hex(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out.push_back(static_cast<char>(hi * 16 + lo));
        i += 2;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

std::string normalize_title(std::string_view raw) {
  auto t = percent_decode(raw);
  std::replace(t.begin(), t.end(), ' ', '_');
  if (!t.empty() && t[0] >= 'a' && t[0] <= 'z') t[0] = static_cast<char>(t[0] - 'a' + 'A');
  return t;
}

namespace {

// Shared line loop; `emit` receives (project, raw title, count) for every
// well-formed line and returns whether the line was used.
template <typename Emit>
PagecountStats scan_pagecounts(std::istream& in, Emit&& emit) {
  PagecountStats local;
  std::string line;
  while (std::getline(in, line)) {
    ++local.lines;
    std::string_view v = line;
    if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
    std::string_view fields[4];
    std::size_t nf = 0;
    std::size_t pos = 0;
    bool extra = false;
    while (pos <= v.size()) {
      const auto sp = v.find(' ', pos);
      const auto end = sp == std::string_view::npos ? v.size() : sp;
      if (nf == 4) {
        extra = true;
        break;
      }
      fields[nf++] = v.substr(pos, end - pos);
      if (sp == std::string_view::npos) break;
      pos = sp + 1;
    }
    std::uint64_t count = 0;
    std::uint64_t bytes = 0;
    if (extra || nf != 4 || fields[0].empty() || fields[1].empty() ||
        !parse_u64(fields[2], count) || !parse_u64(fields[3], bytes)) {
      ++local.malformed;
      continue;
    }
    if (emit(fields[0], fields[1], count)) ++local.matched;
  }
  return local;
}

}  // namespace

std::size_t parse_pagecounts(std::istream& in, std::string_view project, const PagecountSink& sink,
                             PagecountStats* stats) {
  std::string title;
  const auto local = scan_pagecounts(
      in, [&](std::string_view p, std::string_view raw, std::uint64_t count) {
        if (p != project) return false;
        title = percent_decode(raw);
        sink(title, count);
        return true;
      });
  if (stats) *stats = local;
  return local.matched;
}

std::map<std::string, TitleCounts> count_titles_by_project(const std::filesystem::path& path,
                                                           std::span<const std::string> projects,
                                                           PagecountStats* stats) {
  std::map<std::string, TitleCounts> out;
  std::vector<std::pair<std::string_view, TitleCounts*>> slots;
  for (const auto& p : projects) slots.emplace_back(p, &out[p]);
  rdf::InputFile file(path);
  const auto local = scan_pagecounts(
      file.stream(), [&](std::string_view p, std::string_view raw, std::uint64_t count) {
        for (auto& [name, counts] : slots) {
          if (name != p) continue;
          (*counts)[normalize_title(raw)] += count;
          return true;
        }
        return false;
      });
  if (stats) *stats = local;
  return out;
}

TitleCounts count_titles(const std::filesystem::path& path, std::string_view project,
                         PagecountStats* stats) {
  rdf::InputFile file(path);
  TitleCounts counts;
  parse_pagecounts(
      file.stream(), project,
      [&counts](std::string_view title, std::uint64_t n) { counts[normalize_title(title)] += n; },
      stats);
  return counts;
}

void merge_counts(TitleCounts& into, const TitleCounts& from) {
  for (const auto& [t, n] : from) into[t] += n;
}

std::uint64_t PageViewCounts::views(TermId entity, int year) const {
  auto it = map_.find({entity, year});
  return it == map_.end() ? 0 : it->second;
}

PageViewCounts aggregate_views(const TitleCounts& counts,
                               const std::unordered_map<std::string, std::string>& redirects,
                               const std::unordered_map<std::string, TermId>& title_map, int year,
                               AggregateStats* stats) {
  AggregateStats local;
  auto next = redirects;
  std::unordered_map<std::string, std::string> final_target;

  std::vector<std::string> sources;
  sources.reserve(next.size());
  for (const auto& kv : next) sources.push_back(kv.first);
  std::sort(sources.begin(), sources.end());

  auto resolve = [&](const std::string& start) {
    std::vector<std::string> path;
    std::unordered_set<std::string> on_path;
    std::string cur = start;
    std::string target;
    while (true) {
      if (auto m = final_target.find(cur); m != final_target.end()) {
        target = m->second;
        break;
      }
      on_path.insert(cur);
      path.push_back(cur);
      auto it = next.find(cur);
      if (it == next.end()) {
        target = cur;
        break;
      }
      if (on_path.contains(it->second)) {
        next.erase(it);
        ++local.redirect_cycles_broken;
        target = cur;
        break;
      }
      cur = it->second;
    }
    for (auto& p : path) final_target.emplace(std::move(p), target);
  };
  for (const auto& s : sources) resolve(s);

  PageViewCounts out;
  for (const auto& [title, n] : counts) {
    const std::string* target = &title;
    if (auto it = final_target.find(title); it != final_target.end() && it->second != title) {
      target = &it->second;
      ++local.redirected_titles;
    }
    auto e = title_map.find(*target);
    if (e == title_map.end()) {
      ++local.unmatched_titles;
      local.unmatched_views += n;
      continue;
    }
    out.add(e->second, year, n);
  }
  if (stats) *stats = local;
  return out;
}

}  // namespace litrank::ranking
