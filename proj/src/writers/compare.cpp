#include "litrank/writers/compare.hpp"

#include <algorithm>

#include "litrank/util/error.hpp"

namespace litrank::writers {

namespace {

std::vector<LinkedEntity> top_by_links(const std::vector<TermId>& ids,
                                       const store::DatasetStore& english, std::size_t k) {
  std::vector<LinkedEntity> all;
  all.reserve(ids.size());
  for (const auto id : ids) all.push_back({id, english.links.in_degree(id)});
  std::sort(all.begin(), all.end(), [&english](const LinkedEntity& a, const LinkedEntity& b) {
    if (a.in_links != b.in_links) return a.in_links > b.in_links;
    return english.iri(a.entity) < english.iri(b.entity);
  });
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace

std::vector<ApproachComparison> compare_approaches(std::span<const WriterSet> sets,
                                                   const CanonList& canon,
                                                   const store::DatasetStore& english,
                                                   std::size_t top_k) {
  if (sets.size() < 2) throw Error("compare_approaches needs at least two sets");
  std::vector<ApproachComparison> rows;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    const auto& self = sets[i];
    std::vector<TermId> others_union;
    std::vector<TermId> others_intersection;
    bool first = true;
    for (std::size_t j = 0; j < sets.size(); ++j) {
      if (j == i) continue;
      const auto& other = sets[j].ids;
      std::vector<TermId> u;
      std::set_union(others_union.begin(), others_union.end(), other.begin(), other.end(),
                     std::back_inserter(u));
      others_union = std::move(u);
      if (first) {
        others_intersection = other;
        first = false;
      } else {
        std::vector<TermId> x;
        std::set_intersection(others_intersection.begin(), others_intersection.end(),
                              other.begin(), other.end(), std::back_inserter(x));
        others_intersection = std::move(x);
      }
    }
    std::vector<TermId> only;
    std::set_difference(self.ids.begin(), self.ids.end(), others_union.begin(),
                        others_union.end(), std::back_inserter(only));
    std::vector<TermId> missing;
    std::set_difference(others_intersection.begin(), others_intersection.end(), self.ids.begin(),
                        self.ids.end(), std::back_inserter(missing));

    ApproachComparison row;
    row.approach = self.approach;
    row.size = self.size();
    row.canon_hits = static_cast<std::size_t>(
        std::count_if(self.ids.begin(), self.ids.end(), [&](TermId id) { return canon.contains(id); }));
    row.only_count = only.size();
    row.missing_count = missing.size();
    row.top_only = top_by_links(only, english, top_k);
    row.top_missing = top_by_links(missing, english, top_k);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace litrank::writers
