#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "litrank/store/dataset_store.hpp"
#include "litrank/writers/writer_set.hpp"

namespace litrank::writers {

struct LinkedEntity {
  TermId entity = rdf::kNoTerm;
  std::uint32_t in_links = 0;
};

// One row of the approach comparison. "only" = found by this approach and no
// other; "missing" = found by every other approach but not this one.
struct ApproachComparison {
  std::string approach;
  std::size_t size = 0;
  std::size_t canon_hits = 0;
  std::size_t only_count = 0;
  std::size_t missing_count = 0;
  std::vector<LinkedEntity> top_only;     // by English in-links desc, IRI asc
  std::vector<LinkedEntity> top_missing;
};

// Throws Error for fewer than two sets.
std::vector<ApproachComparison> compare_approaches(std::span<const WriterSet> sets,
                                                   const CanonList& canon,
                                                   const store::DatasetStore& english,
                                                   std::size_t top_k = 5);

}  // namespace litrank::writers
