#pragma once

#include <ostream>
#include <vector>

#include "litrank/ranking/ranking.hpp"
#include "litrank/writers/writer_set.hpp"

namespace litrank::evaluation {

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  friend bool operator==(const RocPoint&, const RocPoint&) = default;
};

struct RocCurve {
  std::vector<RocPoint> points;  // starts at (0,0); one point per ranked entity
  double auc = 0.0;
  std::size_t matched = 0;     // canon members present in the ranking
  std::size_t canon_size = 0;  // includes members that never resolved
};

// Walks the ranking top-down: a canon member moves up by 1/|canon|, anything
// else moves right by 1/(n - matched). The curve therefore ends at
// (1, matched/|canon|). The AUC is the exact area under this step function.
// Throws Error on an empty ranking or empty canon.
RocCurve roc(const ranking::Ranking& ranking, const writers::CanonList& canon);

void write_roc_tsv(std::ostream& out, const RocCurve& curve);

}  // namespace litrank::evaluation
