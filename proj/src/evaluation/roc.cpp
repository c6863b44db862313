#include "litrank/evaluation/roc.hpp"

#include <cstdint>

#include "litrank/ranking/ranking.hpp"
#include "litrank/util/error.hpp"

namespace litrank::evaluation {

RocCurve roc(const ranking::Ranking& ranking, const writers::CanonList& canon) {
  if (ranking.empty()) throw Error("roc of an empty ranking");
  if (canon.size() == 0) throw Error("roc against an empty canon");

  RocCurve curve;
  curve.canon_size = canon.size();
  for (const auto& e : ranking.entries) {
    if (canon.contains(e.entity)) ++curve.matched;
  }
  const std::uint64_t negatives = ranking.size() - curve.matched;
  const auto canon_n = static_cast<double>(curve.canon_size);

  curve.points.reserve(ranking.size() + 2);
  curve.points.push_back({0.0, 0.0});
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  // Sum of tp counts at each false-positive step; area = that / (|canon| * negatives).
  std::uint64_t area_units = 0;
  for (const auto& e : ranking.entries) {
    if (canon.contains(e.entity)) {
      ++tp;
    } else {
      ++fp;
      area_units += tp;
    }
    curve.points.push_back({negatives ? static_cast<double>(fp) / static_cast<double>(negatives) : 0.0,
                            static_cast<double>(tp) / canon_n});
  }
  if (negatives == 0) {
    curve.points.push_back({1.0, static_cast<double>(tp) / canon_n});
    curve.auc = static_cast<double>(tp) / canon_n;
  } else {
    curve.auc = static_cast<double>(area_units) / (canon_n * static_cast<double>(negatives));
  }
  return curve;
}

void write_roc_tsv(std::ostream& out, const RocCurve& curve) {
  out << "fpr\ttpr\n";
  for (const auto& p : curve.points) {
    out << ranking::format_score(p.fpr) << '\t' << ranking::format_score(p.tpr) << '\n';
  }
}

}  // namespace litrank::evaluation
