#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "litrank/ranking/ranking.hpp"

namespace litrank::evaluation {

// 1-based ranks of the values in ascending order; tied values share the
// average of the positions they occupy.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of the average ranks. nullopt when either side has
// zero variance. Throws Error on length mismatch or fewer than two values.
std::optional<double> spearman(std::span<const double> a, std::span<const double> b);

// Tau-b in O(n log n). nullopt when either side is constant.
std::optional<double> kendall(std::span<const double> a, std::span<const double> b);

// Scores of two rankings aligned by entity. Throws Error if the rankings do
// not cover the same entities.
std::pair<std::vector<double>, std::vector<double>> aligned_scores(const ranking::Ranking& a,
                                                                   const ranking::Ranking& b);

struct Coefficients {
  std::optional<double> rho;
  std::optional<double> tau;
};

struct CorrelationResult {
  std::string measure_a;
  std::string measure_b;
  // Arithmetic mean over the languages where the coefficient is defined.
  std::optional<double> rho;
  std::optional<double> tau;
  std::map<std::string, Coefficients> per_language;
};

// language -> measure -> ranking
using RankingTable = std::map<std::string, std::map<std::string, ranking::Ranking>>;

// One result per unordered measure pair (a before b in `measures` order).
// Every language must have every measure.
std::vector<CorrelationResult> correlation_matrix(const RankingTable& rankings,
                                                  std::span<const std::string> measures,
                                                  unsigned threads = 1);

const CorrelationResult* find_pair(std::span<const CorrelationResult> matrix, std::string_view a,
                                   std::string_view b);

// Square table: rho above the diagonal, tau below, "-" on it, "NA" when undefined.
void write_correlation_tsv(std::ostream& out, std::span<const CorrelationResult> matrix,
                           std::span<const std::string> measures);

}  // namespace litrank::evaluation
