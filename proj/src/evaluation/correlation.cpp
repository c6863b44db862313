#include "litrank/evaluation/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <unordered_map>

#include "litrank/util/error.hpp"
#include "litrank/util/parallel.hpp"

namespace litrank::evaluation {

namespace {

void check_inputs(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error("correlation inputs differ in length");
  if (a.size() < 2) throw Error("correlation needs at least two values");
}

// Sum over tie groups of t(t-1)/2 for a sorted sequence.
template <typename It, typename Eq>
std::int64_t tied_pairs(It first, It last, Eq eq) {
  std::int64_t total = 0;
  while (first != last) {
    auto run = first;
    std::int64_t t = 0;
    while (run != last && eq(*run, *first)) {
      ++run;
      ++t;
    }
    total += t * (t - 1) / 2;
    first = run;
  }
  return total;
}

// Stable merge sort on `v` counting inversions (strictly greater before smaller).
std::int64_t count_swaps(std::vector<double>& v) {
  std::vector<double> buf(v.size());
  std::int64_t swaps = 0;
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const auto mid = std::min(lo + width, v.size());
      const auto hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo;
      std::size_t j = mid;
      std::size_t k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buf[k++] = v[j++];
        } else {
          buf[k++] = v[i++];
        }
      }
      while (i < mid) buf[k++] = v[i++];
      while (j < hi) buf[k++] = v[j++];
    }
    v.swap(buf);
  }
  return swaps;
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return values[i] < values[j]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    // Positions i..j (0-based) share rank ((i+1)+(j+1))/2.
    const double r = static_cast<double>(i + j + 2) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> spearman(std::span<const double> a, std::span<const double> b) {
  check_inputs(a, b);
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const auto n = static_cast<double>(a.size());
  const double mean = (n + 1.0) / 2.0;  // average ranks always sum to n(n+1)/2
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double da = ra[i] - mean;
    const double db = rb[i] - mean;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return std::nullopt;
  return sab / std::sqrt(saa * sbb);
}

std::optional<double> kendall(std::span<const double> a, std::span<const double> b) {
  check_inputs(a, b);
  const auto n = static_cast<std::int64_t>(a.size());
  std::vector<std::pair<double, double>> pairs(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) pairs[i] = {a[i], b[i]};
  std::sort(pairs.begin(), pairs.end());

  const std::int64_t n0 = n * (n - 1) / 2;
  const std::int64_t ties_a =
      tied_pairs(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x.first == y.first; });
  const std::int64_t ties_ab = tied_pairs(pairs.begin(), pairs.end(), [](const auto& x, const auto& y) { return x == y; });

  std::vector<double> second(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) second[i] = pairs[i].second;
  const std::int64_t swaps = count_swaps(second);
  const std::int64_t ties_b =
      tied_pairs(second.begin(), second.end(), [](double x, double y) { return x == y; });

  const std::int64_t numerator = n0 - ties_a - ties_b + ties_ab - 2 * swaps;
  const std::int64_t da = n0 - ties_a;
  const std::int64_t db = n0 - ties_b;
  if (da == 0 || db == 0) return std::nullopt;
  return static_cast<double>(numerator) /
         std::sqrt(static_cast<double>(da) * static_cast<double>(db));
}

std::pair<std::vector<double>, std::vector<double>> aligned_scores(const ranking::Ranking& a,
                                                                   const ranking::Ranking& b) {
  if (a.size() != b.size()) {
    throw Error("rankings " + a.measure + " and " + b.measure + " differ in size for " + a.language);
  }
  std::unordered_map<rdf::TermId, double> score_b;
  score_b.reserve(b.size());
  for (const auto& e : b.entries) score_b.emplace(e.entity, e.score);
  std::pair<std::vector<double>, std::vector<double>> out;
  out.first.reserve(a.size());
  out.second.reserve(a.size());
  for (const auto& e : a.entries) {
    auto it = score_b.find(e.entity);
    if (it == score_b.end()) {
      throw Error("rankings " + a.measure + " and " + b.measure + " cover different entities");
    }
    out.first.push_back(e.score);
    out.second.push_back(it->second);
  }
  return out;
}

std::vector<CorrelationResult> correlation_matrix(const RankingTable& rankings,
                                                  std::span<const std::string> measures,
                                                  unsigned threads) {
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < measures.size(); ++i) {
    for (std::size_t j = i + 1; j < measures.size(); ++j) cells.emplace_back(i, j);
  }
  std::vector<CorrelationResult> out(cells.size());
  parallel_for(cells.size(), threads, [&](std::size_t c) {
    const auto& ma = measures[cells[c].first];
    const auto& mb = measures[cells[c].second];
    CorrelationResult r;
    r.measure_a = ma;
    r.measure_b = mb;
    double rho_sum = 0.0;
    double tau_sum = 0.0;
    std::size_t rho_n = 0;
    std::size_t tau_n = 0;
    for (const auto& [lang, by_measure] : rankings) {
      const auto ia = by_measure.find(ma);
      const auto ib = by_measure.find(mb);
      if (ia == by_measure.end() || ib == by_measure.end()) {
        throw Error("language " + lang + " lacks ranking " + (ia == by_measure.end() ? ma : mb));
      }
      Coefficients k;
      if (ia->second.size() >= 2) {
        const auto [xa, xb] = aligned_scores(ia->second, ib->second);
        k.rho = spearman(xa, xb);
        k.tau = kendall(xa, xb);
      }
      if (k.rho) {
        rho_sum += *k.rho;
        ++rho_n;
      }
      if (k.tau) {
        tau_sum += *k.tau;
        ++tau_n;
      }
      r.per_language.emplace(lang, k);
    }
    if (rho_n) r.rho = rho_sum / static_cast<double>(rho_n);
    if (tau_n) r.tau = tau_sum / static_cast<double>(tau_n);
    out[c] = std::move(r);
  });
  return out;
}

const CorrelationResult* find_pair(std::span<const CorrelationResult> matrix, std::string_view a,
                                   std::string_view b) {
  for (const auto& r : matrix) {
    if ((r.measure_a == a && r.measure_b == b) || (r.measure_a == b && r.measure_b == a)) return &r;
  }
  return nullptr;
}

void write_correlation_tsv(std::ostream& out, std::span<const CorrelationResult> matrix,
                           std::span<const std::string> measures) {
  auto fmt = [](std::optional<double> v) {
    if (!v) return std::string("NA");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return std::string(buf);
  };
  out << "rho\\tau";
  for (const auto& m : measures) out << '\t' << m;
  out << '\n';
  for (std::size_t i = 0; i < measures.size(); ++i) {
    out << measures[i];
    for (std::size_t j = 0; j < measures.size(); ++j) {
      out << '\t';
      if (i == j) {
        out << '-';
        continue;
      }
      const auto* r = find_pair(matrix, measures[i], measures[j]);
      if (!r) {
        out << "NA";
      } else {
        out << fmt(i < j ? r->rho : r->tau);
      }
    }
    out << '\n';
  }
}

}  // namespace litrank::evaluation
