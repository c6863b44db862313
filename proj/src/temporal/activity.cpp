#include "litrank/temporal/activity.hpp"

#include <algorithm>
#include <limits>

#include "litrank/util/error.hpp"

namespace litrank::temporal {

std::optional<ActivityInterval> activity_interval(std::optional<int> birth_year,
                                                  std::optional<int> death_year, int cap_year) {
  if (!birth_year) return std::nullopt;
  ActivityInterval iv;
  iv.start = *birth_year + kActiveFromAge;
  iv.end = std::min(*birth_year + kActiveUntilAge, cap_year);
  if (death_year) iv.end = std::min(iv.end, *death_year);
  if (iv.start > iv.end) return std::nullopt;
  return iv;
}

double ActivityCurve::sum() const {
  double s = 0.0;
  for (const auto& [y, v] : values) s += v;
  return s;
}

double ActivityCurve::at(int year) const {
  auto it = values.find(year);
  return it == values.end() ? 0.0 : it->second;
}

ActivityCurve build_curve(std::string series, std::span<const WeightedInterval> writers) {
  ActivityCurve c;
  c.series = std::move(series);
  if (writers.empty()) return c;
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (const auto& w : writers) {
    lo = std::min(lo, w.interval.start);
    hi = std::max(hi, w.interval.end);
  }
  // Difference array over the year range, then a prefix sum.
  std::vector<double> diff(static_cast<std::size_t>(hi - lo + 2), 0.0);
  for (const auto& w : writers) {
    diff[static_cast<std::size_t>(w.interval.start - lo)] += w.weight;
    diff[static_cast<std::size_t>(w.interval.end - lo + 1)] -= w.weight;
  }
  // Weights are integral in practice, so the prefix sum is exact.
  double running = 0.0;
  for (int y = lo; y <= hi; ++y) {
    running += diff[static_cast<std::size_t>(y - lo)];
    c.values[y] = running;
  }
  c.year_min = lo;
  c.year_max = hi;
  return c;
}

const char* to_string(Weight w) {
  switch (w) {
    case Weight::count: return "count";
    case Weight::in_links: return "in_links";
    case Weight::page_length: return "page_length";
  }
  return "?";
}

CurveBuild build_curve(std::string series, const writers::WriterSet& set,
                       const ranking::Edition& edition, const writers::LifePredicates& preds,
                       Weight weight, int cap_year) {
  CurveBuild out;
  std::vector<WeightedInterval> intervals;
  for (const auto id : set.ids) {
    const auto years = writers::life_years(edition.english, id, preds);
    if (!years.birth) {
      ++out.without_birth_year;
      continue;
    }
    const auto iv = activity_interval(years.birth, years.death, cap_year);
    if (!iv) {
      ++out.empty_interval;
      continue;
    }
    double w = 1.0;
    if (weight != Weight::count) {
      const auto local = edition.article(id);
      if (!local) {
        w = 0.0;
      } else if (weight == Weight::in_links) {
        w = edition.local.links.in_degree(*local);
      } else {
        w = static_cast<double>(edition.local.length_of(*local));
      }
    }
    intervals.push_back({*iv, w});
  }
  out.curve = build_curve(std::move(series), intervals);
  return out;
}

ActivityCurve normalize_area(const ActivityCurve& curve) {
  const double total = curve.sum();
  if (!(total > 0.0)) throw Error("cannot normalize all-zero curve " + curve.series);
  auto out = curve;
  for (auto& [y, v] : out.values) v /= total;
  return out;
}

std::vector<ActivityCurve> normalize_per_year(std::span<const ActivityCurve> family) {
  if (family.empty()) throw Error("normalize_per_year needs at least one curve");
  std::map<int, double> totals;
  for (const auto& c : family) {
    for (const auto& [y, v] : c.values) totals[y] += v;
  }
  std::vector<ActivityCurve> out(family.begin(), family.end());
  for (auto& c : out) {
    for (auto& [y, v] : c.values) {
      const double t = totals[y];
      v = t > 0.0 ? v / t : 0.0;
    }
  }
  return out;
}

void write_curves_csv(std::ostream& out, std::span<const ActivityCurve> curves, int from, int to) {
  out << "series,year,value\n";
  for (const auto& c : curves) {
    for (const auto& [y, v] : c.values) {
      if (y < from || y > to) continue;
      out << c.series << ',' << y << ',' << ranking::format_score(v) << '\n';
    }
  }
}

}  // namespace litrank::temporal
