#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "litrank/ranking/measures.hpp"
#include "litrank/writers/basic_set.hpp"
#include "litrank/writers/writer_set.hpp"

namespace litrank::temporal {

inline constexpr int kDefaultCapYear = 2014;
inline constexpr int kActiveFromAge = 20;
inline constexpr int kActiveUntilAge = 60;

struct ActivityInterval {
  int start = 0;
  int end = 0;  // inclusive
  friend bool operator==(const ActivityInterval&, const ActivityInterval&) = default;
};

// Active from age 20 to age 60, cut at death and at cap_year. nullopt without
// a birth year or when the interval would be empty.
std::optional<ActivityInterval> activity_interval(std::optional<int> birth_year,
                                                  std::optional<int> death_year,
                                                  int cap_year = kDefaultCapYear);

// Yearly step function. Every year in [year_min, year_max] has an entry.
struct ActivityCurve {
  std::string series;
  std::map<int, double> values;
  int year_min = 0;
  int year_max = 0;

  double sum() const;
  double at(int year) const;
};

struct WeightedInterval {
  ActivityInterval interval;
  double weight = 1.0;
};

ActivityCurve build_curve(std::string series, std::span<const WeightedInterval> writers);

enum class Weight { count, in_links, page_length };
const char* to_string(Weight w);

struct CurveBuild {
  ActivityCurve curve;
  std::size_t without_birth_year = 0;  // excluded, including death-only writers
  std::size_t empty_interval = 0;
};

// Writers of `set` weighted by 1, in-degree or page length in the edition.
// Birth and death years always come from the English store.
CurveBuild build_curve(std::string series, const writers::WriterSet& set,
                       const ranking::Edition& edition, const writers::LifePredicates& preds,
                       Weight weight, int cap_year = kDefaultCapYear);

// Divides by the sum over years. Throws Error for an all-zero curve.
ActivityCurve normalize_area(const ActivityCurve& curve);

// Per year, divides each series by the cross-series total; years without any
// activity stay zero.
std::vector<ActivityCurve> normalize_per_year(std::span<const ActivityCurve> family);

// Long format `series,year,value`, restricted to [from, to].
void write_curves_csv(std::ostream& out, std::span<const ActivityCurve> curves, int from = 1500,
                      int to = 2015);

}  // namespace litrank::temporal
