#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "litrank/temporal/activity.hpp"
#include "litrank/util/error.hpp"
#include "litrank/writers/identify.hpp"
#include "support.hpp"

using namespace litrank;
using namespace litrank::temporal;
using testing_support::kRes;
using testing_support::mini_en;

namespace {

ActivityCurve random_curve(std::mt19937_64& rng, std::string name) {
  std::vector<WeightedInterval> w;
  for (int i = 0; i < 1 + static_cast<int>(rng() % 30); ++i) {
    const int start = 1400 + static_cast<int>(rng() % 600);
    w.push_back({{start, start + static_cast<int>(rng() % 41)}, 1.0 + static_cast<double>(rng() % 500)});
  }
  return build_curve(std::move(name), w);
}

}  // namespace

TEST(Interval, ActivePhaseOfTwentyToSixty) {
  EXPECT_EQ(activity_interval(1820, 1890), (ActivityInterval{1840, 1880}));
  EXPECT_EQ(activity_interval(1800, 1830), (ActivityInterval{1820, 1830}));
  EXPECT_EQ(activity_interval(1820, std::nullopt), (ActivityInterval{1840, 1880}));
  EXPECT_EQ(activity_interval(1970, std::nullopt), (ActivityInterval{1990, 2014}));
  EXPECT_FALSE(activity_interval(2000, std::nullopt, 2014));
  EXPECT_FALSE(activity_interval(std::nullopt, 1900));
  // Died before twenty.
  EXPECT_FALSE(activity_interval(1800, 1815));
}

TEST(Interval, MatchesDefinitionOnRandomYears) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 5000; ++i) {
    const int birth = 1000 + static_cast<int>(rng() % 1100);
    const std::optional<int> death =
        rng() % 3 ? std::optional<int>(birth + static_cast<int>(rng() % 110)) : std::nullopt;
    const int cap = 1900 + static_cast<int>(rng() % 200);
    const auto got = activity_interval(birth, death, cap);
    int end = std::min(birth + kActiveUntilAge, cap);
    if (death) end = std::min(end, *death);
    const int start = birth + kActiveFromAge;
    if (start > end) {
      EXPECT_FALSE(got);
    } else {
      ASSERT_TRUE(got);
      EXPECT_EQ(*got, (ActivityInterval{start, end}));
    }
  }
}

TEST(Curve, SingleWriterIsABoxcar) {
  const std::vector<WeightedInterval> w{{{1840, 1880}, 1.0}};
  const auto c = build_curve("one", w);
  EXPECT_EQ(c.values.size(), 41u);
  EXPECT_EQ(c.sum(), 41.0);
  EXPECT_EQ(c.at(1840), 1.0);
  EXPECT_EQ(c.at(1880), 1.0);
  EXPECT_EQ(c.at(1881), 0.0);
  EXPECT_EQ(c.at(1839), 0.0);
}

TEST(Curve, OverlapAddsWeights) {
  const std::vector<WeightedInterval> w{{{1840, 1860}, 3.0}, {{1850, 1870}, 5.0}};
  const auto c = build_curve("two", w);
  EXPECT_EQ(c.at(1845), 3.0);
  EXPECT_EQ(c.at(1855), 8.0);
  EXPECT_EQ(c.at(1865), 5.0);
  EXPECT_EQ(c.year_min, 1840);
  EXPECT_EQ(c.year_max, 1870);
}

TEST(Curve, MatchesBruteForceRecount) {
  std::mt19937_64 rng(50);
  std::vector<WeightedInterval> w;
  for (int i = 0; i < 50; ++i) {
    const int start = 1500 + static_cast<int>(rng() % 400);
    w.push_back({{start, start + static_cast<int>(rng() % 41)}, static_cast<double>(rng() % 100)});
  }
  const auto c = build_curve("random", w);
  for (int year = 1450; year < 2000; ++year) {
    double want = 0;
    for (const auto& x : w) {
      if (x.interval.start <= year && year <= x.interval.end) want += x.weight;
    }
    EXPECT_EQ(c.at(year), want) << year;
  }
}

TEST(Curve, ShiftingYearsShiftsTheCurve) {
  std::mt19937_64 rng(2);
  for (int round = 0; round < 50; ++round) {
    std::vector<WeightedInterval> w, shifted;
    const int k = static_cast<int>(rng() % 200) - 100;
    for (int i = 0; i < 10; ++i) {
      const int start = 1600 + static_cast<int>(rng() % 300);
      const ActivityInterval iv{start, start + static_cast<int>(rng() % 41)};
      const double weight = static_cast<double>(1 + rng() % 9);
      w.push_back({iv, weight});
      shifted.push_back({{iv.start + k, iv.end + k}, weight});
    }
    const auto a = build_curve("a", w), b = build_curve("b", shifted);
    EXPECT_EQ(b.year_min, a.year_min + k);
    for (const auto& [year, v] : a.values) EXPECT_EQ(b.at(year + k), v);
  }
}

TEST(Normalize, AreaExample) {
  const std::vector<WeightedInterval> w{{{1840, 1841}, 2.0}};
  const auto n = normalize_area(build_curve("x", w));
  EXPECT_EQ(n.at(1840), 0.5);
  EXPECT_EQ(n.at(1841), 0.5);
}

TEST(Normalize, AreaSumsToOneAndIsIdempotent) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 300; ++round) {
    const auto n = normalize_area(random_curve(rng, "r"));
    EXPECT_NEAR(n.sum(), 1.0, 1e-12);
    const auto again = normalize_area(n);
    for (const auto& [year, v] : n.values) EXPECT_NEAR(again.at(year), v, 1e-15);
  }
}

TEST(Normalize, AllZeroCurveThrows) {
  const std::vector<WeightedInterval> w{{{1840, 1841}, 0.0}};
  EXPECT_THROW(normalize_area(build_curve("z", w)), Error);
}

TEST(Normalize, PerYearExample) {
  const std::vector<WeightedInterval> a{{{1900, 1900}, 1.0}}, b{{{1900, 1900}, 3.0}};
  const std::vector<ActivityCurve> fam{build_curve("a", a), build_curve("b", b)};
  const auto n = normalize_per_year(fam);
  EXPECT_EQ(n[0].at(1900), 0.25);
  EXPECT_EQ(n[1].at(1900), 0.75);
  const auto single = normalize_per_year(std::span(fam).first(1));
  EXPECT_EQ(single[0].at(1900), 1.0);
}

TEST(Normalize, FifteenSeriesSumToOnePerYear) {
  std::mt19937_64 rng(15);
  std::vector<ActivityCurve> fam;
  for (int i = 0; i < 15; ++i) fam.push_back(random_curve(rng, "s" + std::to_string(i)));
  const auto n = normalize_per_year(fam);
  ASSERT_EQ(n.size(), 15u);
  for (int year = 1400; year <= 2050; ++year) {
    double raw = 0, sum = 0;
    for (std::size_t i = 0; i < fam.size(); ++i) {
      raw += fam[i].at(year);
      sum += n[i].at(year);
    }
    if (raw > 0) {
      EXPECT_NEAR(sum, 1.0, 1e-12) << year;
    } else {
      EXPECT_EQ(sum, 0.0) << year;
    }
  }
  const auto again = normalize_per_year(n);
  for (std::size_t i = 0; i < n.size(); ++i) {
    for (const auto& [year, v] : n[i].values) EXPECT_NEAR(again[i].at(year), v, 1e-15);
  }
}

TEST(FixtureCurves, CountsAndWeights) {
  const auto& st = mini_en();
  const auto set = testing_support::set_of(
      {"William_Shakespeare", "Minor_Poet", "Robert_Christgau", "Jane_Doe_Bot"}, st);
  const ranking::Edition en{st, st};
  const auto counts = build_curve("count", set, en, writers::LifePredicates{}, Weight::count);
  EXPECT_EQ(counts.without_birth_year, 1u);  // Jane_Doe_Bot
  EXPECT_EQ(counts.curve.at(1584), 1.0);     // Shakespeare from 1584
  EXPECT_EQ(counts.curve.at(1616), 1.0);
  EXPECT_EQ(counts.curve.at(1617), 0.0);     // died 1616
  EXPECT_EQ(counts.curve.at(1840), 1.0);     // Minor_Poet 1840..1880
  EXPECT_EQ(counts.curve.at(2002), 1.0);     // Christgau 1962..2002
  EXPECT_EQ(counts.curve.sum(), 33 + 41 + 41);

  const auto links = build_curve("il", set, en, writers::LifePredicates{}, Weight::in_links);
  EXPECT_EQ(links.curve.at(1600), 14.0);
  EXPECT_EQ(links.curve.at(1850), 3.0);
  const auto len = build_curve("pl", set, en, writers::LifePredicates{}, Weight::page_length);
  EXPECT_EQ(len.curve.at(1990), 20000.0);
}

TEST(Export, CsvClipsToRange) {
  const std::vector<WeightedInterval> w{{{1490, 1510}, 1.0}};
  const std::vector<ActivityCurve> curves{build_curve("x", w)};
  std::ostringstream out;
  write_curves_csv(out, curves, 1500, 1502);
  EXPECT_EQ(out.str(), "series,year,value\nx,1500,1\nx,1501,1\nx,1502,1\n");
}
