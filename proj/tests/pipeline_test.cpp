#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include <json.hpp>

#include "litrank/pipeline/config.hpp"
#include "litrank/pipeline/pipeline.hpp"
#include "litrank/util/error.hpp"
#include "fixture_expectations.hpp"
#include "support.hpp"

using namespace litrank;
using namespace litrank::pipeline;
using nlohmann::json;
using testing_support::read_text;
using testing_support::TempDir;
using testing_support::write_text;

namespace {

const fs::path kSourceDir = LITRANK_SOURCE_DIR;

// Fixture experiment copied somewhere writable; outputs land in <root>/out.
fs::path copy_mini(const TempDir& dir) {
  const auto root = dir / "mini";
  fs::copy(testing_support::fixture("mini"), root, fs::copy_options::recursive);
  fs::remove_all(root / "out");
  return root;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LITRANK_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> tree_contents(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), root).generic_string();
    // Timings and the snapshot cache keys (input mtimes) are per run by design.
    if (rel == "run_log.json" || rel.ends_with(".fingerprint.json")) continue;
    files[rel] = read_text(e.path());
  }
  return files;
}

std::vector<Stage> every_stage() { return {all_stages().begin(), all_stages().end()}; }

}  // namespace

TEST(Config, ShippedExperimentEncodesEveryDefault) {
  const auto path = kSourceDir / "config" / "dbpedia2014.yaml";
  const auto c = parse_config(read_text(path), path.parent_path());
  const std::vector<std::string> langs{"en", "de", "fr", "ru", "it", "es", "pt", "zh",
                                       "fa", "ar", "ko", "hu", "sh", "ro", "tr"};
  EXPECT_EQ(c.languages, langs);
  EXPECT_EQ(c.type_iri, "http://dbpedia.org/ontology/Writer");
  ASSERT_EQ(c.categories.size(), 2u);
  EXPECT_EQ(c.categories[0].query.root, "http://dbpedia.org/resource/Category:Writers");
  EXPECT_EQ(c.categories[0].query.filter_word, "writer");
  EXPECT_EQ(c.categories[1].query.root, "http://dbpedia.org/resource/Category:Writers_by_century");
  EXPECT_EQ(c.occupation.predicate, "http://dbpedia.org/property/occupation");
  EXPECT_EQ(c.occupation.include, (std::vector<std::string>{"writer", "poet", "novelist"}));
  EXPECT_EQ(c.occupation.exclude, (std::vector<std::string>{"songwriter", "screenwriter"}));
  EXPECT_EQ(c.basic_set_from, "template");
  EXPECT_EQ(c.min_in_links, 10u);
  EXPECT_EQ(c.graph_threshold, 60u);
  EXPECT_EQ(c.top_k, 25u);
  EXPECT_EQ(c.pagerank.damping, 0.85);
  EXPECT_EQ(c.pagerank.tolerance, 1e-10);
  EXPECT_EQ(c.pagerank.max_iterations, 100);
  EXPECT_EQ(c.cap_year, 2014);
  EXPECT_EQ(c.plot_from, 1500);
  EXPECT_EQ(c.plot_to, 2015);
  EXPECT_EQ(c.graph_seed, 42u);
  EXPECT_EQ(c.graph_languages, std::vector<std::string>{"en"});
  std::vector<int> years;
  for (const auto& [year, entries] : c.pagecounts) years.push_back(year);
  EXPECT_EQ(years, (std::vector<int>{2012, 2013, 2014}));
  EXPECT_EQ(c.measures(), (std::vector<std::string>{"PL", "IL", "PW", "PC", "V12", "V13", "V14"}));
  EXPECT_EQ(c.predicates.page_link, "http://dbpedia.org/ontology/wikiPageWikiLink");
  EXPECT_EQ(c.predicates.type, "http://www.w3.org/1999/02/22-rdf-syntax-ns#type");
  EXPECT_EQ(c.output_dir, path.parent_path() / "results" / "dbpedia2014");
}

TEST(Config, ShippedValuesMatchLibraryDefaults) {
  const auto path = kSourceDir / "config" / "dbpedia2014.yaml";
  const auto shipped = parse_config(read_text(path), path.parent_path());
  const auto minimal = parse_config("output_dir: out\nlanguages: [en]\n", path.parent_path());
  auto a = parameters_json(shipped), b = parameters_json(minimal);
  // Only the parts the shipped file chooses deliberately differ.
  for (auto* j : {&a, &b}) {
    j->erase("languages");
    (*j)["identify"].erase("categories");
    (*j)["identify"].erase("canon");
    (*j)["rank"].erase("pagecounts");
    (*j)["rank"].erase("measures");
    (*j)["crosslang"].erase("native_languages");
  }
  EXPECT_EQ(a, b) << a.dump(1) << "\n" << b.dump(1);
}

TEST(Config, CollectsEverySchemaProblem) {
  const std::string yaml =
      "output_dir: out\n"
      "languages: [en]\n"
      "colour: blue\n"
      "rank:\n  damping: 1.5\n"
      "graph:\n  threshold: many\n";
  try {
    parse_config(yaml, "/tmp");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("colour"), std::string::npos) << what;
    EXPECT_NE(what.find("damping"), std::string::npos) << what;
    EXPECT_NE(what.find("threshold"), std::string::npos) << what;
  }
}

TEST(Config, RejectsMalformedYaml) {
  EXPECT_THROW(parse_config("languages: [en\n", "/tmp"), ConfigError);
  EXPECT_THROW(parse_config("- just\n- a list\n", "/tmp"), ConfigError);
}

TEST(Config, HubLanguageIsRequired) {
  EXPECT_THROW(parse_config("output_dir: out\nlanguages: [de, fr]\n", "/tmp"), ConfigError);
}

TEST(Config, MissingDumpsAreReported) {
  const auto path = kSourceDir / "config" / "dbpedia2014.yaml";
  const auto c = parse_config(read_text(path), path.parent_path());
  EXPECT_FALSE(check_paths(c).empty());
  EXPECT_THROW(load_config(path), ConfigError);
}

TEST(Config, FixtureIsValid) {
  TempDir dir;
  const auto root = copy_mini(dir);
  const auto c = load_config(root / "config.yaml");
  EXPECT_TRUE(check_paths(c).empty());
  EXPECT_EQ(c.output_dir, root / "out");
  const auto en = resolve_datasets(c, "en");
  for (const auto kind : required_datasets("en")) EXPECT_TRUE(en.count(kind));
}

TEST(Stages, OrderAndDependencies) {
  const auto stages = every_stage();
  ASSERT_EQ(stages.size(), 7u);
  for (std::size_t i = 0; i < stages.size(); ++i) {
    EXPECT_EQ(parse_stage(to_string(stages[i])), stages[i]);
    for (const auto dep : dependencies(stages[i])) {
      const auto pos = std::find(stages.begin(), stages.end(), dep) - stages.begin();
      EXPECT_LT(static_cast<std::size_t>(pos), i);
    }
  }
  EXPECT_THROW(parse_stage("plot"), Error);
}

TEST(Run, FixtureManifestCounts) {
  TempDir dir;
  const auto root = copy_mini(dir);
  const auto config = load_config(root / "config.yaml");
  const auto report = run(config, {every_stage(), 1, false});
  EXPECT_EQ(report.stages.size(), 7u);
  EXPECT_TRUE(report.reused_snapshots.empty());

  const auto m = json::parse(read_text(root / "out" / "manifest.json"));
  const auto& st = m["stages"];
  EXPECT_EQ(st["ingest"]["en"]["datasets"]["page_links"]["malformed_lines"], 1);
  EXPECT_EQ(st["identify"]["sets"]["template"], 6);
  EXPECT_EQ(st["identify"]["basic_set"], expected::kBasic.size());
  EXPECT_EQ(st["identify"]["canon"]["size"], 3);
  EXPECT_EQ(st["identify"]["canon"]["resolved"], 2);
  EXPECT_EQ(st["rank"]["pagecounts"]["2014"]["malformed_lines"], 1);
  EXPECT_TRUE(st["rank"]["en"]["pagerank_complete"]["converged"].get<bool>());
  EXPECT_EQ(m["parameters"]["graph"]["threshold"], 2);
  EXPECT_EQ(m["inputs"]["datasets"]["en"]["page_links"]["path"], "en/page_links_en.nt");

  std::set<std::string> basic;
  std::istringstream lines(read_text(root / "out" / "identify" / "basic_set.txt"));
  for (std::string line; std::getline(lines, line);) basic.insert(line);
  std::set<std::string> want;
  for (const auto& n : expected::kBasic) want.insert(testing_support::kRes + n);
  EXPECT_EQ(basic, want);

  for (const auto* rel : {"rank/en/PW.tsv", "rank/de/V14.tsv", "evaluate/auc.tsv",
                          "evaluate/correlation.tsv", "temporal/languages_per_year.csv",
                          "crosslang/native_top25.tsv", "graph/writers_en.dot",
                          "graph/writers_en.graphml"}) {
    EXPECT_TRUE(fs::exists(root / "out" / rel)) << rel;
  }
}

TEST(Run, MissingPrerequisiteThrowsBeforeWork) {
  TempDir dir;
  const auto root = copy_mini(dir);
  const auto config = load_config(root / "config.yaml");
  try {
    run(config, {{Stage::rank}, 1, false});
    FAIL() << "expected DependencyError";
  } catch (const DependencyError& e) {
    EXPECT_EQ(e.stage(), Stage::rank);
    EXPECT_EQ(e.missing(), Stage::ingest);
  }
  EXPECT_FALSE(fs::exists(root / "out" / "rank"));
  // Producing the prerequisite in the same run is enough.
  EXPECT_NO_THROW(run(config, {{Stage::identify, Stage::ingest}, 1, false}));
  EXPECT_NO_THROW(run(config, {{Stage::rank}, 1, false}));
}

TEST(Run, SnapshotsAreReusedUntilInputsChange) {
  TempDir dir;
  const auto root = copy_mini(dir);
  const auto config = load_config(root / "config.yaml");
  run(config, {{Stage::ingest}, 1, false});
  const auto again = run(config, {{Stage::ingest}, 1, false});
  EXPECT_EQ(again.reused_snapshots, (std::vector<std::string>{"en", "de", "fr"}));

  std::ofstream(root / "de" / "page_length_de.nt", std::ios::app)
      << "<http://de.dbpedia.org/resource/Neu> <http://dbpedia.org/ontology/wikiPageLength> "
         "\"5\"^^<http://www.w3.org/2001/XMLSchema#nonNegativeInteger> .\n";
  const auto third = run(config, {{Stage::ingest}, 1, false});
  EXPECT_EQ(third.reused_snapshots, (std::vector<std::string>{"en", "fr"}));
}

TEST(Run, ThreadCountDoesNotChangeOutputs) {
  TempDir a, b;
  const auto ra = copy_mini(a), rb = copy_mini(b);
  run(load_config(ra / "config.yaml"), {every_stage(), 1, false});
  run(load_config(rb / "config.yaml"), {every_stage(), 4, false});
  EXPECT_EQ(tree_contents(ra / "out"), tree_contents(rb / "out"));
}

TEST(Run, StrictParseStopsOnMalformedLine) {
  TempDir dir;
  const auto root = copy_mini(dir);
  EXPECT_THROW(run(load_config(root / "config.yaml"), {{Stage::ingest}, 1, true}), Error);
}

TEST(Cli, RunAllTwiceIsByteIdentical) {
  TempDir a, b;
  const auto ra = copy_mini(a), rb = copy_mini(b);
  ASSERT_EQ(run_cli("run-all --config " + (ra / "config.yaml").string()), 0);
  ASSERT_EQ(run_cli("run-all --config " + (rb / "config.yaml").string()), 0);
  const auto first = tree_contents(ra / "out");
  EXPECT_GT(first.size(), 50u);
  EXPECT_EQ(first, tree_contents(rb / "out"));

  // Rerunning in place with reused snapshots changes nothing either.
  ASSERT_EQ(run_cli("run-all --config " + (ra / "config.yaml").string()), 0);
  EXPECT_EQ(first, tree_contents(ra / "out"));
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const auto root = copy_mini(dir);
  const auto cfg = (root / "config.yaml").string();
  EXPECT_EQ(run_cli("validate --config " + cfg), 0);
  EXPECT_EQ(run_cli("rank --config " + cfg), 1);
  EXPECT_EQ(run_cli("run-all --stages ingest,identify --config " + cfg), 0);
  EXPECT_TRUE(fs::exists(root / "out" / "identify" / "basic_set.txt"));
  EXPECT_FALSE(fs::exists(root / "out" / "rank"));
  EXPECT_EQ(run_cli("run-all --stages plot --config " + cfg), 1);

  write_text(dir / "bad.yaml", "output_dir: out\nlanguages: [en]\nbogus: 1\n");
  EXPECT_EQ(run_cli("validate --config " + (dir / "bad.yaml").string()), 2);
  EXPECT_EQ(run_cli("validate --config " + (dir / "absent.yaml").string()), 2);
  EXPECT_NE(run_cli("validate"), 0);
}
