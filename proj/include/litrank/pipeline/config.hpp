#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "litrank/graph/writer_graph.hpp"
#include "litrank/ranking/pagerank.hpp"
#include "litrank/store/dataset_store.hpp"
#include "litrank/writers/basic_set.hpp"
#include "litrank/writers/identify.hpp"

namespace litrank::pipeline {

namespace fs = std::filesystem;

inline constexpr std::string_view kHubLanguage = "en";

struct CategoryApproach {
  std::string name;  // set tag becomes "category-<name>"
  writers::CategoryQuery query;
};

struct PipelineConfig {
  fs::path base_dir;  // relative paths in the file are resolved against this
  fs::path output_dir;
  std::vector<std::string> languages;

  // Dumps for language xx live in dumps_dir/xx unless overridden; explicit
  // files win over discovery by DBpedia file naming.
  fs::path dumps_dir;
  std::map<std::string, fs::path> language_dirs;
  std::map<std::string, std::map<store::DatasetKind, fs::path>> files;

  store::Predicates predicates;
  writers::LifePredicates life;

  std::string type_iri = "http://dbpedia.org/ontology/Writer";
  std::vector<CategoryApproach> categories;
  writers::OccupationQuery occupation{
      "http://dbpedia.org/property/occupation", {"writer", "poet", "novelist"},
      {"songwriter", "screenwriter"}};
  std::string basic_set_from = "template";
  std::uint32_t min_in_links = writers::kDefaultMinInLinks;
  std::size_t compare_top_k = 5;
  std::optional<fs::path> canon;

  ranking::PageRankParams pagerank;
  std::map<int, std::vector<fs::path>> pagecounts;  // year -> files or directories

  int cap_year = 2014;
  int plot_from = 1500;
  int plot_to = 2015;

  std::optional<fs::path> native_languages;
  std::size_t top_k = 25;

  std::vector<std::string> graph_languages{"en"};
  std::uint32_t graph_threshold = graph::kDefaultThreshold;
  std::vector<graph::GraphFormat> graph_formats{graph::GraphFormat::dot,
                                                graph::GraphFormat::graphml};
  std::uint64_t graph_seed = graph::kDefaultSeed;

  // Measure tags in report order: PL, IL, PW, PC, then V<yy> per year.
  std::vector<std::string> measures() const;
  // Identification set tags in report order.
  std::vector<std::string> approaches() const;
  fs::path language_dir(std::string_view lang) const;
};

// Parses YAML text. Schema problems (unknown keys, wrong types, bad values)
// are collected and thrown together as one ConfigError. Paths are resolved
// against base_dir but not checked.
PipelineConfig parse_config(std::string_view yaml, const fs::path& base_dir);

// Every problem with referenced paths and dataset files; empty when valid.
std::vector<std::string> check_paths(const PipelineConfig& config);

// parse_config + check_paths; throws ConfigError listing every problem.
PipelineConfig load_config(const fs::path& path);

// Dataset kinds that must exist for a language.
std::vector<store::DatasetKind> required_datasets(std::string_view lang);

// Input file per dataset kind: explicit entries, else the first existing
// <kind>_<lang>.nt{,.bz2,.gz,.xz,.zst} in the language directory.
std::map<store::DatasetKind, fs::path> resolve_datasets(const PipelineConfig& config,
                                                        std::string_view lang);

// Files of a pagecounts entry: the file itself, or the regular files of a
// directory in name order.
std::vector<fs::path> expand_inputs(const std::vector<fs::path>& entries);

}  // namespace litrank::pipeline
