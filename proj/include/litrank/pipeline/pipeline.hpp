#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "litrank/pipeline/config.hpp"
#include "litrank/util/error.hpp"

namespace litrank::pipeline {

enum class Stage { ingest, identify, rank, evaluate, temporal, crosslang, graph };

std::span<const Stage> all_stages();  // dependency order
std::string_view to_string(Stage stage);
Stage parse_stage(std::string_view name);  // throws Error
// Stages whose outputs `stage` reads.
std::span<const Stage> dependencies(Stage stage);

// A requested stage needs outputs that neither exist nor are produced earlier
// in the same run.
class DependencyError : public Error {
 public:
  DependencyError(Stage stage, Stage missing);
  Stage stage() const { return stage_; }
  Stage missing() const { return missing_; }

 private:
  Stage stage_;
  Stage missing_;
};

struct RunOptions {
  std::vector<Stage> stages;  // any order; run in dependency order
  unsigned threads = 1;
  bool strict_parse = false;
};

struct StageReport {
  Stage stage{};
  double seconds = 0.0;
  nlohmann::json counts;
};

struct RunReport {
  std::vector<StageReport> stages;
  std::vector<std::string> reused_snapshots;  // languages whose snapshot was reused
};

// Runs the requested stages. Each stage writes its files plus
// <stage>/stage.json; afterwards manifest.json (inputs, parameters, counts)
// is rewritten and run_log.json records timings and snapshot reuse.
// Throws DependencyError before doing any work when a prerequisite is missing.
RunReport run(const PipelineConfig& config, const RunOptions& options);

// Deterministic description of the configuration, as stored in the manifest.
nlohmann::json parameters_json(const PipelineConfig& config);

}  // namespace litrank::pipeline
