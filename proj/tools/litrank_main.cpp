#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "litrank/pipeline/pipeline.hpp"
#include "litrank/util/log.hpp"

namespace lp = litrank::pipeline;

namespace {

std::vector<std::string> split_stages(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& item : raw) {
    std::stringstream ss(item);
    std::string s;
    while (std::getline(ss, s, ',')) {
      if (!s.empty()) out.push_back(s);
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identify, rank and evaluate writers in DBpedia dumps."};
  app.require_subcommand(1);

  std::string config_path;
  unsigned threads = 1;
  bool strict = false;
  bool verbose = false;
  std::vector<std::string> stage_args;

  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Pipeline config (YAML)")->required();
    cmd->add_option("--threads", threads, "Worker threads inside a stage")
        ->check(CLI::Range(1u, 1024u));
    cmd->add_flag("--strict-parse", strict, "Abort on the first malformed N-Triples line");
    cmd->add_flag("-v,--verbose", verbose, "Debug logging");
  };

  std::vector<std::pair<CLI::App*, std::string>> commands;
  for (const auto s : lp::all_stages()) {
    const std::string name(lp::to_string(s));
    auto* cmd = app.add_subcommand(name, "Run the " + name + " stage");
    common(cmd);
    commands.emplace_back(cmd, name);
  }
  auto* all = app.add_subcommand("run-all", "Run several stages in dependency order");
  common(all);
  all->add_option("--stages", stage_args, "Comma-separated subset of stages (default: all)");
  auto* validate = app.add_subcommand("validate", "Check the config and its input paths");
  common(validate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  if (verbose) litrank::logger().set_level(spdlog::level::debug);

  try {
    const auto config = lp::load_config(config_path);
    if (validate->parsed()) {
      std::cout << "config ok: " << config.languages.size() << " languages\n";
      return 0;
    }
    lp::RunOptions options;
    options.threads = threads;
    options.strict_parse = strict;
    if (all->parsed()) {
      const auto names = split_stages(stage_args);
      if (names.empty()) {
        options.stages.assign(lp::all_stages().begin(), lp::all_stages().end());
      } else {
        for (const auto& n : names) options.stages.push_back(lp::parse_stage(n));
      }
    } else {
      for (const auto& [cmd, name] : commands) {
        if (cmd->parsed()) options.stages.push_back(lp::parse_stage(name));
      }
    }
    lp::run(config, options);
  } catch (const litrank::ConfigError& e) {
    litrank::logger().error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    litrank::logger().error("{}", e.what());
    return 1;
  }
  return 0;
}
