#include "litrank/pipeline/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "litrank/ranking/ranking.hpp"
#include "litrank/util/error.hpp"

namespace litrank::pipeline {

namespace {

// Collects problems instead of stopping at the first one.
class Reader {
 public:
  std::vector<std::string> problems;

  void fail(const std::string& where, const std::string& what) {
    problems.push_back(where + ": " + what);
  }

  // Reports keys of `node` outside `allowed`.
  void keys(const YAML::Node& node, const std::string& where,
            std::initializer_list<std::string_view> allowed) {
    if (!node) return;
    if (!node.IsMap()) {
      fail(where, "expected a mapping");
      return;
    }
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail(where, "unknown key '" + key + "'");
      }
    }
  }

  template <typename T>
  void get(const YAML::Node& node, const std::string& where, T& out) {
    if (!node) return;
    try {
      out = node.as<T>();
    } catch (const YAML::Exception&) {
      fail(where, "invalid value");
    }
  }

  void path(const YAML::Node& node, const std::string& where, const fs::path& base, fs::path& out) {
    std::string s;
    get(node, where, s);
    if (!node || s.empty()) return;
    out = resolve(base, s);
  }

  void list(const YAML::Node& node, const std::string& where, std::vector<std::string>& out) {
    if (!node) return;
    if (!node.IsSequence()) {
      fail(where, "expected a list");
      return;
    }
    out.clear();
    for (std::size_t i = 0; i < node.size(); ++i) {
      std::string s;
      get(node[i], where + "[" + std::to_string(i) + "]", s);
      out.push_back(std::move(s));
    }
  }

  static fs::path resolve(const fs::path& base, const std::string& s) {
    fs::path p(s);
    return (p.is_absolute() ? p : base / p).lexically_normal();
  }
};

bool valid_language(std::string_view code) {
  if (code.empty() || code.size() > 12) return false;
  return std::all_of(code.begin(), code.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || c == '-';
  });
}

void read_predicates(Reader& r, const YAML::Node& n, store::Predicates& p) {
  r.keys(n, "predicates",
         {"type", "subject", "broader", "pref_label", "page_length", "page_link", "same_as",
          "redirect"});
  if (!n) return;
  r.get(n["type"], "predicates.type", p.type);
  r.get(n["subject"], "predicates.subject", p.subject);
  r.get(n["broader"], "predicates.broader", p.broader);
  r.get(n["pref_label"], "predicates.pref_label", p.pref_label);
  r.get(n["page_length"], "predicates.page_length", p.page_length);
  r.get(n["page_link"], "predicates.page_link", p.page_link);
  r.get(n["same_as"], "predicates.same_as", p.same_as);
  r.get(n["redirect"], "predicates.redirect", p.redirect);
}

void read_life(Reader& r, const YAML::Node& n, writers::LifePredicates& p) {
  r.keys(n, "life_predicates", {"birth_date", "birth_year", "death_date", "death_year"});
  if (!n) return;
  r.get(n["birth_date"], "life_predicates.birth_date", p.birth_date);
  r.get(n["birth_year"], "life_predicates.birth_year", p.birth_year);
  r.get(n["death_date"], "life_predicates.death_date", p.death_date);
  r.get(n["death_year"], "life_predicates.death_year", p.death_year);
}

void read_inputs(Reader& r, const YAML::Node& n, PipelineConfig& c) {
  if (!n) return;
  if (!n.IsMap()) {
    r.fail("inputs", "expected a mapping");
    return;
  }
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (key == "dumps_dir") {
      r.path(kv.second, "inputs.dumps_dir", c.base_dir, c.dumps_dir);
      continue;
    }
    const auto where = "inputs." + key;
    if (!valid_language(key)) {
      r.fail(where, "not a language code");
      continue;
    }
    r.keys(kv.second, where, {"dir", "files"});
    if (!kv.second.IsMap()) continue;
    if (kv.second["dir"]) r.path(kv.second["dir"], where + ".dir", c.base_dir, c.language_dirs[key]);
    const auto files = kv.second["files"];
    if (!files) continue;
    if (!files.IsMap()) {
      r.fail(where + ".files", "expected a mapping");
      continue;
    }
    for (const auto& f : files) {
      const auto kind_name = f.first.as<std::string>();
      try {
        const auto kind = store::parse_dataset_kind(kind_name);
        r.path(f.second, where + ".files." + kind_name, c.base_dir, c.files[key][kind]);
      } catch (const Error&) {
        r.fail(where + ".files", "unknown dataset kind '" + kind_name + "'");
      }
    }
  }
}

void read_identify(Reader& r, const YAML::Node& n, PipelineConfig& c) {
  r.keys(n, "identify",
         {"type_iri", "categories", "occupation", "basic_set_from", "min_in_links",
          "compare_top_k", "canon"});
  if (!n) return;
  r.get(n["type_iri"], "identify.type_iri", c.type_iri);
  if (const auto cats = n["categories"]) {
    if (!cats.IsSequence()) {
      r.fail("identify.categories", "expected a list");
    } else {
      c.categories.clear();
      for (std::size_t i = 0; i < cats.size(); ++i) {
        const auto where = "identify.categories[" + std::to_string(i) + "]";
        r.keys(cats[i], where, {"name", "root", "filter_word", "max_depth"});
        if (!cats[i].IsMap()) continue;
        CategoryApproach a;
        r.get(cats[i]["name"], where + ".name", a.name);
        r.get(cats[i]["root"], where + ".root", a.query.root);
        if (cats[i]["filter_word"]) {
          std::string w;
          r.get(cats[i]["filter_word"], where + ".filter_word", w);
          if (!w.empty()) a.query.filter_word = w;
        }
        if (cats[i]["max_depth"]) {
          int d = 0;
          r.get(cats[i]["max_depth"], where + ".max_depth", d);
          if (d < 0) r.fail(where + ".max_depth", "must be >= 0");
          a.query.max_depth = d;
        }
        if (a.name.empty()) r.fail(where + ".name", "missing");
        if (a.query.root.empty()) r.fail(where + ".root", "missing");
        c.categories.push_back(std::move(a));
      }
    }
  }
  if (const auto occ = n["occupation"]) {
    r.keys(occ, "identify.occupation", {"predicate", "include", "exclude"});
    if (occ.IsMap()) {
      r.get(occ["predicate"], "identify.occupation.predicate", c.occupation.predicate);
      r.list(occ["include"], "identify.occupation.include", c.occupation.include);
      r.list(occ["exclude"], "identify.occupation.exclude", c.occupation.exclude);
    }
  }
  r.get(n["basic_set_from"], "identify.basic_set_from", c.basic_set_from);
  r.get(n["min_in_links"], "identify.min_in_links", c.min_in_links);
  r.get(n["compare_top_k"], "identify.compare_top_k", c.compare_top_k);
  if (n["canon"]) {
    fs::path p;
    r.path(n["canon"], "identify.canon", c.base_dir, p);
    if (!p.empty()) c.canon = p;
  }
}

void read_rank(Reader& r, const YAML::Node& n, PipelineConfig& c) {
  r.keys(n, "rank", {"damping", "tolerance", "max_iterations", "pagecounts"});
  if (!n) return;
  r.get(n["damping"], "rank.damping", c.pagerank.damping);
  r.get(n["tolerance"], "rank.tolerance", c.pagerank.tolerance);
  r.get(n["max_iterations"], "rank.max_iterations", c.pagerank.max_iterations);
  if (const auto pc = n["pagecounts"]) {
    if (!pc.IsMap()) {
      r.fail("rank.pagecounts", "expected a mapping of year to paths");
    } else {
      for (const auto& kv : pc) {
        int year = 0;
        const auto where = "rank.pagecounts." + kv.first.as<std::string>();
        r.get(kv.first, where, year);
        if (year < 2000 || year > 2099) {
          r.fail(where, "year must be between 2000 and 2099");
          continue;
        }
        std::vector<std::string> raw;
        if (kv.second.IsScalar()) raw.push_back(kv.second.as<std::string>());
        else r.list(kv.second, where, raw);
        auto& out = c.pagecounts[year];
        for (const auto& s : raw) out.push_back(Reader::resolve(c.base_dir, s));
      }
    }
  }
}

void read_rest(Reader& r, const YAML::Node& root, PipelineConfig& c) {
  if (const auto t = root["temporal"]) {
    r.keys(t, "temporal", {"cap_year", "plot_from", "plot_to"});
    if (t.IsMap()) {
      r.get(t["cap_year"], "temporal.cap_year", c.cap_year);
      r.get(t["plot_from"], "temporal.plot_from", c.plot_from);
      r.get(t["plot_to"], "temporal.plot_to", c.plot_to);
    }
  }
  if (const auto x = root["crosslang"]) {
    r.keys(x, "crosslang", {"native_languages", "top_k"});
    if (x.IsMap()) {
      if (x["native_languages"]) {
        fs::path p;
        r.path(x["native_languages"], "crosslang.native_languages", c.base_dir, p);
        if (!p.empty()) c.native_languages = p;
      }
      r.get(x["top_k"], "crosslang.top_k", c.top_k);
    }
  }
  if (const auto g = root["graph"]) {
    r.keys(g, "graph", {"languages", "threshold", "formats", "seed"});
    if (g.IsMap()) {
      r.list(g["languages"], "graph.languages", c.graph_languages);
      r.get(g["threshold"], "graph.threshold", c.graph_threshold);
      r.get(g["seed"], "graph.seed", c.graph_seed);
      if (g["formats"]) {
        std::vector<std::string> names;
        r.list(g["formats"], "graph.formats", names);
        c.graph_formats.clear();
        for (const auto& f : names) {
          try {
            c.graph_formats.push_back(graph::parse_graph_format(f));
          } catch (const Error& e) {
            r.fail("graph.formats", e.what());
          }
        }
      }
    }
  }
}

void check_values(Reader& r, const PipelineConfig& c) {
  if (c.output_dir.empty()) r.fail("output_dir", "missing");
  if (c.languages.empty()) r.fail("languages", "must list at least one language");
  std::set<std::string> seen;
  for (const auto& l : c.languages) {
    if (!valid_language(l)) r.fail("languages", "'" + l + "' is not a language code");
    if (!seen.insert(l).second) r.fail("languages", "'" + l + "' listed twice");
  }
  if (!c.languages.empty() && !seen.contains(std::string(kHubLanguage))) {
    r.fail("languages", "must include the hub language 'en'");
  }
  for (const auto& [lang, dir] : c.language_dirs) {
    if (!seen.contains(lang)) r.fail("inputs." + lang, "language not in 'languages'");
  }
  for (const auto& [lang, f] : c.files) {
    if (!seen.contains(lang)) r.fail("inputs." + lang, "language not in 'languages'");
  }
  for (const auto& l : c.graph_languages) {
    if (!seen.contains(l)) r.fail("graph.languages", "'" + l + "' not in 'languages'");
  }
  if (c.type_iri.empty()) r.fail("identify.type_iri", "missing");
  std::set<std::string> names;
  for (const auto& a : c.categories) {
    if (!a.name.empty() && !names.insert(a.name).second) {
      r.fail("identify.categories", "duplicate name '" + a.name + "'");
    }
  }
  if (c.occupation.predicate.empty()) r.fail("identify.occupation.predicate", "missing");
  if (c.occupation.include.empty()) r.fail("identify.occupation.include", "must not be empty");
  const auto approaches = c.approaches();
  if (std::find(approaches.begin(), approaches.end(), c.basic_set_from) == approaches.end()) {
    r.fail("identify.basic_set_from", "'" + c.basic_set_from + "' is not a configured approach");
  }
  if (!(c.pagerank.damping > 0.0 && c.pagerank.damping < 1.0)) {
    r.fail("rank.damping", "must be in (0, 1)");
  }
  if (!(c.pagerank.tolerance > 0.0)) r.fail("rank.tolerance", "must be positive");
  if (c.pagerank.max_iterations < 1) r.fail("rank.max_iterations", "must be at least 1");
  if (c.top_k == 0) r.fail("crosslang.top_k", "must be at least 1");
  if (c.plot_from > c.plot_to) r.fail("temporal", "plot_from must not exceed plot_to");
}

}  // namespace

std::vector<std::string> PipelineConfig::measures() const {
  std::vector<std::string> out{std::string(ranking::measure::kPageLength),
                               std::string(ranking::measure::kInLinks),
                               std::string(ranking::measure::kPageRankWriters),
                               std::string(ranking::measure::kPageRankComplete)};
  for (const auto& [year, paths] : pagecounts) out.push_back(ranking::measure::views(year));
  return out;
}

std::vector<std::string> PipelineConfig::approaches() const {
  std::vector<std::string> out{"template"};
  for (const auto& c : categories) out.push_back("category-" + c.name);
  out.push_back("occupation");
  return out;
}

fs::path PipelineConfig::language_dir(std::string_view lang) const {
  const auto it = language_dirs.find(std::string(lang));
  if (it != language_dirs.end()) return it->second;
  return dumps_dir / std::string(lang);
}

namespace {

[[noreturn]] void throw_problems(const std::vector<std::string>& problems) {
  std::string msg = "invalid config (" + std::to_string(problems.size()) + " problems):";
  for (const auto& p : problems) msg += "\n  " + p;
  throw ConfigError(msg);
}

PipelineConfig parse_collect(std::string_view yaml, const fs::path& base_dir,
                             std::vector<std::string>& problems) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw ConfigError("config is not valid YAML: " + std::string(e.what()));
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  PipelineConfig c;
  c.base_dir = base_dir;
  c.dumps_dir = base_dir;
  Reader r;
  r.keys(root, "config",
         {"output_dir", "languages", "inputs", "predicates", "life_predicates", "identify", "rank",
          "temporal", "crosslang", "graph"});
  r.path(root["output_dir"], "output_dir", base_dir, c.output_dir);
  r.list(root["languages"], "languages", c.languages);
  read_inputs(r, root["inputs"], c);
  read_predicates(r, root["predicates"], c.predicates);
  read_life(r, root["life_predicates"], c.life);
  read_identify(r, root["identify"], c);
  read_rank(r, root["rank"], c);
  read_rest(r, root, c);
  check_values(r, c);
  problems = std::move(r.problems);
  return c;
}

}  // namespace

PipelineConfig parse_config(std::string_view yaml, const fs::path& base_dir) {
  std::vector<std::string> problems;
  auto c = parse_collect(yaml, base_dir, problems);
  if (!problems.empty()) throw_problems(problems);
  return c;
}

std::vector<store::DatasetKind> required_datasets(std::string_view lang) {
  using K = store::DatasetKind;
  if (lang == kHubLanguage) {
    return {K::instance_types,     K::article_categories,      K::skos_categories,
            K::infobox_properties, K::mappingbased_properties, K::page_length,
            K::page_links,         K::interlanguage_links};
  }
  return {K::page_length, K::page_links};
}

std::map<store::DatasetKind, fs::path> resolve_datasets(const PipelineConfig& config,
                                                        std::string_view lang) {
  std::map<store::DatasetKind, fs::path> out;
  const auto explicit_files = config.files.find(std::string(lang));
  const auto dir = config.language_dir(lang);
  for (const auto kind : store::all_dataset_kinds()) {
    if (explicit_files != config.files.end()) {
      const auto it = explicit_files->second.find(kind);
      if (it != explicit_files->second.end()) {
        out[kind] = it->second;
        continue;
      }
    }
    const auto stem = store::dataset_file_stem(kind, lang) + ".nt";
    for (const char* ext : {"", ".bz2", ".gz", ".xz", ".zst"}) {
      const auto candidate = dir / (stem + ext);
      std::error_code ec;
      if (fs::is_regular_file(candidate, ec)) {
        out[kind] = candidate;
        break;
      }
    }
  }
  return out;
}

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& entries) {
  std::vector<fs::path> out;
  for (const auto& e : entries) {
    std::error_code ec;
    if (fs::is_directory(e, ec)) {
      std::vector<fs::path> files;
      for (const auto& d : fs::directory_iterator(e)) {
        if (d.is_regular_file()) files.push_back(d.path());
      }
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else {
      out.push_back(e);
    }
  }
  return out;
}

std::vector<std::string> check_paths(const PipelineConfig& config) {
  std::vector<std::string> problems;
  auto exists = [](const fs::path& p) {
    std::error_code ec;
    return fs::exists(p, ec);
  };
  for (const auto& lang : config.languages) {
    if (const auto it = config.files.find(lang); it != config.files.end()) {
      for (const auto& [kind, path] : it->second) {
        if (!exists(path)) {
          problems.push_back("inputs." + lang + ".files." + store::to_string(kind) + ": " +
                             path.string() + " does not exist");
        }
      }
    }
    const auto resolved = resolve_datasets(config, lang);
    for (const auto kind : required_datasets(lang)) {
      if (!resolved.contains(kind)) {
        problems.push_back("inputs." + lang + ": no " + store::to_string(kind) + " file (" +
                           store::dataset_file_stem(kind, lang) + ".nt[.bz2|.gz|.xz|.zst] in " +
                           config.language_dir(lang).string() + ")");
      }
    }
  }
  for (const auto& [year, entries] : config.pagecounts) {
    for (const auto& e : entries) {
      if (!exists(e)) {
        problems.push_back("rank.pagecounts." + std::to_string(year) + ": " + e.string() +
                           " does not exist");
      }
    }
  }
  if (config.canon && !exists(*config.canon)) {
    problems.push_back("identify.canon: " + config.canon->string() + " does not exist");
  }
  if (config.native_languages && !exists(*config.native_languages)) {
    problems.push_back("crosslang.native_languages: " + config.native_languages->string() +
                       " does not exist");
  }
  return problems;
}

PipelineConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream text;
  text << in.rdbuf();
  const auto base = fs::absolute(path).parent_path();
  std::vector<std::string> problems;
  auto config = parse_collect(text.str(), base, problems);
  const auto missing = check_paths(config);
  problems.insert(problems.end(), missing.begin(), missing.end());
  if (!problems.empty()) throw_problems(problems);
  return config;
}

}  // namespace litrank::pipeline
