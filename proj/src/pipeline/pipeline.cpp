#include "litrank/pipeline/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "litrank/crosslang/crosslang.hpp"
#include "litrank/evaluation/correlation.hpp"
#include "litrank/evaluation/roc.hpp"
#include "litrank/graph/writer_graph.hpp"
#include "litrank/ranking/measures.hpp"
#include "litrank/store/snapshot.hpp"
#include "litrank/temporal/activity.hpp"
#include "litrank/util/log.hpp"
#include "litrank/writers/compare.hpp"

namespace litrank::pipeline {

using nlohmann::json;
using store::DatasetStore;
using writers::WriterSet;

namespace {

constexpr Stage kStages[] = {Stage::ingest,   Stage::identify,  Stage::rank, Stage::evaluate,
                             Stage::temporal, Stage::crosslang, Stage::graph};

constexpr Stage kIdentifyDeps[] = {Stage::ingest};
constexpr Stage kRankDeps[] = {Stage::ingest, Stage::identify};
constexpr Stage kEvaluateDeps[] = {Stage::ingest, Stage::rank};
constexpr Stage kTemporalDeps[] = {Stage::ingest, Stage::identify};
constexpr Stage kCrosslangDeps[] = {Stage::ingest, Stage::identify, Stage::rank};
constexpr Stage kGraphDeps[] = {Stage::ingest, Stage::identify};

// ---------------------------------------------------------------------------
// files

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    body(out);
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_json(const fs::path& path, const json& j) {
  write_file(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return in;
}

json read_json(const fs::path& path) {
  auto in = open_input(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

// One IRI per line, sorted by IRI text.
void write_set(const fs::path& path, const WriterSet& set, const rdf::InternTable& terms) {
  std::vector<std::string_view> iris;
  iris.reserve(set.size());
  for (const auto id : set.ids) iris.push_back(terms.text(id));
  std::sort(iris.begin(), iris.end());
  write_file(path, [&](std::ostream& out) {
    for (const auto iri : iris) out << iri << '\n';
  });
}

WriterSet read_set(const fs::path& path, std::string approach, const DatasetStore& english) {
  auto in = open_input(path);
  std::vector<rdf::TermId> ids;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto id = english.id(line);
    if (!id) {
      throw Error(path.string() + ": " + line +
                  " is unknown to the English snapshot; rerun the identify stage");
    }
    ids.push_back(*id);
  }
  return WriterSet::from(std::move(approach), std::move(ids));
}

std::string title_label(std::string_view iri) {
  const auto cut = iri.rfind('/');
  std::string s(cut == std::string_view::npos ? iri : iri.substr(cut + 1));
  std::replace(s.begin(), s.end(), '_', ' ');
  return s;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

struct Layout {
  fs::path root;

  fs::path stage_dir(Stage s) const { return root / std::string(to_string(s)); }
  fs::path stage_json(Stage s) const { return stage_dir(s) / "stage.json"; }
  fs::path snapshot(std::string_view lang) const {
    return stage_dir(Stage::ingest) / (std::string(lang) + ".snapshot");
  }
  fs::path fingerprint(std::string_view lang) const {
    return stage_dir(Stage::ingest) / (std::string(lang) + ".fingerprint.json");
  }
  fs::path ingest_stats(std::string_view lang) const {
    return stage_dir(Stage::ingest) / (std::string(lang) + ".stats.json");
  }
  fs::path basic_set() const { return stage_dir(Stage::identify) / "basic_set.txt"; }
  fs::path projected(std::string_view lang) const {
    return stage_dir(Stage::identify) / ("basic_" + std::string(lang) + ".txt");
  }
  fs::path ranking(std::string_view lang, std::string_view measure) const {
    return stage_dir(Stage::rank) / std::string(lang) / (std::string(measure) + ".tsv");
  }
};

// ---------------------------------------------------------------------------
// shared state of one run

struct Context {
  const PipelineConfig& config;
  const RunOptions& options;
  Layout layout;
  RunReport& report;
  std::unique_ptr<DatasetStore> english;

  const DatasetStore& hub() {
    if (!english) english = std::make_unique<DatasetStore>(store::snapshot_load(layout.snapshot(kHubLanguage)));
    return *english;
  }

  // The hub itself or a freshly loaded snapshot.
  std::shared_ptr<const DatasetStore> edition_store(const std::string& lang) {
    if (lang == kHubLanguage) return {std::shared_ptr<void>{}, &hub()};
    return std::make_shared<DatasetStore>(store::snapshot_load(layout.snapshot(lang)));
  }

  WriterSet basic() { return read_set(layout.basic_set(), "basic", hub()); }
  WriterSet projected(const std::string& lang) {
    return read_set(layout.projected(lang), "basic@" + lang, hub());
  }
};

// ---------------------------------------------------------------------------
// ingest

json fingerprint(const PipelineConfig& config, const std::string& lang, bool strict,
                 const std::map<store::DatasetKind, fs::path>& files) {
  json j;
  j["snapshot_version"] = store::kSnapshotVersion;
  j["language"] = lang;
  j["strict_parse"] = strict;
  j["predicates"] = parameters_json(config)["predicates"];
  for (const auto& [kind, path] : files) {
    const auto size = fs::file_size(path);
    const auto mtime = fs::last_write_time(path).time_since_epoch().count();
    j["files"][store::to_string(kind)] = {
        {"path", path.lexically_relative(config.base_dir).generic_string()}, {"bytes", size}, {"mtime", static_cast<std::int64_t>(mtime)}};
  }
  return j;
}

json ingest_language(Context& ctx, const std::string& lang, bool& reused) {
  const auto files = resolve_datasets(ctx.config, lang);
  const auto fp = fingerprint(ctx.config, lang, ctx.options.strict_parse, files);
  const auto snap = ctx.layout.snapshot(lang);
  const auto fp_path = ctx.layout.fingerprint(lang);
  const auto stats_path = ctx.layout.ingest_stats(lang);
  if (fs::exists(snap) && fs::exists(fp_path) && fs::exists(stats_path)) {
    try {
      if (read_json(fp_path) == fp) {
        logger().info("ingest {}: inputs unchanged, reusing {}", lang, snap.string());
        reused = true;
        return read_json(stats_path);
      }
    } catch (const Error& e) {
      logger().warn("ingest {}: ignoring unreadable fingerprint ({})", lang, e.what());
    }
  }
  reused = false;
  // Drop the fingerprint first so an interrupted rebuild is never mistaken for a valid one.
  fs::remove(fp_path);

  DatasetStore st(lang);
  rdf::ParseOptions opts;
  opts.strict = ctx.options.strict_parse;
  json stats;
  std::vector<std::pair<std::string, rdf::LineError>> errors;
  for (const auto& [kind, path] : files) {
    logger().info("ingest {}: loading {} from {}", lang, store::to_string(kind), path.string());
    const auto ls = store::load_dataset(kind, path, st, ctx.config.predicates, opts);
    stats["datasets"][store::to_string(kind)] = {{"read", ls.read},
                                                 {"indexed", ls.indexed},
                                                 {"skipped", ls.skipped},
                                                 {"malformed_lines", ls.parse.malformed},
                                                 {"lenient_iris", ls.parse.lenient_iris}};
    for (const auto& e : ls.parse.errors) errors.emplace_back(store::to_string(kind), e);
    if (ls.parse.malformed > 0) {
      logger().warn("ingest {}: {} malformed lines in {}", lang, ls.parse.malformed,
                    path.string());
    }
  }
  st.freeze();
  stats["terms"] = st.terms.size();
  stats["link_nodes"] = st.links.node_count();
  stats["link_edges"] = st.links.edge_count();
  stats["persons"] = st.persons.size();

  fs::create_directories(snap.parent_path());
  store::snapshot_save(st, snap);
  write_file(ctx.layout.stage_dir(Stage::ingest) / (lang + ".errors.tsv"), [&](std::ostream& out) {
    for (const auto& [kind, e] : errors) out << kind << '\t' << e.line << '\t' << e.message << '\n';
  });
  write_json(stats_path, stats);
  write_json(fp_path, fp);
  if (lang == kHubLanguage) ctx.english = std::make_unique<DatasetStore>(std::move(st));
  return stats;
}

json stage_ingest(Context& ctx) {
  json counts;
  for (const auto& lang : ctx.config.languages) {
    bool reused = false;
    counts[lang] = ingest_language(ctx, lang, reused);
    if (reused) ctx.report.reused_snapshots.push_back(lang);
  }
  return counts;
}

// ---------------------------------------------------------------------------
// identify

writers::CanonList load_canon(Context& ctx) {
  auto in = open_input(*ctx.config.canon);
  auto canon = writers::load_canon(ctx.config.canon->stem().string(), in, ctx.hub());
  for (const auto& u : canon.unresolved) {
    logger().warn("canon entry {} has no English article", u);
  }
  return canon;
}

std::optional<writers::NativeMap> load_natives(Context& ctx) {
  if (!ctx.config.native_languages) return std::nullopt;
  auto in = open_input(*ctx.config.native_languages);
  std::vector<std::string> unresolved;
  auto map = writers::load_native_languages(in, ctx.hub(), writers::kDefaultResourcePrefix,
                                            &unresolved);
  for (const auto& u : unresolved) logger().warn("native-language entry {} has no English article", u);
  return map;
}

std::string join_entities(const std::vector<writers::LinkedEntity>& list,
                          const rdf::InternTable& terms) {
  std::string s;
  for (const auto& e : list) {
    if (!s.empty()) s += ", ";
    s += title_label(terms.text(e.entity)) + " (" + std::to_string(e.in_links) + ")";
  }
  return s;
}

json stage_identify(Context& ctx) {
  const auto& en = ctx.hub();
  const auto& cfg = ctx.config;
  const auto dir = ctx.layout.stage_dir(Stage::identify);
  json counts;

  std::vector<WriterSet> sets;
  sets.push_back(writers::identify_by_template(en, cfg.type_iri));
  sets.back().approach = "template";
  for (const auto& c : cfg.categories) {
    sets.push_back(writers::identify_by_category(en, c.query));
    sets.back().approach = "category-" + c.name;
  }
  sets.push_back(writers::identify_by_occupation(en, cfg.occupation));
  sets.back().approach = "occupation";
  for (const auto& s : sets) {
    write_set(dir / ("set_" + s.approach + ".txt"), s, en.terms);
    counts["sets"][s.approach] = s.size();
  }

  writers::CanonList canon;
  if (cfg.canon) {
    canon = load_canon(ctx);
    counts["canon"] = {{"size", canon.size()}, {"resolved", canon.ids.size()}};
  }
  if (sets.size() >= 2) {
    const auto table = writers::compare_approaches(sets, canon, en, cfg.compare_top_k);
    write_file(dir / "comparison.tsv", [&](std::ostream& out) {
      out << "approach\tsize\tcanon_hits\tonly_count\tmissing_count\ttop_only\ttop_missing\n";
      for (const auto& row : table) {
        out << row.approach << '\t' << row.size << '\t' << row.canon_hits << '\t'
            << row.only_count << '\t' << row.missing_count << '\t'
            << join_entities(row.top_only, en.terms) << '\t'
            << join_entities(row.top_missing, en.terms) << '\n';
        counts["comparison"][row.approach] = {{"size", row.size},
                                              {"canon_hits", row.canon_hits},
                                              {"only", row.only_count},
                                              {"missing", row.missing_count}};
      }
    });
  }

  const auto source = std::find_if(sets.begin(), sets.end(),
                                   [&](const auto& s) { return s.approach == cfg.basic_set_from; });
  auto basic = writers::filter_basic_set(*source, en, cfg.life, cfg.min_in_links);
  basic.approach = "basic";
  write_set(ctx.layout.basic_set(), basic, en.terms);
  counts["basic_set"] = basic.size();
  for (const auto& [k, v] : basic.stats) counts["basic_set_filter"][k] = v;
  if (cfg.canon) {
    std::size_t hits = 0;
    for (const auto id : canon.ids) hits += basic.contains(id) ? 1 : 0;
    counts["basic_set_canon_hits"] = hits;
  }

  for (const auto& lang : cfg.languages) {
    const auto p = writers::project_to_language(basic, en, lang, cfg.languages);
    write_set(ctx.layout.projected(lang), p, en.terms);
    counts["projected"][lang] = p.size();
  }

  const auto natives = load_natives(ctx);
  const auto records = writers::build_records(basic, en, cfg.life, cfg.languages,
                                              natives ? &*natives : nullptr);
  std::vector<const writers::WriterRecord*> order;
  for (const auto& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(),
            [&](auto a, auto b) { return en.iri(a->entity) < en.iri(b->entity); });
  write_file(dir / "writers.tsv", [&](std::ostream& out) {
    out << "iri\tbirth_year\tdeath_year\tin_links_en\tlanguages\tnative_languages\n";
    for (const auto* r : order) {
      out << en.iri(r->entity) << '\t';
      if (r->birth_year) out << *r->birth_year;
      out << '\t';
      if (r->death_year) out << *r->death_year;
      out << '\t' << r->in_links_en << '\t';
      bool first = true;
      for (const auto& [lang, id] : r->per_language) {
        out << (first ? "" : ",") << lang;
        first = false;
      }
      out << '\t';
      first = true;
      for (const auto& lang : r->native_languages) {
        out << (first ? "" : ",") << lang;
        first = false;
      }
      out << '\n';
    }
  });
  return counts;
}

// ---------------------------------------------------------------------------
// rank

struct ViewPlan {
  std::unordered_map<std::string, rdf::TermId> titles;
  std::unordered_map<std::string, std::string> redirects;
};

json stage_rank(Context& ctx) {
  const auto& en = ctx.hub();
  const auto& cfg = ctx.config;
  json counts;
  auto params = cfg.pagerank;
  params.threads = ctx.options.threads;

  std::map<std::string, ViewPlan> plans;
  std::map<std::string, WriterSet> projected;
  for (const auto& lang : cfg.languages) {
    const auto local = ctx.edition_store(lang);
    const ranking::Edition edition{en, *local};
    const auto set = ctx.projected(lang);
    json& c = counts[lang];
    c["writers"] = set.size();

    auto save = [&](const ranking::Ranking& r) {
      write_file(ctx.layout.ranking(lang, r.measure),
                 [&](std::ostream& out) { ranking::write_ranking_tsv(out, r, en.terms); });
    };
    save(ranking::rank_page_length(set, edition));
    save(ranking::rank_in_links(set, edition));
    save(ranking::rank_pagerank_writers(set, edition, params));
    if (local->links.node_count() > 0) {
      const auto complete = ranking::pagerank(local->links.graph(), params);
      c["pagerank_complete"] = {{"iterations", complete.iterations},
                                {"converged", complete.converged}};
      if (!complete.converged) {
        logger().warn("rank {}: PageRank stopped after {} iterations (delta {})", lang,
                      complete.iterations, complete.last_delta);
      }
      save(ranking::rank_pagerank_complete(set, edition, complete));
    } else {
      save(ranking::rank_pagerank_complete(set, edition, ranking::PageRankResult{}));
    }
    if (!cfg.pagecounts.empty()) {
      plans[lang] = {ranking::writer_titles(set, edition), ranking::redirect_titles(*local)};
    }
    projected.emplace(lang, set);
  }

  for (const auto& [year, entries] : cfg.pagecounts) {
    std::map<std::string, ranking::TitleCounts> totals;
    std::size_t malformed = 0;
    for (const auto& file : expand_inputs(entries)) {
      ranking::PagecountStats ps;
      auto per = ranking::count_titles_by_project(file, cfg.languages, &ps);
      malformed += ps.malformed;
      for (auto& [lang, tc] : per) {
        // Keep only titles that can reach a writer, so yearly totals stay small.
        const auto& plan = plans[lang];
        auto& into = totals[lang];
        for (const auto& [title, n] : tc) {
          if (plan.titles.contains(title) || plan.redirects.contains(title)) into[title] += n;
        }
      }
    }
    if (malformed > 0) logger().warn("rank: {} malformed pagecount lines for {}", malformed, year);
    counts["pagecounts"][std::to_string(year)]["malformed_lines"] = malformed;
    for (const auto& lang : cfg.languages) {
      ranking::AggregateStats as;
      const auto views = ranking::aggregate_views(totals[lang], plans[lang].redirects,
                                                  plans[lang].titles, year, &as);
      const DatasetStore stub(lang);
      const ranking::Edition edition{en, lang == kHubLanguage ? en : stub};
      const auto r = ranking::rank_page_views(projected.at(lang), views, year, edition);
      write_file(ctx.layout.ranking(lang, r.measure),
                 [&](std::ostream& out) { ranking::write_ranking_tsv(out, r, en.terms); });
      counts[lang]["views_" + std::to_string(year)] = {
          {"redirected_titles", as.redirected_titles},
          {"redirect_cycles_broken", as.redirect_cycles_broken}};
    }
  }
  return counts;
}

ranking::Ranking load_ranking(Context& ctx, const std::string& lang, const std::string& measure) {
  const auto path = ctx.layout.ranking(lang, measure);
  if (!fs::exists(path)) {
    throw Error("missing ranking " + path.string() + "; rerun the rank stage");
  }
  auto in = open_input(path);
  std::vector<std::string> unknown;
  auto r = ranking::read_ranking_tsv(in, measure, lang, ctx.hub().terms, &unknown);
  if (!unknown.empty()) {
    throw Error(path.string() + " names entities unknown to the English snapshot; rerun rank");
  }
  return r;
}

// ---------------------------------------------------------------------------
// evaluate

json stage_evaluate(Context& ctx) {
  const auto& cfg = ctx.config;
  const auto dir = ctx.layout.stage_dir(Stage::evaluate);
  const auto measures = cfg.measures();
  json counts;

  evaluation::RankingTable table;
  for (const auto& lang : cfg.languages) {
    std::map<std::string, ranking::Ranking> by_measure;
    for (const auto& m : measures) by_measure.emplace(m, load_ranking(ctx, lang, m));
    if (by_measure.begin()->second.size() < 2) {
      logger().warn("evaluate: {} has fewer than two writers; left out of correlations", lang);
      counts["correlation_skipped"].push_back(lang);
      continue;
    }
    table.emplace(lang, std::move(by_measure));
  }
  if (!table.empty()) {
    const auto matrix = evaluation::correlation_matrix(table, measures, ctx.options.threads);
    write_file(dir / "correlation.tsv", [&](std::ostream& out) {
      evaluation::write_correlation_tsv(out, matrix, measures);
    });
    write_file(dir / "correlation_by_language.tsv", [&](std::ostream& out) {
      out << "measure_a\tmeasure_b\tlanguage\trho\ttau\n";
      for (const auto& r : matrix) {
        for (const auto& [lang, c] : r.per_language) {
          out << r.measure_a << '\t' << r.measure_b << '\t' << lang << '\t'
              << (c.rho ? fixed3(*c.rho) : "NA") << '\t' << (c.tau ? fixed3(*c.tau) : "NA")
              << '\n';
        }
      }
    });
    counts["correlation_languages"] = table.size();
    counts["correlation_pairs"] = matrix.size();
  }

  if (!cfg.canon) {
    logger().warn("evaluate: no canon configured, skipping ROC");
    return counts;
  }
  const auto canon = load_canon(ctx);
  write_file(dir / "auc.tsv", [&](std::ostream& out) {
    out << "measure\tauc\tmatched\tcanon_size\n";
    for (const auto& m : measures) {
      const auto r = load_ranking(ctx, std::string(kHubLanguage), m);
      if (r.empty() || canon.size() == 0) continue;
      const auto curve = evaluation::roc(r, canon);
      write_file(dir / ("roc_" + m + ".tsv"),
                 [&](std::ostream& o) { evaluation::write_roc_tsv(o, curve); });
      out << m << '\t' << ranking::format_score(curve.auc) << '\t' << curve.matched << '\t'
          << curve.canon_size << '\n';
      counts["auc"][m] = curve.auc;
    }
  });
  return counts;
}

// ---------------------------------------------------------------------------
// temporal

json stage_temporal(Context& ctx) {
  const auto& en = ctx.hub();
  const auto& cfg = ctx.config;
  const auto dir = ctx.layout.stage_dir(Stage::temporal);
  json counts;

  auto write_family = [&](const std::string& name, const std::vector<temporal::ActivityCurve>& c) {
    write_file(dir / name, [&](std::ostream& out) {
      temporal::write_curves_csv(out, c, cfg.plot_from, cfg.plot_to);
    });
  };
  auto area = [&](const std::vector<temporal::ActivityCurve>& raw) {
    std::vector<temporal::ActivityCurve> out;
    for (const auto& c : raw) {
      if (c.sum() > 0.0) {
        out.push_back(temporal::normalize_area(c));
      } else {
        logger().warn("temporal: series {} is empty, not normalized", c.series);
        out.push_back(c);
      }
    }
    return out;
  };

  const auto basic = ctx.basic();
  const ranking::Edition hub{en, en};
  std::vector<temporal::ActivityCurve> english;
  for (const auto w : {temporal::Weight::count, temporal::Weight::in_links,
                       temporal::Weight::page_length}) {
    auto b = temporal::build_curve(temporal::to_string(w), basic, hub, cfg.life, w, cfg.cap_year);
    counts["without_birth_year"] = b.without_birth_year;
    counts["empty_interval"] = b.empty_interval;
    english.push_back(std::move(b.curve));
  }
  write_family("english_raw.csv", english);
  write_family("english_area.csv", area(english));

  std::vector<temporal::ActivityCurve> langs;
  for (const auto& lang : cfg.languages) {
    const auto local = ctx.edition_store(lang);
    const ranking::Edition edition{en, *local};
    auto b = temporal::build_curve(lang, ctx.projected(lang), edition, cfg.life,
                                   temporal::Weight::in_links, cfg.cap_year);
    counts["languages"][lang] = {{"without_birth_year", b.without_birth_year},
                                 {"empty_interval", b.empty_interval}};
    langs.push_back(std::move(b.curve));
  }
  write_family("languages_raw.csv", langs);
  write_family("languages_area.csv", area(langs));
  write_family("languages_per_year.csv", temporal::normalize_per_year(langs));
  return counts;
}

// ---------------------------------------------------------------------------
// crosslang

json stage_crosslang(Context& ctx) {
  const auto& en = ctx.hub();
  const auto& cfg = ctx.config;
  if (!cfg.native_languages) {
    throw ConfigError("crosslang stage needs crosslang.native_languages in the config");
  }
  const auto natives = *load_natives(ctx);
  const auto basic = ctx.basic();
  const auto dir = ctx.layout.stage_dir(Stage::crosslang);
  const auto k = std::to_string(cfg.top_k);
  json counts;

  std::ostringstream summary, by_lang, foreign_counts;
  summary << "measure\tmean_count\tstddev_count\tmean_fraction\n";
  by_lang << "measure\tlanguage\tcount\tfraction\tuncovered\n";
  foreign_counts << "measure\tlanguage\tnatives\tcount_top" << k << '\n';
  for (const auto& m : cfg.measures()) {
    crosslang::RankingsByLanguage rankings;
    for (const auto& lang : cfg.languages) rankings.emplace(lang, load_ranking(ctx, lang, m));
    const auto s = crosslang::summarize_native(rankings, cfg.top_k, natives);
    summary << m << '\t' << fixed3(s.mean_count) << '\t' << fixed3(s.stddev_count) << '\t'
            << fixed3(s.mean_fraction) << '\n';
    counts[m]["mean_native_count"] = s.mean_count;
    for (const auto& [lang, c] : s.per_language) {
      by_lang << m << '\t' << lang << '\t' << c.count << '\t' << fixed3(c.fraction) << '\t'
              << c.uncovered << '\n';
    }
    for (const auto& lang : cfg.languages) {
      const auto f = crosslang::foreign_ranking(lang, basic, rankings, natives, en.terms, cfg.top_k);
      write_file(dir / "foreign" / (m + "_" + lang + ".tsv"),
                 [&](std::ostream& out) { crosslang::write_foreign_tsv(out, f, en.terms); });
      foreign_counts << m << '\t' << lang << '\t' << f.writers.size() << '\t' << f.count_top_k
                     << '\n';
      counts[m]["count_top_k"][lang] = f.count_top_k;
    }
  }
  write_file(dir / ("native_top" + k + ".tsv"), [&](std::ostream& out) { out << summary.str(); });
  write_file(dir / ("native_top" + k + "_by_language.tsv"),
             [&](std::ostream& out) { out << by_lang.str(); });
  write_file(dir / ("foreign_count_top" + k + ".tsv"),
             [&](std::ostream& out) { out << foreign_counts.str(); });
  return counts;
}

// ---------------------------------------------------------------------------
// graph

json stage_graph(Context& ctx) {
  const auto& en = ctx.hub();
  const auto& cfg = ctx.config;
  const auto dir = ctx.layout.stage_dir(Stage::graph);
  json counts;
  for (const auto& lang : cfg.graph_languages) {
    const auto local = ctx.edition_store(lang);
    const ranking::Edition edition{en, *local};
    const auto full = graph::build_writer_graph(ctx.projected(lang), edition, cfg.pagerank);
    const auto kept = graph::threshold_filter(full, cfg.graph_threshold);
    const auto communities = graph::detect_communities(kept, cfg.graph_seed);
    std::set<std::uint32_t> distinct(communities.begin(), communities.end());
    counts[lang] = {{"nodes", full.nodes.size()},
                    {"edges", full.edges.size()},
                    {"kept_nodes", kept.nodes.size()},
                    {"kept_edges", kept.edges.size()},
                    {"communities", distinct.size()},
                    {"modularity", graph::modularity(kept, communities)}};
    for (const auto f : cfg.graph_formats) {
      write_file(dir / ("writers_" + lang + "." + std::string(graph::to_string(f))),
                 [&](std::ostream& out) { graph::export_graph(out, kept, communities, f, en.terms); });
    }
  }
  return counts;
}

// ---------------------------------------------------------------------------
// manifest

json inputs_json(const PipelineConfig& cfg) {
  json j;
  // Paths below the config directory are recorded relative to it, so the
  // manifest does not depend on where the experiment lives.
  auto describe = [&cfg](const fs::path& p) {
    std::error_code ec;
    const auto size = fs::is_regular_file(p, ec) ? fs::file_size(p, ec) : 0;
    auto rel = p.lexically_relative(cfg.base_dir);
    const bool inside = !rel.empty() && *rel.begin() != "..";
    return json{{"path", (inside ? rel : p).generic_string()}, {"bytes", size}};
  };
  for (const auto& lang : cfg.languages) {
    for (const auto& [kind, path] : resolve_datasets(cfg, lang)) {
      j["datasets"][lang][store::to_string(kind)] = describe(path);
    }
  }
  for (const auto& [year, entries] : cfg.pagecounts) {
    auto& list = j["pagecounts"][std::to_string(year)];
    list = json::array();
    for (const auto& f : expand_inputs(entries)) list.push_back(describe(f));
  }
  if (cfg.canon) j["canon"] = describe(*cfg.canon);
  if (cfg.native_languages) j["native_languages"] = describe(*cfg.native_languages);
  return j;
}

json run_stage(Context& ctx, Stage s) {
  switch (s) {
    case Stage::ingest: return stage_ingest(ctx);
    case Stage::identify: return stage_identify(ctx);
    case Stage::rank: return stage_rank(ctx);
    case Stage::evaluate: return stage_evaluate(ctx);
    case Stage::temporal: return stage_temporal(ctx);
    case Stage::crosslang: return stage_crosslang(ctx);
    case Stage::graph: return stage_graph(ctx);
  }
  throw Error("unknown stage");
}

}  // namespace

std::span<const Stage> all_stages() { return kStages; }

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::ingest: return "ingest";
    case Stage::identify: return "identify";
    case Stage::rank: return "rank";
    case Stage::evaluate: return "evaluate";
    case Stage::temporal: return "temporal";
    case Stage::crosslang: return "crosslang";
    case Stage::graph: return "graph";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (const auto s : kStages) {
    if (to_string(s) == name) return s;
  }
  throw Error("unknown stage '" + std::string(name) +
              "' (expected ingest, identify, rank, evaluate, temporal, crosslang or graph)");
}

std::span<const Stage> dependencies(Stage stage) {
  switch (stage) {
    case Stage::ingest: return {};
    case Stage::identify: return kIdentifyDeps;
    case Stage::rank: return kRankDeps;
    case Stage::evaluate: return kEvaluateDeps;
    case Stage::temporal: return kTemporalDeps;
    case Stage::crosslang: return kCrosslangDeps;
    case Stage::graph: return kGraphDeps;
  }
  return {};
}

DependencyError::DependencyError(Stage stage, Stage missing)
    : Error("stage '" + std::string(to_string(stage)) + "' needs the output of stage '" +
            std::string(to_string(missing)) + "', which has not been run; run '" +
            std::string(to_string(missing)) + "' first or include it in --stages"),
      stage_(stage),
      missing_(missing) {}

nlohmann::json parameters_json(const PipelineConfig& c) {
  json j;
  j["languages"] = c.languages;
  const auto& p = c.predicates;
  j["predicates"] = {{"type", p.type},           {"subject", p.subject},
                     {"broader", p.broader},     {"pref_label", p.pref_label},
                     {"page_length", p.page_length}, {"page_link", p.page_link},
                     {"same_as", p.same_as},     {"redirect", p.redirect}};
  j["life_predicates"] = {{"birth_date", c.life.birth_date},
                          {"birth_year", c.life.birth_year},
                          {"death_date", c.life.death_date},
                          {"death_year", c.life.death_year}};
  json cats = json::array();
  for (const auto& a : c.categories) {
    json q{{"name", a.name}, {"root", a.query.root}};
    q["filter_word"] = a.query.filter_word ? json(*a.query.filter_word) : json(nullptr);
    q["max_depth"] = a.query.max_depth ? json(*a.query.max_depth) : json(nullptr);
    cats.push_back(q);
  }
  j["identify"] = {{"type_iri", c.type_iri},
                   {"categories", cats},
                   {"occupation",
                    {{"predicate", c.occupation.predicate},
                     {"include", c.occupation.include},
                     {"exclude", c.occupation.exclude}}},
                   {"basic_set_from", c.basic_set_from},
                   {"min_in_links", c.min_in_links},
                   {"compare_top_k", c.compare_top_k}};
  j["rank"] = {{"damping", c.pagerank.damping},
               {"tolerance", c.pagerank.tolerance},
               {"max_iterations", c.pagerank.max_iterations},
               {"measures", c.measures()}};
  j["temporal"] = {{"cap_year", c.cap_year}, {"plot_from", c.plot_from}, {"plot_to", c.plot_to}};
  j["crosslang"] = {{"top_k", c.top_k}};
  std::vector<std::string> formats;
  for (const auto f : c.graph_formats) formats.emplace_back(graph::to_string(f));
  j["graph"] = {{"languages", c.graph_languages},
                {"threshold", c.graph_threshold},
                {"formats", formats},
                {"seed", c.graph_seed}};
  return j;
}

RunReport run(const PipelineConfig& config, const RunOptions& options) {
  RunReport report;
  Context ctx{config, options, Layout{config.output_dir}, report, nullptr};

  std::set<Stage> requested(options.stages.begin(), options.stages.end());
  std::set<Stage> available;
  for (const auto s : kStages) {
    if (fs::exists(ctx.layout.stage_json(s))) available.insert(s);
  }
  // Check the whole plan before any work so a bad request changes nothing.
  for (const auto s : kStages) {
    if (!requested.contains(s)) continue;
    for (const auto d : dependencies(s)) {
      if (!requested.contains(d) && !available.contains(d)) throw DependencyError(s, d);
    }
  }

  fs::create_directories(config.output_dir);
  for (const auto s : kStages) {
    if (!requested.contains(s)) continue;
    logger().info("stage {}: start", to_string(s));
    const auto t0 = std::chrono::steady_clock::now();
    // A stale marker must not survive a failed rerun.
    fs::remove(ctx.layout.stage_json(s));
    auto counts = run_stage(ctx, s);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    write_json(ctx.layout.stage_json(s), json{{"stage", to_string(s)}, {"counts", counts}});
    logger().info("stage {}: done in {:.2f}s", to_string(s), dt.count());
    report.stages.push_back({s, dt.count(), std::move(counts)});
  }

  json manifest;
  manifest["parameters"] = parameters_json(config);
  manifest["inputs"] = inputs_json(config);
  manifest["stages"] = json::object();
  for (const auto s : kStages) {
    const auto path = ctx.layout.stage_json(s);
    if (fs::exists(path)) manifest["stages"][std::string(to_string(s))] = read_json(path)["counts"];
  }
  write_json(config.output_dir / "manifest.json", manifest);

  json log;
  log["threads"] = options.threads;
  log["strict_parse"] = options.strict_parse;
  log["stages"] = json::array();
  for (const auto& r : report.stages) {
    log["stages"].push_back({{"stage", to_string(r.stage)}, {"seconds", r.seconds}});
  }
  log["reused_snapshots"] = report.reused_snapshots;
  write_json(config.output_dir / "run_log.json", log);
  return report;
}

}  // namespace litrank::pipeline
