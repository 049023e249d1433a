#include "subcat/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>
#include <thread>

#include "subcat/classify.hpp"
#include "subcat/corpus.hpp"
#include "subcat/evalmetrics.hpp"
#include "subcat/grammar.hpp"
#include "subcat/lemmatizer.hpp"
#include "subcat/parser.hpp"
#include "subcat/patterns.hpp"
#include "subcat/rerank.hpp"
#include "subcat/statfilter.hpp"
#include "subcat/synth.hpp"
#include "subcat/tagger.hpp"
#include "subcat/textio.hpp"

namespace subcat {

const std::vector<std::string> kStageOrder = {"synth",    "tag",     "parse",  "extract",
                                              "classify", "lexicon", "evaluate", "rerank"};

std::string PipelineConfig::lexicon_path() const {
  return lexicon.empty() ? artifact("lexicon.txt") : lexicon;
}

std::string PipelineConfig::artifact(const std::string& name) const {
  return (std::filesystem::path(workdir) / name).string();
}

std::string PipelineConfig::config_hash() const {
  // Hash over parameter values and configuration file contents, never
  // over paths, so relocated but otherwise identical runs agree.
  auto file_digest = [](const std::string& path) {
    if (path.empty() || !file_exists(path)) return std::string("-");
    return hex64(fnv1a64(read_file(path)));
  };
  std::vector<std::string> kv = {
      "accept_over=" + std::to_string(accept_over),
      "alt_odds=" + g17(alt_odds),
      "corpus_id=" + corpus_id,
      "grammar=" + file_digest(grammar),
      "inventory=" + file_digest(inventory),
      "k=" + std::to_string(k),
      "mode=" + mode,
      "pretagged=" + std::string(pretagged ? "1" : "0"),
      "priors=" + file_digest(priors),
      "rerank_weight=" + g17(rerank_weight),
      "ruleset=" + file_digest(ruleset),
      "seed=" + std::to_string(seed),
      "smoothing=" + g17(smoothing),
      "stats=" + file_digest(stats),
      "synth_n=" + std::to_string(synth_n),
      "tagset=" + file_digest(tagset),
      "threshold=" + g17(threshold),
  };
  return hex64(fnv1a64(join(kv, "\n")));
}

PipelineConfig load_config(const std::string& text) {
  PipelineConfig cfg;
  for (const auto& line : config_lines(text)) {
    size_t eq = line.text.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected key = value at line " + std::to_string(line.number));
    std::string key = trim(line.text.substr(0, eq));
    std::string value = trim(line.text.substr(eq + 1));
    auto as_long = [&](long lo) {
      auto v = parse_long(value);
      if (!v || *v < lo) throw ConfigError("config: bad value for " + key + ": " + value);
      return *v;
    };
    auto as_double = [&]() {
      auto v = parse_double(value);
      if (!v) throw ConfigError("config: bad value for " + key + ": " + value);
      return *v;
    };
    if (key == "corpus") cfg.corpus = value;
    else if (key == "train_corpus") cfg.train_corpus = value;
    else if (key == "pretagged") cfg.pretagged = (value == "1" || value == "true");
    else if (key == "tagset") cfg.tagset = value;
    else if (key == "ruleset") cfg.ruleset = value;
    else if (key == "grammar") cfg.grammar = value;
    else if (key == "inventory") cfg.inventory = value;
    else if (key == "priors") cfg.priors = value;
    else if (key == "stats") cfg.stats = value;
    else if (key == "gold") cfg.gold = value;
    else if (key == "brackets") cfg.brackets = value;
    else if (key == "seed_lexicon") cfg.seed_lexicon = value;
    else if (key == "workdir") cfg.workdir = value;
    else if (key == "lexicon") cfg.lexicon = value;
    else if (key == "corpus_id") cfg.corpus_id = value;
    else if (key == "threshold") cfg.threshold = as_double();
    else if (key == "k") cfg.k = static_cast<int>(as_long(1));
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_long(0));
    else if (key == "synth_n") cfg.synth_n = static_cast<int>(as_long(0));
    else if (key == "workers") cfg.workers = static_cast<int>(as_long(1));
    else if (key == "mode") cfg.mode = value;
    else if (key == "alt_odds") cfg.alt_odds = as_double();
    else if (key == "smoothing") cfg.smoothing = as_double();
    else if (key == "accept_over") cfg.accept_over = static_cast<int>(as_long(0));
    else if (key == "rerank_weight") cfg.rerank_weight = as_double();
    else throw ConfigError("config: unknown key " + key);
  }
  return cfg;
}

PipelineConfig load_config_file(const std::string& path) {
  if (!file_exists(path)) throw ConfigError("config file not found: " + path);
  return load_config(read_file(path));
}

namespace {

// Deterministic sharded map: results land by index, so the worker count
// never affects output bytes.
template <typename Fn>
void parallel_for(int n, int workers, Fn fn) {
  workers = std::max(1, std::min(workers, n));
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct StageContext {
  const PipelineConfig& cfg;

  void require_config_file(const std::string& path, const std::string& what) const {
    if (path.empty()) throw ConfigError("config: " + what + " path is not set");
    if (!file_exists(path)) throw ConfigError("config: " + what + " file not found: " + path);
  }
  std::string require_artifact(const std::string& path, const std::string& what) const {
    if (!file_exists(path))
      throw MissingArtifact("missing artifact: " + what + " (" + path +
                            "); run the producing stage first");
    return read_file(path);
  }

  Tagset tagset() const {
    require_config_file(cfg.tagset, "tagset");
    return load_tagset(read_file(cfg.tagset));
  }
  LemmaRuleset ruleset() const {
    require_config_file(cfg.ruleset, "ruleset");
    return load_lemma_rules(read_file(cfg.ruleset));
  }
  Grammar grammar() const {
    require_config_file(cfg.grammar, "grammar");
    return load_grammar(read_file(cfg.grammar));
  }
  ClassInventory inventory() const {
    require_config_file(cfg.inventory, "inventory");
    return load_inventory(read_file(cfg.inventory));
  }
  PriorTable priors() const {
    require_config_file(cfg.priors, "priors");
    return load_priors(read_file(cfg.priors));
  }
};

std::string default_corpus_id(const PipelineConfig& cfg) {
  if (!cfg.corpus_id.empty()) return cfg.corpus_id;
  if (cfg.corpus.empty()) return "synthetic";
  return std::filesystem::path(cfg.corpus).stem().string();
}

// ---- stages --------------------------------------------------------------

void stage_synth(const StageContext& ctx) {
  const PipelineConfig& cfg = ctx.cfg;
  ctx.require_config_file(cfg.seed_lexicon, "seed_lexicon");
  auto seed = load_seed(read_file(cfg.seed_lexicon));
  auto inventory = ctx.inventory();
  auto grammar = ctx.grammar();
  SynthResult result = gen_synth_corpus(seed, inventory, grammar, cfg.seed, cfg.synth_n);
  write_file_atomic(cfg.artifact("synth_corpus.txt"), format_tagged_corpus(result.corpus));
  write_file_atomic(cfg.artifact("synth_gold.txt"), format_gold(result.gold));
  write_file_atomic(cfg.artifact("synth_labels.txt"), format_labels(result.labels));
}

void stage_tag(const StageContext& ctx) {
  const PipelineConfig& cfg = ctx.cfg;
  ctx.require_config_file(cfg.corpus, "corpus");
  Tagset tagset = ctx.tagset();
  LemmaRuleset rules = ctx.ruleset();

  std::vector<Sentence> tagged;
  if (cfg.pretagged) {
    tagged = parse_tagged_corpus(read_file(cfg.corpus));
  } else {
    ctx.require_config_file(cfg.train_corpus, "train_corpus");
    TaggerModel model =
        train_tagger(parse_tagged_corpus(read_file(cfg.train_corpus)), tagset, cfg.smoothing);
    auto raw = parse_raw_corpus(read_file(cfg.corpus));
    tagged.resize(raw.size());
    parallel_for(static_cast<int>(raw.size()), cfg.workers, [&](int i) {
      tagged[i] = tag_sentence(raw[i], model, cfg.alt_odds);
    });
  }
  for (Sentence& sent : tagged) lemmatize_sentence(sent, rules);
  write_file_atomic(cfg.artifact("tagged.txt"), format_tagged_corpus(tagged));
  write_file_atomic(cfg.artifact("lemmas.txt"), format_lemma_corpus(tagged));
}

void stage_parse(const StageContext& ctx) {
  const PipelineConfig& cfg = ctx.cfg;
  Grammar grammar = ctx.grammar();
  auto corpus = parse_lemma_corpus(ctx.require_artifact(cfg.artifact("lemmas.txt"),
                                                        "lemmatized corpus lemmas.txt"));
  std::vector<std::vector<Analysis>> all(corpus.size());
  parallel_for(static_cast<int>(corpus.size()), cfg.workers,
               [&](int i) { all[i] = parse(corpus[i], grammar, cfg.k); });

  std::string out;
  size_t covered = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    if (!all[i].empty()) ++covered;
    for (const Analysis& a : all[i])
      out += format_analysis_line(static_cast<int>(i), a) + "\n";
  }
  write_file_atomic(cfg.artifact("parses.txt"), out);

  std::string report;
  report += "sentences=" + std::to_string(corpus.size()) + "\n";
  report += "covered=" + std::to_string(covered) + "\n";
  double ratio = corpus.empty() ? 0.0 : static_cast<double>(covered) / corpus.size();
  report += "coverage=" + fixed9(ratio) + "\n";
  write_file_atomic(cfg.artifact("parse_report.txt"), report);
}

std::vector<std::vector<Analysis>> read_parses(const StageContext& ctx, const Grammar& grammar,
                                               const std::string& what) {
  std::string text = ctx.require_artifact(ctx.cfg.artifact("parses.txt"), what);
  std::vector<std::vector<Analysis>> grouped;
  for (const std::string& line : split(text, '\n')) {
    if (trim(line).empty()) continue;
    AnalysisLine parsed = parse_analysis_line(line, grammar);
    if (parsed.sentence_id >= static_cast<int>(grouped.size()))
      grouped.resize(parsed.sentence_id + 1);
    grouped[parsed.sentence_id].push_back(std::move(parsed.analysis));
  }
  for (auto& analyses : grouped)
    std::sort(analyses.begin(), analyses.end(),
              [](const Analysis& a, const Analysis& b) { return a.rank < b.rank; });
  return grouped;
}

void stage_extract(const StageContext& ctx) {
  const PipelineConfig& cfg = ctx.cfg;
  Grammar grammar = ctx.grammar();
  Tagset tagset = ctx.tagset();
  auto analyses = read_parses(ctx, grammar, "parsed corpus parses.txt");
  auto grouped = build_patternsets(analyses, grammar, tagset.verb_tags);

  // Canonical order: sentence id, then predicate index.
  std::vector<const Patternset*> flat;
  for (const auto& [verb, sets] : grouped)
    for (const Patternset& ps : sets) flat.push_back(&ps);
  std::sort(flat.begin(), flat.end(), [](const Patternset* a, const Patternset* b) {
    if (a->sentence_id != b->sentence_id) return a->sentence_id < b->sentence_id;
    return a->predicate_index < b->predicate_index;
  });
  std::string out;
  for (const Patternset* ps : flat) out += patternset_sexpr(*ps) + "\n";
  write_file_atomic(cfg.artifact("patternsets.txt"), out);
}

std::vector<Patternset> read_patternsets(const StageContext& ctx, const std::string& what) {
  std::string text = ctx.require_artifact(ctx.cfg.artifact("patternsets.txt"), what);
  std::vector<Patternset> out;
  for (const std::string& line : split(text, '\n')) {
    if (trim(line).empty()) continue;
    out.push_back(patternset_from_sexpr(line));
  }
  return out;
}

void stage_classify(const StageContext& ctx) {
  const PipelineConfig& cfg = ctx.cfg;
  ClassInventory inventory = ctx.inventory();
  auto patternsets = read_patternsets(ctx, "patternsets.txt");

  std::string out;
  PatternStats stats;
  long classified = 0;
  for (const Patternset& ps : patternsets) {
    auto cls = classify(ps.selected, inventory);
    ++stats.total_patterns;
    if (cls) {
      ++stats.counts[*cls];
      ++classified;
    }
    out += std::to_string(ps.sentence_id) + " " + std::to_string(ps.predicate_index) + " " +
           ps.predicate + " " + std::to_string(ps.selected_rank) + " " +
           (cls ? *cls : std::string("UNCLASSIFIABLE")) + "\n";
  }
  write_file_atomic(cfg.artifact("classified.txt"), out);
  if (stats.total_patterns > 0)
    write_file_atomic(cfg.artifact("stats.txt"), format_stats(stats));

  std::string report;
  report += "patternsets=" + std::to_string(patternsets.size()) + "\n";
  report += "classified=" + std::to_string(classified) + "\n";
  report += "unclassifiable=" + std::to_string(stats.total_patterns - classified) + "\n";
  double fraction = stats.total_patterns == 0
                        ? 0.0
                        : static_cast<double>(stats.total_patterns - classified) /
                              stats.total_patterns;
  report += "unclassifiable_fraction=" + fixed9(fraction) + "\n";
  write_file_atomic(cfg.artifact("classify_report.txt"), report);
}

void stage_lexicon(const StageContext& ctx) {
  const PipelineConfig& cfg = ctx.cfg;
  PriorTable priors = ctx.priors();
  std::string classified =
      ctx.require_artifact(cfg.artifact("classified.txt"), "classified patternsets");

  PatternStats stats;
  if (!cfg.stats.empty()) {
    ctx.require_config_file(cfg.stats, "stats");
    stats = load_stats(read_file(cfg.stats));
  } else {
    stats = load_stats(ctx.require_artifact(cfg.artifact("stats.txt"), "pattern stats"));
  }

  std::map<std::string, int> totals;                         // verb -> n
  std::map<std::string, std::map<std::string, int>> counts;  // verb -> class -> m
  for (const auto& line : config_lines(classified)) {
    auto fields = split_ws(line.text);
    if (fields.size() != 5)
      throw std::runtime_error("classified.txt: expected 5 fields at line " +
                               std::to_string(line.number));
    const std::string& verb = fields[2];
    const std::string& cls = fields[4];
    ++totals[verb];
    if (cls != "UNCLASSIFIABLE") ++counts[verb][cls];
  }

  BuildOptions options;
  options.threshold = cfg.threshold;
  options.accept_over = cfg.accept_over;
  if (!(options.threshold > 0.0 && options.threshold < 1.0))
    throw ConfigError("config: threshold must lie in (0, 1)");

  Lexicon lexicon;
  lexicon.corpus_id = default_corpus_id(cfg);
  lexicon.config_hash = cfg.config_hash();
  for (const auto& [verb, n] : totals)
    lexicon.entries.push_back(build_entry(verb, n, counts[verb], priors, stats, options));
  write_file_atomic(cfg.lexicon_path(), format_lexicon(lexicon));

  std::string report;
  report += "verbs=" + std::to_string(lexicon.entries.size()) + "\n";
  for (const LexiconEntry& entry : lexicon.entries) {
    long accepted = 0;
    for (const ClassRecord& rec : entry.classes)
      if (rec.accepted) ++accepted;
    report += "verb " + entry.verb + " n=" + std::to_string(entry.n) +
              " classes=" + std::to_string(entry.classes.size()) +
              " accepted=" + std::to_string(accepted) + "\n";
  }
  write_file_atomic(cfg.artifact("lexicon_report.txt"), report);
}

std::set<std::string> accepted_classes(const LexiconEntry& entry) {
  std::set<std::string> out;
  for (const ClassRecord& rec : entry.classes)
    if (rec.accepted) out.insert(rec.class_id);
  return out;
}

std::vector<std::string> system_ranking(const LexiconEntry& entry) {
  // Accepted classes by descending m; equal counts ordered by class id.
  std::vector<const ClassRecord*> recs;
  for (const ClassRecord& rec : entry.classes)
    if (rec.accepted) recs.push_back(&rec);
  std::sort(recs.begin(), recs.end(), [](const ClassRecord* a, const ClassRecord* b) {
    if (a->m != b->m) return a->m > b->m;
    return a->class_id < b->class_id;
  });
  std::vector<std::string> out;
  for (const ClassRecord* rec : recs) out.push_back(rec->class_id);
  return out;
}

void stage_evaluate(const StageContext& ctx) {
  const PipelineConfig& cfg = ctx.cfg;
  ctx.require_config_file(cfg.gold, "gold");
  auto gold = load_gold(read_file(cfg.gold));
  Lexicon lexicon =
      parse_lexicon(ctx.require_artifact(cfg.lexicon_path(), "lexicon"));

  std::string table = "Type precision and recall\n";
  table += "verb            TP   FP   FN   precision  recall\n";
  EvalCounts totals;
  std::vector<std::pair<std::string, double>> rankings, recalls;
  for (const auto& [verb, entry] : gold) {
    const LexiconEntry* sys = lexicon.find(verb);
    std::set<std::string> accepted = sys ? accepted_classes(*sys) : std::set<std::string>{};
    PRResult pr = type_prf(accepted, entry.classes);
    totals.tp += pr.counts.tp;
    totals.fp += pr.counts.fp;
    totals.fn += pr.counts.fn;
    char buf[160];
    char prec[16] = "-", rec[16] = "-";
    if (pr.precision) std::snprintf(prec, sizeof(prec), "%.1f%%", *pr.precision * 100);
    if (pr.recall) std::snprintf(rec, sizeof(rec), "%.1f%%", *pr.recall * 100);
    std::snprintf(buf, sizeof(buf), "%-14s %4ld %4ld %4ld   %8s  %6s\n", verb.c_str(),
                  pr.counts.tp, pr.counts.fp, pr.counts.fn, prec, rec);
    table += buf;

    if (sys && !entry.ranking.empty()) {
      auto acc = ranking_accuracy(system_ranking(*sys), entry.ranking);
      if (acc) rankings.emplace_back(verb, *acc);
    }
    if (sys && !entry.token_counts.empty()) {
      auto rec = token_recall(accepted, entry.token_counts);
      if (rec) recalls.emplace_back(verb, *rec);
    }
  }
  PRResult total_pr = prf_from_counts(totals);

  auto percent_line = [](const std::string& verb, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-14s %5.1f%%\n", verb.c_str(), value * 100);
    return std::string(buf);
  };
  table += "\nRanking accuracy\n";
  double rank_sum = 0;
  for (const auto& [verb, acc] : rankings) {
    table += percent_line(verb, acc);
    rank_sum += acc;
  }
  table += "\nToken recall\n";
  double recall_sum = 0;
  for (const auto& [verb, rec] : recalls) {
    table += percent_line(verb, rec);
    recall_sum += rec;
  }

  std::string kv = "\n";
  kv += "tp=" + std::to_string(totals.tp) + "\n";
  kv += "fp=" + std::to_string(totals.fp) + "\n";
  kv += "fn=" + std::to_string(totals.fn) + "\n";
  kv += "type_precision=" + (total_pr.precision ? fixed9(*total_pr.precision) : "-") + "\n";
  kv += "type_recall=" + (total_pr.recall ? fixed9(*total_pr.recall) : "-") + "\n";
  kv += "ranking_accuracy_mean=" +
        (rankings.empty() ? "-" : fixed9(rank_sum / rankings.size())) + "\n";
  kv += "token_recall_mean=" +
        (recalls.empty() ? "-" : fixed9(recall_sum / recalls.size())) + "\n";
  write_file_atomic(cfg.artifact("eval_report.txt"), table + kv);
}

void stage_rerank(const StageContext& ctx) {
  const PipelineConfig& cfg = ctx.cfg;
  Grammar grammar = ctx.grammar();
  Tagset tagset = ctx.tagset();
  ClassInventory inventory = ctx.inventory();
  Lexicon lexicon = parse_lexicon(ctx.require_artifact(cfg.lexicon_path(), "lexicon"));
  auto analyses = read_parses(ctx, grammar, "parsed corpus parses.txt");

  RerankOptions options;
  options.weight = cfg.rerank_weight;
  if (cfg.mode == "raw") options.raw_counts = true;
  else if (cfg.mode != "smoothed") throw ConfigError("config: mode must be raw or smoothed");
  options.verb_tags = tagset.verb_tags;

  std::vector<std::vector<ScoredAnalysis>> reranked(analyses.size());
  parallel_for(static_cast<int>(analyses.size()), cfg.workers, [&](int i) {
    reranked[i] = rerank(analyses[i], lexicon, inventory, grammar, options);
  });

  std::string out, ledger;
  for (size_t i = 0; i < reranked.size(); ++i) {
    for (const ScoredAnalysis& sa : reranked[i]) {
      out += format_analysis_line(static_cast<int>(i), sa.analysis) + "\n";
      ledger += std::to_string(i) + " " + std::to_string(sa.analysis.rank) + " " +
                g17(sa.base) + " " + g17(sa.adjustment) + " " + g17(sa.combined) + "\n";
    }
  }
  write_file_atomic(cfg.artifact("reranked.txt"), out);
  write_file_atomic(cfg.artifact("rerank_ledger.txt"), ledger);

  if (cfg.brackets.empty()) return;
  ctx.require_config_file(cfg.brackets, "brackets");
  auto gold = load_brackets(read_file(cfg.brackets));

  double base_cross = 0, lex_cross = 0;
  long compared = 0;
  std::vector<double> base_scores, lex_scores;
  for (size_t i = 0; i < analyses.size(); ++i) {
    auto it = gold.find(static_cast<int>(i));
    if (it == gold.end() || analyses[i].empty()) continue;
    Bracketing baseline = bracketing_from_analysis(static_cast<int>(i), analyses[i].front());
    Bracketing lexical =
        bracketing_from_analysis(static_cast<int>(i), reranked[i].front().analysis);
    GeigResult rb = geig(baseline, it->second);
    GeigResult rl = geig(lexical, it->second);
    base_cross += rb.crossings;
    lex_cross += rl.crossings;
    base_scores.push_back(static_cast<double>(rb.crossings));
    lex_scores.push_back(static_cast<double>(rl.crossings));
    ++compared;
  }
  std::string report;
  report += "sentences=" + std::to_string(compared) + "\n";
  if (compared > 0) {
    report += "baseline_mean_crossings=" + fixed9(base_cross / compared) + "\n";
    report += "lexicalized_mean_crossings=" + fixed9(lex_cross / compared) + "\n";
    if (compared >= 2) {
      TTestResult tt = paired_t(base_scores, lex_scores);
      report += "paired_t=" + fixed9(tt.t) + "\n";
      report += "df=" + std::to_string(tt.df) + "\n";
      report += "p_one_sided=" + (tt.p ? fixed9(*tt.p) : "-") + "\n";
      if (!tt.status.empty()) report += "t_status=" + tt.status + "\n";
    }
  }
  write_file_atomic(cfg.artifact("rerank_report.txt"), report);
}

}  // namespace

void run_pipeline(const PipelineConfig& config, std::vector<std::string> stages) {
  if (stages.empty()) throw ConfigError("no stages requested");
  for (const std::string& stage : stages)
    if (std::find(kStageOrder.begin(), kStageOrder.end(), stage) == kStageOrder.end())
      throw ConfigError("unknown stage: " + stage);
  if (!(config.threshold > 0.0 && config.threshold < 1.0))
    throw ConfigError("config: threshold must lie in (0, 1)");
  if (config.k < 1) throw ConfigError("config: k must be >= 1");
  if (config.workers < 1) throw ConfigError("config: workers must be >= 1");

  std::error_code ec;
  std::filesystem::create_directories(config.workdir, ec);
  if (ec) throw ConfigError("config: cannot create workdir " + config.workdir);

  StageContext ctx{config};

  // Every config file the requested stages consume must be readable
  // before any stage runs.
  auto wants = [&stages](const char* stage) {
    return std::find(stages.begin(), stages.end(), stage) != stages.end();
  };
  if (wants("synth")) {
    ctx.require_config_file(config.seed_lexicon, "seed_lexicon");
    ctx.require_config_file(config.inventory, "inventory");
    ctx.require_config_file(config.grammar, "grammar");
  }
  if (wants("tag")) {
    ctx.require_config_file(config.corpus, "corpus");
    ctx.require_config_file(config.tagset, "tagset");
    ctx.require_config_file(config.ruleset, "ruleset");
    if (!config.pretagged) ctx.require_config_file(config.train_corpus, "train_corpus");
  }
  if (wants("parse")) ctx.require_config_file(config.grammar, "grammar");
  if (wants("extract")) {
    ctx.require_config_file(config.grammar, "grammar");
    ctx.require_config_file(config.tagset, "tagset");
  }
  if (wants("classify")) ctx.require_config_file(config.inventory, "inventory");
  if (wants("lexicon")) {
    ctx.require_config_file(config.priors, "priors");
    if (!config.stats.empty()) ctx.require_config_file(config.stats, "stats");
  }
  if (wants("evaluate")) ctx.require_config_file(config.gold, "gold");
  if (wants("rerank")) {
    ctx.require_config_file(config.grammar, "grammar");
    ctx.require_config_file(config.tagset, "tagset");
    ctx.require_config_file(config.inventory, "inventory");
    if (!config.brackets.empty()) ctx.require_config_file(config.brackets, "brackets");
  }

  for (const std::string& stage : kStageOrder) {
    if (std::find(stages.begin(), stages.end(), stage) == stages.end()) continue;
    if (stage == "synth") stage_synth(ctx);
    else if (stage == "tag") stage_tag(ctx);
    else if (stage == "parse") stage_parse(ctx);
    else if (stage == "extract") stage_extract(ctx);
    else if (stage == "classify") stage_classify(ctx);
    else if (stage == "lexicon") stage_lexicon(ctx);
    else if (stage == "evaluate") stage_evaluate(ctx);
    else if (stage == "rerank") stage_rerank(ctx);
  }
}

}  // namespace subcat
