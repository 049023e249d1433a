#include "subcat/statfilter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subcat/textio.hpp"

namespace subcat {

namespace {

std::map<std::string, long> parse_count_table(const std::string& text,
                                              const std::string& total_key, long& total) {
  std::map<std::string, long> counts;
  total = -1;
  for (const auto& line : config_lines(text)) {
    auto fields = split_ws(line.text);
    if (fields.size() != 2)
      throw std::runtime_error("count table: expected 'key count' at line " +
                               std::to_string(line.number));
    auto value = parse_long(fields[1]);
    if (!value || *value < 0)
      throw std::runtime_error("count table: bad count at line " + std::to_string(line.number));
    if (fields[0] == total_key) {
      total = *value;
    } else {
      if (!counts.emplace(fields[0], *value).second)
        throw std::runtime_error("count table: duplicate entry " + fields[0]);
    }
  }
  if (total < 0) throw std::runtime_error("count table: missing " + total_key);
  return counts;
}

}  // namespace

PriorTable load_priors(const std::string& text) {
  PriorTable t;
  t.members = parse_count_table(text, "TOTAL_VERBS", t.total_verbs);
  if (t.total_verbs <= 0) throw std::runtime_error("priors: TOTAL_VERBS must be positive");
  for (const auto& [cls, count] : t.members)
    if (count > t.total_verbs)
      throw std::runtime_error("priors: member count for " + cls + " exceeds TOTAL_VERBS");
  return t;
}

PatternStats load_stats(const std::string& text) {
  PatternStats s;
  s.counts = parse_count_table(text, "TOTAL_PATTERNS", s.total_patterns);
  if (s.total_patterns <= 0) throw std::runtime_error("stats: TOTAL_PATTERNS must be positive");
  long sum = 0;
  for (const auto& [cls, count] : s.counts) sum += count;
  if (sum > s.total_patterns)
    throw std::runtime_error("stats: per-class counts exceed TOTAL_PATTERNS");
  return s;
}

std::string format_stats(const PatternStats& stats) {
  std::string out;
  for (const auto& [cls, count] : stats.counts)
    out += cls + " " + std::to_string(count) + "\n";
  out += "TOTAL_PATTERNS " + std::to_string(stats.total_patterns) + "\n";
  return out;
}

double error_prob(const std::string& class_id, const PriorTable& priors,
                  const PatternStats& stats) {
  auto member = priors.members.find(class_id);
  if (member == priors.members.end())
    throw std::runtime_error("error_prob: class " + class_id + " missing from priors");
  auto count = stats.counts.find(class_id);
  if (count == stats.counts.end())
    throw std::runtime_error("error_prob: class " + class_id + " missing from stats");
  double membership = static_cast<double>(member->second) / priors.total_verbs;
  double pattern_rate = static_cast<double>(count->second) / stats.total_patterns;
  return (1.0 - membership) * pattern_rate;
}

namespace {

double log_choose(int n, int m) {
  return std::lgamma(n + 1.0) - std::lgamma(m + 1.0) - std::lgamma(n - m + 1.0);
}

void check_pmf_args(int m, int n, double p) {
  if (n < 0) throw std::invalid_argument("binom: n must be nonnegative");
  if (m < 0 || m > n) throw std::invalid_argument("binom: m must lie in [0, n]");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binom: p must lie in [0, 1]");
}

}  // namespace

double binom_pmf(int m, int n, double p) {
  check_pmf_args(m, n, p);
  if (p == 0.0) return m == 0 ? 1.0 : 0.0;
  if (p == 1.0) return m == n ? 1.0 : 0.0;
  double logpmf = log_choose(n, m) + m * std::log(p) + (n - m) * std::log1p(-p);
  return std::exp(logpmf);
}

double binom_tail(int m, int n, double p) {
  check_pmf_args(m, n, p);
  if (m == 0) return 1.0;
  // Complement form keeps the summation short for small m; the direct sum
  // avoids cancellation for large m.
  if (m <= n / 2) {
    double below = 0.0;
    for (int i = 0; i < m; ++i) below += binom_pmf(i, n, p);
    return std::max(0.0, 1.0 - below);
  }
  double tail = 0.0;
  for (int i = n; i >= m; --i) tail += binom_pmf(i, n, p);
  return std::min(1.0, tail);
}

FilterDecision filter_class(int m, int n, double error_probability, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("filter_class: threshold must lie in (0, 1)");
  FilterDecision d;
  d.p_value = binom_tail(m, n, error_probability);
  d.accepted = d.p_value <= threshold;
  return d;
}

const ClassRecord* LexiconEntry::find(const std::string& class_id) const {
  for (const ClassRecord& rec : classes)
    if (rec.class_id == class_id) return &rec;
  return nullptr;
}

long LexiconEntry::classified_total() const {
  long sum = 0;
  for (const ClassRecord& rec : classes) sum += rec.m;
  return sum;
}

const LexiconEntry* Lexicon::find(const std::string& verb) const {
  for (const LexiconEntry& entry : entries)
    if (entry.verb == verb) return &entry;
  return nullptr;
}

LexiconEntry build_entry(const std::string& verb, int n,
                         const std::map<std::string, int>& class_counts,
                         const PriorTable& priors, const PatternStats& stats,
                         const BuildOptions& options) {
  LexiconEntry entry;
  entry.verb = verb;
  entry.n = n;
  long sum_m = 0;
  for (const auto& [cls, m] : class_counts) sum_m += m;
  if (sum_m > n)
    throw std::invalid_argument("build_entry: class counts for " + verb +
                                " exceed the patternset total");
  long accepted_total = 0;
  for (const auto& [cls, m] : class_counts) {
    if (m <= 0) continue;
    ClassRecord rec;
    rec.class_id = cls;
    rec.m = m;
    rec.error_probability = error_prob(cls, priors, stats);
    FilterDecision d = filter_class(m, n, rec.error_probability, options.threshold);
    rec.p_value = d.p_value;
    rec.accepted = d.accepted || (options.accept_over > 0 && m > options.accept_over);
    if (rec.accepted) accepted_total += m;
    entry.classes.push_back(std::move(rec));
  }
  std::sort(entry.classes.begin(), entry.classes.end(),
            [](const ClassRecord& a, const ClassRecord& b) {
              if (a.m != b.m) return a.m > b.m;
              return a.class_id < b.class_id;
            });
  if (accepted_total > 0)
    for (ClassRecord& rec : entry.classes)
      if (rec.accepted) rec.rel_freq = static_cast<double>(rec.m) / accepted_total;
  return entry;
}

Lexicon build_lexicon(const std::map<std::string, std::vector<Patternset>>& grouped,
                      const ClassInventory& inventory, const PriorTable& priors,
                      const PatternStats& stats, const BuildOptions& options) {
  Lexicon lex;
  for (const auto& [verb, patternsets] : grouped) {
    std::map<std::string, int> counts;
    for (const Patternset& ps : patternsets) {
      auto cls = classify(ps.selected, inventory);
      if (cls) ++counts[*cls];
    }
    lex.entries.push_back(build_entry(verb, static_cast<int>(patternsets.size()), counts,
                                      priors, stats, options));
  }
  return lex;
}

PatternStats derive_stats(const std::map<std::string, std::vector<Patternset>>& grouped,
                          const ClassInventory& inventory) {
  PatternStats stats;
  for (const auto& [verb, patternsets] : grouped) {
    for (const Patternset& ps : patternsets) {
      ++stats.total_patterns;
      auto cls = classify(ps.selected, inventory);
      if (cls) ++stats.counts[*cls];
    }
  }
  return stats;
}

std::string format_lexicon(const Lexicon& lexicon) {
  std::string out;
  out += "CORPUS " + (lexicon.corpus_id.empty() ? "-" : lexicon.corpus_id) + "\n";
  out += "CONFIG " + (lexicon.config_hash.empty() ? "-" : lexicon.config_hash) + "\n";
  for (const LexiconEntry& entry : lexicon.entries) {
    out += "VERB " + entry.verb + " " + std::to_string(entry.n) + "\n";
    for (const ClassRecord& rec : entry.classes) {
      out += rec.class_id + " " + std::to_string(rec.m) + " " + fixed9(rec.error_probability) +
             " " + fixed9(rec.p_value) + " " + (rec.accepted ? "1" : "0") + " " +
             fixed9(rec.rel_freq) + "\n";
    }
  }
  return out;
}

Lexicon parse_lexicon(const std::string& text) {
  Lexicon lex;
  LexiconEntry* current = nullptr;
  for (const auto& line : config_lines(text)) {
    auto fields = split_ws(line.text);
    if (fields[0] == "CORPUS" && fields.size() == 2) {
      lex.corpus_id = fields[1] == "-" ? "" : fields[1];
      continue;
    }
    if (fields[0] == "CONFIG" && fields.size() == 2) {
      lex.config_hash = fields[1] == "-" ? "" : fields[1];
      continue;
    }
    if (fields[0] == "VERB") {
      if (fields.size() != 3)
        throw std::runtime_error("lexicon: bad VERB line " + std::to_string(line.number));
      auto n = parse_long(fields[2]);
      if (!n) throw std::runtime_error("lexicon: bad n at line " + std::to_string(line.number));
      lex.entries.push_back(LexiconEntry{fields[1], static_cast<int>(*n), {}});
      current = &lex.entries.back();
      continue;
    }
    if (current == nullptr)
      throw std::runtime_error("lexicon: class line before VERB at line " +
                               std::to_string(line.number));
    if (fields.size() != 6)
      throw std::runtime_error("lexicon: expected 6 fields at line " +
                               std::to_string(line.number));
    ClassRecord rec;
    rec.class_id = fields[0];
    auto m = parse_long(fields[1]);
    auto perr = parse_double(fields[2]);
    auto pval = parse_double(fields[3]);
    auto freq = parse_double(fields[5]);
    if (!m || !perr || !pval || !freq || (fields[4] != "0" && fields[4] != "1"))
      throw std::runtime_error("lexicon: bad class line " + std::to_string(line.number));
    rec.m = static_cast<int>(*m);
    rec.error_probability = *perr;
    rec.p_value = *pval;
    rec.accepted = fields[4] == "1";
    rec.rel_freq = *freq;
    current->classes.push_back(std::move(rec));
  }
  return lex;
}

}  // namespace subcat
