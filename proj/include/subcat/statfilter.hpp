#pragma once

#include <map>
#include <string>
#include <vector>

#include "subcat/classify.hpp"
#include "subcat/patterns.hpp"

namespace subcat {

// Dictionary membership counts per class, against the dictionary's total
// verb count.
struct PriorTable {
  std::map<std::string, long> members;
  long total_verbs = 0;
};

// Corpus-wide pattern counts per class, against the total pattern count.
struct PatternStats {
  std::map<std::string, long> counts;
  long total_patterns = 0;
};

// "class_id member_count" lines plus "TOTAL_VERBS n".
PriorTable load_priors(const std::string& text);
// "class_id pattern_count" lines plus "TOTAL_PATTERNS n".
PatternStats load_stats(const std::string& text);
std::string format_stats(const PatternStats& stats);

// p(v -i): probability that a verb not of class i occurs with a pattern
// for class i.
double error_prob(const std::string& class_id, const PriorTable& priors,
                  const PatternStats& stats);

// Exact binomial point mass and upper tail. m must lie in [0, n].
double binom_pmf(int m, int n, double p);
double binom_tail(int m, int n, double p);

struct FilterDecision {
  bool accepted = false;
  double p_value = 1.0;
};

// Accept class membership when seeing >= m supporting patternsets out of
// n is sufficiently unlikely under the error rate.
FilterDecision filter_class(int m, int n, double error_probability, double threshold);

struct ClassRecord {
  std::string class_id;
  int m = 0;
  double error_probability = 0.0;
  double p_value = 1.0;
  bool accepted = false;
  double rel_freq = 0.0;  // over accepted classes only
};

struct LexiconEntry {
  std::string verb;
  int n = 0;  // all patternsets for the verb, unclassifiable ones included
  std::vector<ClassRecord> classes;  // descending m, then class id
  const ClassRecord* find(const std::string& class_id) const;
  long classified_total() const;  // sum of m over recorded classes
};

struct Lexicon {
  std::vector<LexiconEntry> entries;  // sorted by verb
  std::string corpus_id;
  std::string config_hash;
  const LexiconEntry* find(const std::string& verb) const;
};

struct BuildOptions {
  double threshold = 0.05;
  // Optional high-evidence shortcut: accept any class with more than this
  // many supporting patternsets regardless of the test. 0 disables it.
  int accept_over = 0;
};

// Classifies each patternset's selected pattern and filters the per-verb
// class counts. Classes appearing in the data must be present in both the
// priors and the stats tables.
Lexicon build_lexicon(const std::map<std::string, std::vector<Patternset>>& grouped,
                      const ClassInventory& inventory, const PriorTable& priors,
                      const PatternStats& stats, const BuildOptions& options = {});

// Same filter over pre-computed counts; the file-based pipeline feeds the
// classify artifact through this.
LexiconEntry build_entry(const std::string& verb, int n,
                         const std::map<std::string, int>& class_counts,
                         const PriorTable& priors, const PatternStats& stats,
                         const BuildOptions& options = {});

// Pattern stats over the selected patterns of a grouped patternset map;
// unclassifiable selections count toward the total only.
PatternStats derive_stats(const std::map<std::string, std::vector<Patternset>>& grouped,
                          const ClassInventory& inventory);

std::string format_lexicon(const Lexicon& lexicon);
Lexicon parse_lexicon(const std::string& text);

}  // namespace subcat
