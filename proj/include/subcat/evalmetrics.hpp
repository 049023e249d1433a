#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "subcat/parser.hpp"

namespace subcat {

struct EvalCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
};

struct PRResult {
  EvalCounts counts;
  std::optional<double> precision;  // absent when tp+fp == 0
  std::optional<double> recall;     // absent when tp+fn == 0
};

PRResult prf_from_counts(const EvalCounts& counts);
PRResult type_prf(const std::set<std::string>& proposed, const std::set<std::string>& gold);

// Fraction of class pairs ordered the same way in both rankings. The
// correct ranking may contain tie groups; tied pairs leave the
// denominator. Absent when fewer than two classes are commonly ranked.
std::optional<double> ranking_accuracy(const std::vector<std::string>& system,
                                       const std::vector<std::vector<std::string>>& correct);

// Fraction of corpus exemplars whose gold class the accepted entry covers.
std::optional<double> token_recall(const std::set<std::string>& accepted,
                                   const std::map<std::string, long>& gold_token_counts);

// Unlabelled spans, end exclusive, width >= 2, duplicates collapsed.
struct Bracketing {
  int sentence_id = 0;
  int length = 0;
  std::vector<std::pair<int, int>> spans;  // sorted, unique
};

Bracketing bracketing_from_analysis(int sentence_id, const Analysis& analysis);

struct GeigResult {
  long crossings = 0;
  long matched = 0;
  long candidate_count = 0;
  long gold_count = 0;
  std::optional<double> precision;
  std::optional<double> recall;
};

// Crossing brackets plus unlabelled precision/recall between one
// candidate bracketing and the gold bracketing of the same sentence.
GeigResult geig(const Bracketing& candidate, const Bracketing& gold);

struct TTestResult {
  double t = 0.0;
  int df = 0;
  std::optional<double> p;  // one-sided upper tail
  std::string status;       // set when p is absent
};

// Paired t-test on score differences a - b.
TTestResult paired_t(const std::vector<double>& a, const std::vector<double>& b);

// Upper-tail p for the t distribution, via the regularized incomplete
// beta function.
double t_tail_p(double t, double df);

struct GoldEntry {
  std::string verb;
  std::set<std::string> classes;
  std::vector<std::vector<std::string>> ranking;  // tie groups, best first
  std::map<std::string, long> token_counts;
};

// "VERB lemma" blocks with class lines, an optional "RANK a b=c d" line,
// and "TOKENS class count" lines.
std::map<std::string, GoldEntry> load_gold(const std::string& text);
std::string format_gold(const std::map<std::string, GoldEntry>& gold);

// "sentence_id start end" triples grouped by sentence; a "LEN id n" line
// records each sentence's length.
std::map<int, Bracketing> load_brackets(const std::string& text);
std::string format_brackets(const std::map<int, Bracketing>& brackets);

}  // namespace subcat
