#pragma once

#include <set>
#include <string>
#include <vector>

#include "subcat/classify.hpp"
#include "subcat/parser.hpp"
#include "subcat/statfilter.hpp"

namespace subcat {

// Add-one smoothed relative frequency of a class for this entry:
// (m + 1) / (classified_total + K) over an inventory of K classes.
// Classes outside the inventory are an error; verbs without an entry use
// the uniform distribution this reduces to at zero counts.
double smoothed_freq(const LexiconEntry& entry, const std::string& class_id,
                     const ClassInventory& inventory);

struct RerankOptions {
  double weight = 1.0;       // multiplier on the lexical adjustment
  bool raw_counts = false;   // log(m + 1) instead of log smoothed frequency
  std::set<std::string> verb_tags;  // predicate instance tags
};

struct ScoredAnalysis {
  Analysis analysis;
  double base = 0.0;
  double adjustment = 0.0;
  double combined = 0.0;
};

// Reorders the analyses of one sentence by base score plus the smoothed
// log frequency of each verbal predicate instance's classified frame.
// Unclassifiable instances draw the unseen-class mass. The sort is
// stable, so a uniform lexicon preserves the input order.
std::vector<ScoredAnalysis> rerank(const std::vector<Analysis>& analyses,
                                   const Lexicon& lexicon, const ClassInventory& inventory,
                                   const Grammar& grammar, const RerankOptions& options);

}  // namespace subcat
