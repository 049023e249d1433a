#include "subcat/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subcat/patterns.hpp"

namespace subcat {

double smoothed_freq(const LexiconEntry& entry, const std::string& class_id,
                     const ClassInventory& inventory) {
  if (inventory.find(class_id) == nullptr)
    throw std::invalid_argument("smoothed_freq: class " + class_id +
                                " is not in the inventory");
  const ClassRecord* rec = entry.find(class_id);
  long m = rec ? rec->m : 0;
  return static_cast<double>(m + 1) /
         static_cast<double>(entry.classified_total() + inventory.size());
}

namespace {

const LexiconEntry& entry_or_uniform(const Lexicon& lexicon, const std::string& verb,
                                     LexiconEntry& scratch) {
  const LexiconEntry* entry = lexicon.find(verb);
  if (entry != nullptr) return *entry;
  scratch.verb = verb;
  scratch.n = 0;
  scratch.classes.clear();
  return scratch;
}

}  // namespace

std::vector<ScoredAnalysis> rerank(const std::vector<Analysis>& analyses,
                                   const Lexicon& lexicon, const ClassInventory& inventory,
                                   const Grammar& grammar, const RerankOptions& options) {
  std::vector<ScoredAnalysis> scored;
  scored.reserve(analyses.size());
  LexiconEntry scratch;
  for (const Analysis& analysis : analyses) {
    ScoredAnalysis sa;
    sa.analysis = analysis;
    sa.base = analysis.logp;
    double adjustment = 0.0;
    for (const ParseNode* leaf : leaves(analysis.root)) {
      if (!options.verb_tags.count(leaf->token.tag)) continue;
      std::string lemma = leaf->token.lemma.empty() ? leaf->token.surface : leaf->token.lemma;
      auto pattern = extract(analysis, grammar, lemma, leaf->token.index);
      std::optional<std::string> cls;
      if (pattern) cls = classify(*pattern, inventory);
      const LexiconEntry& entry = entry_or_uniform(lexicon, lemma, scratch);
      if (options.raw_counts) {
        const ClassRecord* rec = cls ? entry.find(*cls) : nullptr;
        adjustment += std::log(static_cast<double>((rec ? rec->m : 0) + 1));
      } else if (cls) {
        adjustment += std::log(smoothed_freq(entry, *cls, inventory));
      } else {
        // Unclassifiable frames draw the reserved unseen-class mass.
        adjustment += std::log(1.0 / static_cast<double>(entry.classified_total() +
                                                         inventory.size()));
      }
    }
    sa.adjustment = options.weight * adjustment;
    sa.combined = sa.base + sa.adjustment;
    scored.push_back(std::move(sa));
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredAnalysis& a, const ScoredAnalysis& b) {
                     return a.combined > b.combined;
                   });
  for (size_t i = 0; i < scored.size(); ++i)
    scored[i].analysis.rank = static_cast<int>(i) + 1;
  return scored;
}

}  // namespace subcat
