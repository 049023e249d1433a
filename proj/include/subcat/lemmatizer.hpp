#pragma once

#include <map>
#include <string>
#include <vector>

#include "subcat/corpus.hpp"

namespace subcat {

// Ordered suffix rewrite conditioned on a tag prefix. A replacement equal
// to the suffix acts as a keep rule (stops later rules from firing).
struct LemmaRule {
  std::string tag_prefix;
  std::string suffix;
  std::string replacement;
};

struct LemmaRuleset {
  std::vector<LemmaRule> rules;  // first match wins
  std::map<std::pair<std::string, std::string>, std::string> exceptions;  // (surface,tag) -> lemma
};

// Format, one entry per line ("#" comments):
//   EXC surface TAG lemma
//   RULE TAGPREFIX suffix replacement   ("-" denotes the empty string)
LemmaRuleset load_lemma_rules(const std::string& text);

// Lowercases the surface, looks up exceptions, then applies the first
// matching rule; falls back to the lowercased surface itself.
std::string lemma_of(const std::string& surface, const std::string& tag,
                     const LemmaRuleset& rules);

TaggedToken lemmatize(const TaggedToken& token, const LemmaRuleset& rules);
void lemmatize_sentence(Sentence& sentence, const LemmaRuleset& rules);

}  // namespace subcat
