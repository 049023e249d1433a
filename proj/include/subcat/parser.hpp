#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "subcat/corpus.hpp"
#include "subcat/grammar.hpp"

namespace subcat {

struct ParseNode {
  std::string cat;                       // category; chosen tag for leaves
  const GrammarRule* rule = nullptr;     // null for leaves
  std::vector<std::shared_ptr<const ParseNode>> children;
  TaggedToken token;                     // valid when leaf() is true
  bool leaf() const { return rule == nullptr; }
};

using NodePtr = std::shared_ptr<const ParseNode>;

struct Analysis {
  NodePtr root;
  double logp = 0.0;
  int rank = 0;  // 1-based among the returned analyses
};

inline constexpr int kAllAnalyses = std::numeric_limits<int>::max();

// Bottom-up chart parse over the tag sequence (alternative tags included).
// Returns complete root-category derivations sorted by descending score,
// ties broken by the serialized tree. Out-of-coverage sentences yield an
// empty list. Unary chains are capped at three rules.
std::vector<Analysis> parse(const Sentence& sentence, const Grammar& grammar, int k = 10);

// Sum of rule log probabilities over the tree; the stored score must
// reproduce this.
double recompute_logp(const NodePtr& node);

// Leaves in sentence order.
std::vector<const ParseNode*> leaves(const NodePtr& root);

// Proportion of sentences with at least one analysis. Empty corpus is an
// error.
double coverage(const std::vector<Sentence>& corpus, const Grammar& grammar);

// Bracketed S-expression: "(CAT (VSUBCAT X) child...)" with lemma_TAG
// leaves.
std::string node_sexpr(const ParseNode& node);
std::string analysis_sexpr(const Analysis& analysis);

// Rebuilds an analysis from its S-expression, resolving each node to the
// unique grammar rule with that signature. Leaf indices are assigned in
// sentence order.
Analysis analysis_from_sexpr(const std::string& text, const Grammar& grammar);

// Line format used by the parse artifact: "sent<TAB>rank<TAB>logp<TAB>sexpr".
std::string format_analysis_line(int sentence_id, const Analysis& analysis);
struct AnalysisLine {
  int sentence_id;
  Analysis analysis;
};
AnalysisLine parse_analysis_line(const std::string& line, const Grammar& grammar);

}  // namespace subcat
