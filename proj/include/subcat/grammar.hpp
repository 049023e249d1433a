#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace subcat {

// Per-slot role of a rule's right-hand side. Head marks the lexical head
// child (exactly one per rule); Arg marks complements, Adj adjuncts, and
// Other covers specifiers and punctuation.
enum class SlotMark { Head, Arg, Adj, Other };

struct GrammarRule {
  std::string lhs;
  std::vector<std::string> rhs;
  double prob = 0.0;
  double logp = 0.0;
  std::string vsubcat;  // VP rules only; empty when absent
  std::string psubcat;  // PP rules only; empty when absent
  std::vector<SlotMark> slots;
  int id = 0;  // position in the grammar file
};

// Probabilistic context-free shallow grammar. Terminals are the symbols
// that never occur on a left-hand side (the tag alphabet). Immutable
// after loading.
struct Grammar {
  std::vector<GrammarRule> rules;
  std::string root = "S";
  std::string vp_category = "VP";
  std::string pp_category = "PP";
  std::set<std::string> vsubcat_values;
  std::set<std::string> psubcat_values;
  std::vector<std::string> aux_lemmas = {"be", "get"};
  std::set<std::string> participle_tags = {"VVN"};
  std::string agent_prep = "by";
  std::set<std::string> terminals;
  std::map<std::string, std::vector<int>> rules_by_lhs;

  bool is_terminal(const std::string& symbol) const {
    return terminals.count(symbol) > 0;
  }
  const std::vector<int>* lhs_rules(const std::string& cat) const {
    auto it = rules_by_lhs.find(cat);
    return it == rules_by_lhs.end() ? nullptr : &it->second;
  }
};

// One rule per line:
//   LHS -> RHS... : prob [VSUBCAT=v] [PSUBCAT=p] [slots=head,arg,adj,x...]
// plus "%" directives (%root, %vp, %pp, %vsubcat, %psubcat, %aux,
// %agent-prep). Unary rules default to slots=head. Validation errors name
// the offending category or value.
Grammar load_grammar(const std::string& text);

}  // namespace subcat
