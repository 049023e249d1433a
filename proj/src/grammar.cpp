#include "subcat/grammar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subcat/textio.hpp"

namespace subcat {

namespace {

SlotMark parse_slot_mark(const std::string& s, int line) {
  if (s == "head") return SlotMark::Head;
  if (s == "arg") return SlotMark::Arg;
  if (s == "adj") return SlotMark::Adj;
  if (s == "x") return SlotMark::Other;
  throw std::runtime_error("grammar: bad slot mark '" + s + "' at line " + std::to_string(line));
}

void apply_directive(Grammar& g, const std::vector<std::string>& fields, int line) {
  const std::string& key = fields[0];
  auto need = [&](size_t n) {
    if (fields.size() < n)
      throw std::runtime_error("grammar: directive " + key + " needs a value (line " +
                               std::to_string(line) + ")");
  };
  if (key == "%root") {
    need(2);
    g.root = fields[1];
  } else if (key == "%vp") {
    need(2);
    g.vp_category = fields[1];
  } else if (key == "%pp") {
    need(2);
    g.pp_category = fields[1];
  } else if (key == "%vsubcat") {
    need(2);
    g.vsubcat_values.insert(fields.begin() + 1, fields.end());
  } else if (key == "%psubcat") {
    need(2);
    g.psubcat_values.insert(fields.begin() + 1, fields.end());
  } else if (key == "%aux") {
    need(2);
    g.aux_lemmas.assign(fields.begin() + 1, fields.end());
  } else if (key == "%participle") {
    need(2);
    g.participle_tags.clear();
    g.participle_tags.insert(fields.begin() + 1, fields.end());
  } else if (key == "%agent-prep") {
    need(2);
    g.agent_prep = fields[1];
  } else {
    throw std::runtime_error("grammar: unknown directive " + key + " (line " +
                             std::to_string(line) + ")");
  }
}

GrammarRule parse_rule(Grammar& g, const std::vector<std::string>& fields, int line) {
  GrammarRule rule;
  size_t i = 0;
  rule.lhs = fields[i++];
  if (i >= fields.size() || fields[i] != "->")
    throw std::runtime_error("grammar: expected '->' at line " + std::to_string(line));
  ++i;
  while (i < fields.size() && fields[i] != ":") rule.rhs.push_back(fields[i++]);
  if (rule.rhs.empty())
    throw std::runtime_error("grammar: empty right-hand side at line " + std::to_string(line));
  if (i >= fields.size() || fields[i] != ":")
    throw std::runtime_error("grammar: expected ': prob' at line " + std::to_string(line));
  ++i;
  if (i >= fields.size())
    throw std::runtime_error("grammar: missing probability at line " + std::to_string(line));
  auto prob = parse_double(fields[i++]);
  if (!prob || !(*prob > 0.0) || *prob > 1.0)
    throw std::runtime_error("grammar: probability must be in (0,1] at line " +
                             std::to_string(line));
  rule.prob = *prob;
  rule.logp = std::log(rule.prob);

  bool have_slots = false;
  for (; i < fields.size(); ++i) {
    const std::string& f = fields[i];
    if (f.rfind("VSUBCAT=", 0) == 0) {
      rule.vsubcat = f.substr(8);
      if (rule.lhs != g.vp_category)
        throw std::runtime_error("grammar: VSUBCAT on non-" + g.vp_category + " rule '" +
                                 rule.lhs + "' at line " + std::to_string(line));
      if (!g.vsubcat_values.count(rule.vsubcat))
        throw std::runtime_error("grammar: unknown VSUBCAT value '" + rule.vsubcat +
                                 "' at line " + std::to_string(line));
    } else if (f.rfind("PSUBCAT=", 0) == 0) {
      rule.psubcat = f.substr(8);
      if (rule.lhs != g.pp_category)
        throw std::runtime_error("grammar: PSUBCAT on non-" + g.pp_category + " rule '" +
                                 rule.lhs + "' at line " + std::to_string(line));
      if (!g.psubcat_values.count(rule.psubcat))
        throw std::runtime_error("grammar: unknown PSUBCAT value '" + rule.psubcat +
                                 "' at line " + std::to_string(line));
    } else if (f.rfind("slots=", 0) == 0) {
      for (const std::string& mark : split(f.substr(6), ','))
        rule.slots.push_back(parse_slot_mark(mark, line));
      have_slots = true;
    } else {
      throw std::runtime_error("grammar: unexpected field '" + f + "' at line " +
                               std::to_string(line));
    }
  }
  if (!have_slots) {
    if (rule.rhs.size() != 1)
      throw std::runtime_error("grammar: rule with " + std::to_string(rule.rhs.size()) +
                               " children needs slots= at line " + std::to_string(line));
    rule.slots = {SlotMark::Head};
  }
  if (rule.slots.size() != rule.rhs.size())
    throw std::runtime_error("grammar: slots count differs from rhs at line " +
                             std::to_string(line));
  int heads = static_cast<int>(std::count(rule.slots.begin(), rule.slots.end(), SlotMark::Head));
  if (heads != 1)
    throw std::runtime_error("grammar: rule must have exactly one head slot at line " +
                             std::to_string(line));
  return rule;
}

}  // namespace

Grammar load_grammar(const std::string& text) {
  Grammar g;
  for (const auto& line : config_lines(text)) {
    auto fields = split_ws(line.text);
    if (fields[0][0] == '%') {
      apply_directive(g, fields, line.number);
      continue;
    }
    GrammarRule rule = parse_rule(g, fields, line.number);
    rule.id = static_cast<int>(g.rules.size());
    g.rules.push_back(std::move(rule));
  }
  if (g.rules.empty()) throw std::runtime_error("grammar: no rules");

  std::set<std::string> lhs_set;
  std::set<std::string> signatures;
  for (const GrammarRule& rule : g.rules) {
    lhs_set.insert(rule.lhs);
    std::string sig = rule.lhs + " -> " + join(rule.rhs, " ");
    if (!signatures.insert(sig).second)
      throw std::runtime_error("grammar: duplicate rule " + sig);
  }
  for (const GrammarRule& rule : g.rules)
    for (const std::string& sym : rule.rhs)
      if (!lhs_set.count(sym)) g.terminals.insert(sym);
  for (const GrammarRule& rule : g.rules) g.rules_by_lhs[rule.lhs].push_back(rule.id);

  for (const auto& [lhs, ids] : g.rules_by_lhs) {
    double sum = 0.0;
    for (int id : ids) sum += g.rules[id].prob;
    if (std::fabs(sum - 1.0) > 1e-6)
      throw std::runtime_error("grammar: probabilities for " + lhs + " sum to " +
                               g17(sum) + ", expected 1");
  }
  if (!g.rules_by_lhs.count(g.root))
    throw std::runtime_error("grammar: no rules for root category " + g.root);
  return g;
}

}  // namespace subcat
