#include "subcat/parser.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "subcat/textio.hpp"

namespace subcat {

namespace {

constexpr int kMaxUnaryChain = 3;

struct Hyp {
  NodePtr node;
  double logp;
  int unary_depth;
  std::string sexpr;
};

bool hyp_before(const Hyp& a, const Hyp& b) {
  if (a.logp != b.logp) return a.logp > b.logp;
  return a.sexpr < b.sexpr;
}

using Cell = std::map<std::string, std::vector<Hyp>>;

bool tag_matches(const TaggedToken& tok, const std::string& terminal) {
  if (tok.tag == terminal) return true;
  for (const auto& alt : tok.alt_tags)
    if (alt == terminal) return true;
  return false;
}

NodePtr make_leaf(const TaggedToken& tok, const std::string& terminal) {
  auto node = std::make_shared<ParseNode>();
  node->cat = terminal;
  node->token = tok;
  node->token.tag = terminal;
  node->token.alt_tags.clear();
  return node;
}

std::string leaf_text(const TaggedToken& tok) {
  return (tok.lemma.empty() ? tok.surface : tok.lemma) + "_" + tok.tag;
}

class ChartParser {
 public:
  ChartParser(const Sentence& sentence, const Grammar& grammar, int k)
      : sent_(sentence), g_(grammar), k_(k), n_(static_cast<int>(sentence.size())) {
    cells_.resize(static_cast<size_t>(n_) * (n_ + 1));
  }

  std::vector<Analysis> run() {
    for (int len = 1; len <= n_; ++len)
      for (int i = 0; i + len <= n_; ++i) fill_span(i, i + len);
    std::vector<Analysis> out;
    const Cell& top = cell(0, n_);
    auto it = top.find(g_.root);
    if (it == top.end()) return out;
    for (const Hyp& hyp : it->second) {
      Analysis a;
      a.root = hyp.node;
      a.logp = hyp.logp;
      a.rank = static_cast<int>(out.size()) + 1;
      out.push_back(std::move(a));
    }
    return out;
  }

 private:
  Cell& cell(int i, int j) { return cells_[static_cast<size_t>(i) * (n_ + 1) + j]; }

  void fill_span(int i, int j) {
    std::vector<Hyp> base;
    for (const GrammarRule& rule : g_.rules) {
      if (rule.rhs.size() == 1 && !g_.is_terminal(rule.rhs[0])) continue;  // closure handles
      std::vector<NodePtr> children;
      expand(rule, 0, i, j, children, base);
    }
    Cell& here = cell(i, j);
    for (Hyp& hyp : base) here[hyp.node->cat].push_back(std::move(hyp));
    unary_closure(here);
    for (auto& [cat, hyps] : here) {
      std::sort(hyps.begin(), hyps.end(), hyp_before);
      if (k_ != kAllAnalyses && static_cast<int>(hyps.size()) > k_) hyps.resize(k_);
    }
  }

  // Assigns rule.rhs[pos..] to consecutive subspans of [start, j).
  void expand(const GrammarRule& rule, size_t pos, int start, int j,
              std::vector<NodePtr>& children, std::vector<Hyp>& out) {
    if (pos == rule.rhs.size()) {
      if (start == j) emit(rule, children, out);
      return;
    }
    const std::string& sym = rule.rhs[pos];
    size_t remaining = rule.rhs.size() - pos - 1;
    if (g_.is_terminal(sym)) {
      if (start >= j || !tag_matches(sent_[start], sym)) return;
      children.push_back(make_leaf(sent_[start], sym));
      expand(rule, pos + 1, start + 1, j, children, out);
      children.pop_back();
      return;
    }
    for (int mid = start + 1; mid + static_cast<int>(remaining) <= j; ++mid) {
      const Cell& sub = cell(start, mid);
      auto it = sub.find(sym);
      if (it == sub.end()) continue;
      for (const Hyp& hyp : it->second) {
        children.push_back(hyp.node);
        expand(rule, pos + 1, mid, j, children, out);
        children.pop_back();
      }
    }
  }

  void emit(const GrammarRule& rule, const std::vector<NodePtr>& children,
            std::vector<Hyp>& out) {
    auto node = std::make_shared<ParseNode>();
    node->cat = rule.lhs;
    node->rule = &rule;
    node->children = children;
    double logp = rule.logp;
    for (const NodePtr& child : children)
      if (!child->leaf()) logp += child_logp(child);
    Hyp hyp;
    hyp.logp = logp;
    hyp.unary_depth = 0;
    hyp.sexpr = node_sexpr(*node);
    hyp.node = std::move(node);
    out.push_back(std::move(hyp));
  }

  // Scores are additive over the tree, so a child's score can be read off
  // its stored hypothesis; recompute keeps construction single-pass.
  double child_logp(const NodePtr& node) {
    double logp = node->rule->logp;
    for (const NodePtr& child : node->children)
      if (!child->leaf()) logp += child_logp(child);
    return logp;
  }

  void unary_closure(Cell& here) {
    std::vector<Hyp> frontier;
    for (auto& [cat, hyps] : here)
      for (const Hyp& hyp : hyps) frontier.push_back(hyp);
    for (int depth = 0; depth < kMaxUnaryChain; ++depth) {
      std::vector<Hyp> next;
      for (const GrammarRule& rule : g_.rules) {
        if (rule.rhs.size() != 1 || g_.is_terminal(rule.rhs[0])) continue;
        for (const Hyp& hyp : frontier) {
          if (hyp.node->cat != rule.rhs[0] || hyp.unary_depth != depth) continue;
          auto node = std::make_shared<ParseNode>();
          node->cat = rule.lhs;
          node->rule = &rule;
          node->children = {hyp.node};
          Hyp up;
          up.logp = rule.logp + hyp.logp;
          up.unary_depth = depth + 1;
          up.sexpr = node_sexpr(*node);
          up.node = std::move(node);
          next.push_back(std::move(up));
        }
      }
      for (Hyp& hyp : next) here[hyp.node->cat].push_back(hyp);
      frontier = std::move(next);
      if (frontier.empty()) break;
    }
  }

  const Sentence& sent_;
  const Grammar& g_;
  int k_;
  int n_;
  std::vector<Cell> cells_;
};

}  // namespace

std::vector<Analysis> parse(const Sentence& sentence, const Grammar& grammar, int k) {
  if (k < 1) throw std::invalid_argument("parse: k must be >= 1");
  if (sentence.empty()) return {};
  return ChartParser(sentence, grammar, k).run();
}

double recompute_logp(const NodePtr& node) {
  if (!node || node->leaf()) return 0.0;
  double logp = node->rule->logp;
  for (const NodePtr& child : node->children) logp += recompute_logp(child);
  return logp;
}

std::vector<const ParseNode*> leaves(const NodePtr& root) {
  std::vector<const ParseNode*> out;
  std::vector<const ParseNode*> stack{root.get()};
  while (!stack.empty()) {
    const ParseNode* node = stack.back();
    stack.pop_back();
    if (node->leaf()) {
      out.push_back(node);
      continue;
    }
    for (auto it = node->children.rbegin(); it != node->children.rend(); ++it)
      stack.push_back(it->get());
  }
  return out;
}

double coverage(const std::vector<Sentence>& corpus, const Grammar& grammar) {
  if (corpus.empty()) throw std::runtime_error("coverage: empty corpus");
  size_t covered = 0;
  for (const Sentence& sent : corpus)
    if (!parse(sent, grammar, 1).empty()) ++covered;
  return static_cast<double>(covered) / static_cast<double>(corpus.size());
}

std::string node_sexpr(const ParseNode& node) {
  if (node.leaf()) return leaf_text(node.token);
  std::string out = "(" + node.cat;
  if (node.rule != nullptr && !node.rule->vsubcat.empty())
    out += " (VSUBCAT " + node.rule->vsubcat + ")";
  if (node.rule != nullptr && !node.rule->psubcat.empty())
    out += " (PSUBCAT " + node.rule->psubcat + ")";
  for (const NodePtr& child : node.children) {
    out += ' ';
    out += node_sexpr(*child);
  }
  out += ')';
  return out;
}

std::string analysis_sexpr(const Analysis& analysis) { return node_sexpr(*analysis.root); }

namespace {

struct SexprNode {
  bool atom = false;
  std::string text;
  std::vector<SexprNode> items;
};

std::vector<std::string> sexpr_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '(' || c == ')') {
      if (!cur.empty()) { out.push_back(cur); cur.clear(); }
      out.push_back(std::string(1, c));
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) { out.push_back(cur); cur.clear(); }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

SexprNode read_sexpr(const std::vector<std::string>& toks, size_t& pos) {
  if (pos >= toks.size()) throw std::runtime_error("sexpr: unexpected end of input");
  if (toks[pos] == "(") {
    ++pos;
    SexprNode node;
    while (pos < toks.size() && toks[pos] != ")") node.items.push_back(read_sexpr(toks, pos));
    if (pos >= toks.size()) throw std::runtime_error("sexpr: missing ')'");
    ++pos;
    return node;
  }
  if (toks[pos] == ")") throw std::runtime_error("sexpr: unexpected ')'");
  SexprNode node;
  node.atom = true;
  node.text = toks[pos++];
  return node;
}

NodePtr build_node(const SexprNode& se, const Grammar& g, int& next_index) {
  if (se.atom) {
    size_t us = se.text.rfind('_');
    if (us == std::string::npos || us == 0 || us + 1 >= se.text.size())
      throw std::runtime_error("sexpr: malformed leaf '" + se.text + "'");
    auto node = std::make_shared<ParseNode>();
    node->token.lemma = se.text.substr(0, us);
    node->token.surface = node->token.lemma;
    node->token.tag = se.text.substr(us + 1);
    node->token.index = next_index++;
    node->cat = node->token.tag;
    return node;
  }
  if (se.items.empty() || !se.items[0].atom)
    throw std::runtime_error("sexpr: node without category");
  std::string cat = se.items[0].text;
  std::string vsubcat, psubcat;
  std::vector<NodePtr> children;
  for (size_t i = 1; i < se.items.size(); ++i) {
    const SexprNode& item = se.items[i];
    bool feature = !item.atom && item.items.size() == 2 && item.items[0].atom &&
                   item.items[1].atom &&
                   (item.items[0].text == "VSUBCAT" || item.items[0].text == "PSUBCAT");
    if (feature) {
      if (item.items[0].text == "VSUBCAT") vsubcat = item.items[1].text;
      else psubcat = item.items[1].text;
      continue;
    }
    children.push_back(build_node(item, g, next_index));
  }
  if (children.empty()) throw std::runtime_error("sexpr: node '" + cat + "' without children");

  std::vector<std::string> rhs;
  for (const NodePtr& child : children) rhs.push_back(child->cat);
  const GrammarRule* rule = nullptr;
  if (const auto* ids = g.lhs_rules(cat)) {
    for (int id : *ids)
      if (g.rules[id].rhs == rhs) { rule = &g.rules[id]; break; }
  }
  if (rule == nullptr)
    throw std::runtime_error("sexpr: no grammar rule " + cat + " -> " + join(rhs, " "));
  if (rule->vsubcat != vsubcat || rule->psubcat != psubcat)
    throw std::runtime_error("sexpr: feature mismatch on " + cat + " -> " + join(rhs, " "));
  auto node = std::make_shared<ParseNode>();
  node->cat = cat;
  node->rule = rule;
  node->children = std::move(children);
  return node;
}

}  // namespace

Analysis analysis_from_sexpr(const std::string& text, const Grammar& grammar) {
  auto toks = sexpr_tokens(text);
  size_t pos = 0;
  SexprNode se = read_sexpr(toks, pos);
  if (pos != toks.size()) throw std::runtime_error("sexpr: trailing input");
  int next_index = 0;
  Analysis a;
  a.root = build_node(se, grammar, next_index);
  a.logp = recompute_logp(a.root);
  return a;
}

std::string format_analysis_line(int sentence_id, const Analysis& analysis) {
  return std::to_string(sentence_id) + "\t" + std::to_string(analysis.rank) + "\t" +
         g17(analysis.logp) + "\t" + analysis_sexpr(analysis);
}

AnalysisLine parse_analysis_line(const std::string& line, const Grammar& grammar) {
  auto fields = split(line, '\t');
  if (fields.size() != 4) throw std::runtime_error("analysis line: expected 4 tab fields");
  auto sent = parse_long(fields[0]);
  auto rank = parse_long(fields[1]);
  auto logp = parse_double(fields[2]);
  if (!sent || !rank || !logp) throw std::runtime_error("analysis line: bad header fields");
  AnalysisLine out;
  out.sentence_id = static_cast<int>(*sent);
  out.analysis = analysis_from_sexpr(fields[3], grammar);
  out.analysis.rank = static_cast<int>(*rank);
  if (std::fabs(out.analysis.logp - *logp) > 1e-9)
    throw std::runtime_error("analysis line: stored score disagrees with tree");
  out.analysis.logp = *logp;
  return out;
}

}  // namespace subcat
