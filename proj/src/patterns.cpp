#include "subcat/patterns.hpp"

#include <algorithm>
#include <stdexcept>

#include "subcat/textio.hpp"

namespace subcat {

namespace {

// Root-to-leaf chain of nodes; path[k+1] is a child of path[k].
std::vector<const ParseNode*> path_to_leaf(const ParseNode* node, int index,
                                           std::vector<const ParseNode*>& path) {
  path.push_back(node);
  if (node->leaf()) {
    if (node->token.index == index) return path;
    path.pop_back();
    return {};
  }
  for (const NodePtr& child : node->children) {
    auto found = path_to_leaf(child.get(), index, path);
    if (!found.empty()) return found;
  }
  path.pop_back();
  return {};
}

int child_position(const ParseNode* parent, const ParseNode* child) {
  for (size_t i = 0; i < parent->children.size(); ++i)
    if (parent->children[i].get() == child) return static_cast<int>(i);
  return -1;
}

std::string leaf_lemma(const ParseNode* leaf) {
  return leaf->token.lemma.empty() ? leaf->token.surface : leaf->token.lemma;
}

// Follows head-marked children down to the lexical head token.
const ParseNode* head_leaf(const ParseNode* node) {
  while (!node->leaf()) {
    const ParseNode* next = nullptr;
    for (size_t i = 0; i < node->children.size(); ++i)
      if (node->rule->slots[i] == SlotMark::Head) next = node->children[i].get();
    if (next == nullptr) return nullptr;
    node = next;
  }
  return node;
}

HeadRef head_ref(const ParseNode* leaf) {
  return HeadRef{leaf_lemma(leaf), leaf->token.tag, leaf->token.index};
}

PatternSlot make_slot(const ParseNode* constituent, const Grammar& g) {
  PatternSlot slot;
  slot.cat = constituent->cat;
  if (constituent->cat == g.pp_category && !constituent->leaf()) {
    PPRecord pp;
    pp.psubcat = constituent->rule->psubcat.empty() ? "NONE" : constituent->rule->psubcat;
    const ParseNode* prep = head_leaf(constituent);
    if (prep != nullptr) pp.prep = leaf_lemma(prep);
    for (size_t i = 0; i < constituent->children.size(); ++i) {
      if (constituent->rule->slots[i] != SlotMark::Arg) continue;
      const ParseNode* comp = head_leaf(constituent->children[i].get());
      if (comp != nullptr) pp.complement_heads.push_back(head_ref(comp));
    }
    slot.pp = std::move(pp);
  } else {
    const ParseNode* head = head_leaf(constituent);
    if (head != nullptr) slot.head = head_ref(head);
  }
  return slot;
}

struct PredicateContext {
  std::vector<const ParseNode*> path;  // root .. leaf
  const ParseNode* vp = nullptr;       // node whose rule carries VSUBCAT
  size_t vp_pos = 0;                   // index of vp within path
};

// Climbs the head projection from the predicate leaf to the VP rule that
// carries its VSUBCAT value.
std::optional<PredicateContext> locate_vp(const Analysis& analysis, int predicate_index) {
  PredicateContext ctx;
  std::vector<const ParseNode*> scratch;
  ctx.path = path_to_leaf(analysis.root.get(), predicate_index, scratch);
  if (ctx.path.empty())
    throw std::out_of_range("extract: predicate index " + std::to_string(predicate_index) +
                            " not in analysis");
  for (size_t k = ctx.path.size() - 1; k-- > 0;) {
    const ParseNode* parent = ctx.path[k];
    const ParseNode* child = ctx.path[k + 1];
    int pos = child_position(parent, child);
    if (parent->rule->slots[pos] != SlotMark::Head) return std::nullopt;
    if (!parent->rule->vsubcat.empty()) {
      ctx.vp = parent;
      ctx.vp_pos = k;
      return ctx;
    }
  }
  return std::nullopt;
}

// Climbs from the VP through same-category projections (adjunction and
// auxiliary layers) and returns the nearest argument sister preceding the
// projection in its clause.
const ParseNode* surface_subject(const PredicateContext& ctx, const Grammar& g) {
  size_t k = ctx.vp_pos;
  while (k > 0 && ctx.path[k - 1]->cat == g.vp_category) --k;
  if (k == 0) return nullptr;
  const ParseNode* clause = ctx.path[k - 1];
  int pos = child_position(clause, ctx.path[k]);
  for (int i = pos - 1; i >= 0; --i)
    if (clause->rule->slots[i] == SlotMark::Arg) return clause->children[i].get();
  return nullptr;
}

bool is_aux_lemma(const std::string& lemma, const Grammar& g) {
  return std::find(g.aux_lemmas.begin(), g.aux_lemmas.end(), lemma) != g.aux_lemmas.end();
}

std::string joined_vsubcat(const std::vector<PatternSlot>& slots) {
  if (slots.empty()) return "NONE";
  std::vector<std::string> cats;
  for (const PatternSlot& slot : slots) cats.push_back(slot.cat);
  return join(cats, "_");
}

}  // namespace

PassiveInfo detect_passive(const Analysis& analysis, const Grammar& grammar,
                           int predicate_index) {
  PassiveInfo info;
  auto ctx = locate_vp(analysis, predicate_index);
  if (!ctx) return info;
  const ParseNode* leaf = ctx->path.back();
  if (!grammar.participle_tags.count(leaf->token.tag)) return info;
  if (ctx->vp_pos == 0) return info;
  const ParseNode* governor = ctx->path[ctx->vp_pos - 1];
  if (governor->cat != grammar.vp_category) return info;
  int pos = child_position(governor, ctx->vp);
  if (governor->rule->slots[pos] != SlotMark::Arg) return info;
  const ParseNode* aux = head_leaf(governor);
  if (aux == nullptr || !is_aux_lemma(leaf_lemma(aux), grammar)) return info;
  info.passive = true;
  for (size_t i = 0; i < ctx->vp->children.size(); ++i) {
    if (ctx->vp->rule->slots[i] != SlotMark::Arg) continue;
    PatternSlot slot = make_slot(ctx->vp->children[i].get(), grammar);
    if (slot.pp && to_lower(slot.pp->prep) == grammar.agent_prep &&
        !slot.pp->complement_heads.empty()) {
      info.agent = slot.pp->complement_heads.front();
      break;
    }
  }
  return info;
}

std::optional<Pattern> extract(const Analysis& analysis, const Grammar& grammar,
                               const std::string& predicate_lemma, int predicate_index) {
  auto ctx = locate_vp(analysis, predicate_index);
  if (!ctx) {
    // Still validate the index so the error contract holds.
    std::vector<const ParseNode*> scratch;
    if (path_to_leaf(analysis.root.get(), predicate_index, scratch).empty())
      throw std::out_of_range("extract: predicate index " + std::to_string(predicate_index) +
                              " not in analysis");
    return std::nullopt;
  }
  const ParseNode* leaf = ctx->path.back();
  if (leaf_lemma(leaf) != predicate_lemma)
    throw std::invalid_argument("extract: token at index " + std::to_string(predicate_index) +
                                " is '" + leaf_lemma(leaf) + "', not '" + predicate_lemma + "'");

  Pattern pat;
  pat.predicate = predicate_lemma;
  pat.predicate_index = predicate_index;
  pat.vsubcat = ctx->vp->rule->vsubcat;
  for (size_t i = 0; i < ctx->vp->children.size(); ++i) {
    if (ctx->vp->rule->slots[i] != SlotMark::Arg) continue;
    pat.slots.push_back(make_slot(ctx->vp->children[i].get(), grammar));
  }
  const ParseNode* subj = surface_subject(*ctx, grammar);
  std::optional<PatternSlot> subject_slot;
  if (subj != nullptr) {
    subject_slot = make_slot(subj, grammar);
    const ParseNode* head = head_leaf(subj);
    if (head != nullptr) pat.subject = head_ref(head);
  }

  PassiveInfo passive = detect_passive(analysis, grammar, predicate_index);
  if (passive.passive) {
    pat.passive = true;
    std::vector<PatternSlot> remapped;
    if (subject_slot) remapped.push_back(*subject_slot);  // deep object
    for (PatternSlot& slot : pat.slots) {
      bool agentive = slot.pp && to_lower(slot.pp->prep) == grammar.agent_prep;
      if (!agentive) remapped.push_back(std::move(slot));
    }
    pat.slots = std::move(remapped);
    pat.vsubcat = joined_vsubcat(pat.slots);
    pat.subject = passive.agent;  // deep subject when an agentive PP exists
  }
  return pat;
}

std::map<std::string, std::vector<Patternset>> build_patternsets(
    const std::vector<std::vector<Analysis>>& ranked_analyses, const Grammar& grammar,
    const std::set<std::string>& verb_tags, const std::vector<std::string>& predicates) {
  std::map<std::string, std::vector<Patternset>> grouped;
  for (size_t sid = 0; sid < ranked_analyses.size(); ++sid) {
    const auto& analyses = ranked_analyses[sid];
    if (analyses.empty()) continue;  // only successful parses contribute

    // Predicate instances are identified by token index; the lemma is
    // stable across analyses of one sentence.
    std::map<int, std::string> instances;
    for (const Analysis& a : analyses) {
      for (const ParseNode* leaf : leaves(a.root)) {
        if (!verb_tags.count(leaf->token.tag)) continue;
        std::string lemma = leaf_lemma(leaf);
        if (!predicates.empty() &&
            std::find(predicates.begin(), predicates.end(), lemma) == predicates.end())
          continue;
        instances.emplace(leaf->token.index, lemma);
      }
    }
    for (const auto& [index, lemma] : instances) {
      Patternset ps;
      ps.predicate = lemma;
      ps.sentence_id = static_cast<int>(sid);
      ps.predicate_index = index;
      for (const Analysis& a : analyses) {
        auto pat = extract(a, grammar, lemma, index);
        if (pat) ps.candidates.emplace_back(a.rank, *pat);
      }
      if (ps.candidates.empty()) continue;
      ps.selected = ps.candidates.front().second;
      ps.selected_rank = ps.candidates.front().first;
      grouped[lemma].push_back(std::move(ps));
    }
  }
  return grouped;
}

namespace {

std::string head_sexpr(const HeadRef& head) {
  std::string out = "(" + head.lemma + ":" + std::to_string(head.index);
  if (!head.tag.empty()) out += " " + head.tag;
  return out + ")";
}

HeadRef head_from_items(const std::string& token, const std::string& tag) {
  size_t colon = token.rfind(':');
  if (colon == std::string::npos)
    throw std::runtime_error("patternset: malformed head token '" + token + "'");
  auto index = parse_long(token.substr(colon + 1));
  if (!index) throw std::runtime_error("patternset: bad head index in '" + token + "'");
  return HeadRef{token.substr(0, colon), tag, static_cast<int>(*index)};
}

}  // namespace

std::string pattern_sexpr(const Pattern& pattern) {
  std::string out = "(pattern (VSUBCAT " + pattern.vsubcat + ") (pred " +
                    head_sexpr(HeadRef{pattern.predicate, "", pattern.predicate_index});
  out += ")";
  if (pattern.passive) out += " (passive)";
  if (pattern.subject) out += " (subj " + head_sexpr(*pattern.subject) + ")";
  for (const PatternSlot& slot : pattern.slots) {
    out += " (slot " + slot.cat;
    if (slot.pp) {
      out += " (PSUBCAT " + slot.pp->psubcat + ") (prep " + slot.pp->prep + ")";
      out += " (comp";
      for (const HeadRef& head : slot.pp->complement_heads) out += " " + head_sexpr(head);
      out += ")";
    } else if (slot.head) {
      out += " " + head_sexpr(*slot.head);
    }
    out += ")";
  }
  out += ")";
  return out;
}

std::string patternset_sexpr(const Patternset& ps) {
  std::string out = "(patternset " + std::to_string(ps.sentence_id) + " " + ps.predicate +
                    " " + std::to_string(ps.predicate_index);
  for (const auto& [rank, pattern] : ps.candidates)
    out += " (rank " + std::to_string(rank) + " " + pattern_sexpr(pattern) + ")";
  out += ")";
  return out;
}

namespace {

struct Reader {
  std::vector<std::string> toks;
  size_t pos = 0;

  std::string next() {
    if (pos >= toks.size()) throw std::runtime_error("patternset: truncated input");
    return toks[pos++];
  }
  std::string peek() const {
    if (pos >= toks.size()) throw std::runtime_error("patternset: truncated input");
    return toks[pos];
  }
  void expect(const std::string& tok) {
    std::string got = next();
    if (got != tok)
      throw std::runtime_error("patternset: expected '" + tok + "', got '" + got + "'");
  }
};

std::vector<std::string> tokens_of(const std::string& text) {
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

HeadRef read_head(Reader& r) {
  r.expect("(");
  std::string token = r.next();
  std::string tag = r.peek() == ")" ? "" : r.next();
  r.expect(")");
  return head_from_items(token, tag);
}

Pattern read_pattern(Reader& r) {
  Pattern pat;
  r.expect("(");
  r.expect("pattern");
  r.expect("(");
  r.expect("VSUBCAT");
  pat.vsubcat = r.next();
  r.expect(")");
  r.expect("(");
  r.expect("pred");
  HeadRef pred = read_head(r);
  pat.predicate = pred.lemma;
  pat.predicate_index = pred.index;
  r.expect(")");
  while (r.peek() == "(") {
    r.next();
    std::string kind = r.next();
    if (kind == "passive") {
      pat.passive = true;
      r.expect(")");
    } else if (kind == "subj") {
      pat.subject = read_head(r);
      r.expect(")");
    } else if (kind == "slot") {
      PatternSlot slot;
      slot.cat = r.next();
      if (r.peek() == "(") {
        Reader probe = r;
        probe.next();
        std::string tag = probe.next();
        if (tag == "PSUBCAT") {
          PPRecord pp;
          r.expect("(");
          r.expect("PSUBCAT");
          pp.psubcat = r.next();
          r.expect(")");
          r.expect("(");
          r.expect("prep");
          pp.prep = r.next();
          r.expect(")");
          r.expect("(");
          r.expect("comp");
          while (r.peek() == "(") pp.complement_heads.push_back(read_head(r));
          r.expect(")");
          slot.pp = std::move(pp);
        } else {
          slot.head = read_head(r);
        }
      }
      r.expect(")");
      pat.slots.push_back(std::move(slot));
    } else {
      throw std::runtime_error("patternset: unknown pattern element '" + kind + "'");
    }
  }
  r.expect(")");
  return pat;
}

}  // namespace

Patternset patternset_from_sexpr(const std::string& text) {
  Reader r{tokens_of(text)};
  Patternset ps;
  r.expect("(");
  r.expect("patternset");
  auto sid = parse_long(r.next());
  if (!sid) throw std::runtime_error("patternset: bad sentence id");
  ps.sentence_id = static_cast<int>(*sid);
  ps.predicate = r.next();
  auto pidx = parse_long(r.next());
  if (!pidx) throw std::runtime_error("patternset: bad predicate index");
  ps.predicate_index = static_cast<int>(*pidx);
  while (r.peek() == "(") {
    r.next();
    r.expect("rank");
    auto rank = parse_long(r.next());
    if (!rank) throw std::runtime_error("patternset: bad rank");
    if (!ps.candidates.empty() && *rank <= ps.candidates.back().first)
      throw std::runtime_error("patternset: candidate ranks out of order");
    Pattern pat = read_pattern(r);
    ps.candidates.emplace_back(static_cast<int>(*rank), std::move(pat));
    r.expect(")");
  }
  r.expect(")");
  if (ps.candidates.empty()) throw std::runtime_error("patternset: no patterns");
  ps.selected = ps.candidates.front().second;
  ps.selected_rank = ps.candidates.front().first;
  return ps;
}

}  // namespace subcat
