#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "subcat/grammar.hpp"
#include "subcat/parser.hpp"

namespace subcat {

struct HeadRef {
  std::string lemma;
  std::string tag;
  int index = -1;  // sentence position, keeps repeated lemmas distinct
};

struct PPRecord {
  std::string psubcat;
  std::string prep;
  std::vector<HeadRef> complement_heads;
};

struct PatternSlot {
  std::string cat;
  std::optional<HeadRef> head;  // non-PP slots
  std::optional<PPRecord> pp;   // present iff cat is the PP category
};

struct Pattern {
  std::string predicate;
  int predicate_index = -1;
  std::string vsubcat;
  std::optional<HeadRef> subject;
  std::vector<PatternSlot> slots;
  bool passive = false;
};

// Per-sentence record for one predicate instance: the pattern from the
// highest-ranked parse that produced one, plus the candidates from other
// ranks.
struct Patternset {
  std::string predicate;
  int sentence_id = -1;
  int predicate_index = -1;
  Pattern selected;
  int selected_rank = 0;
  std::vector<std::pair<int, Pattern>> candidates;  // (source rank, pattern)
};

struct PassiveInfo {
  bool passive = false;
  std::optional<HeadRef> agent;  // complement head of an agentive by-PP
};

// True when the predicate is a passive participle immediately governed by
// a VP headed by an auxiliary lemma (be/get by default).
PassiveInfo detect_passive(const Analysis& analysis, const Grammar& grammar,
                           int predicate_index);

// Argument-marked sisters within the predicate's VP plus the preceding
// subject; adjunct-attached material is excluded. Passive instances have
// the surface subject remapped to the first object slot. Returns nothing
// when the predicate has no VP with a VSUBCAT value.
std::optional<Pattern> extract(const Analysis& analysis, const Grammar& grammar,
                               const std::string& predicate_lemma, int predicate_index);

// Groups patternsets by predicate lemma. Each (sentence, instance) that
// produced a pattern in some analysis yields one patternset whose selected
// pattern comes from the best such rank. An empty predicate list means
// every instance with a tag in verb_tags.
std::map<std::string, std::vector<Patternset>> build_patternsets(
    const std::vector<std::vector<Analysis>>& ranked_analyses, const Grammar& grammar,
    const std::set<std::string>& verb_tags, const std::vector<std::string>& predicates = {});

std::string pattern_sexpr(const Pattern& pattern);
std::string patternset_sexpr(const Patternset& ps);
Patternset patternset_from_sexpr(const std::string& text);

}  // namespace subcat
