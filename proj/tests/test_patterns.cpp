#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subcat/classify.hpp"
#include "subcat/corpus.hpp"
#include "subcat/grammar.hpp"
#include "subcat/lemmatizer.hpp"
#include "subcat/parser.hpp"
#include "subcat/patterns.hpp"
#include "subcat/textio.hpp"

using namespace subcat;

namespace {

std::string data_path(const std::string& name) {
  return std::string(SUBCAT_DATA_DIR) + "/" + name;
}

const Grammar& shipped_grammar() {
  static Grammar g = load_grammar(read_file(data_path("grammar.pcfg")));
  return g;
}

const ClassInventory& shipped_inventory() {
  static ClassInventory inv = load_inventory(read_file(data_path("classes.inv")));
  return inv;
}

const Tagset& shipped_tagset() {
  static Tagset ts = load_tagset(read_file(data_path("tagset.conf")));
  return ts;
}

Analysis top_parse(const std::string& lemma_line) {
  auto corpus = parse_lemma_corpus(lemma_line + "\n");
  auto analyses = parse(corpus[0], shipped_grammar(), 10);
  REQUIRE(!analyses.empty());
  return analyses[0];
}

Analysis from_sexpr(const std::string& text) {
  return analysis_from_sexpr(text, shipped_grammar());
}

const std::string kAttributeSentence =
    "he_PPHS1 attribute_VVD his_APP$ failure_NN1 ,_, he_PPHS1 say_VVD ,_, "
    "to_II no<blank>one_PN buy_VVG his_APP$ book_NN2";

}  // namespace

TEST_CASE("extract recovers the attribute patternset") {
  Analysis analysis = top_parse(kAttributeSentence);
  auto pattern = extract(analysis, shipped_grammar(), "attribute", 1);
  REQUIRE(pattern.has_value());
  CHECK(pattern->vsubcat == "NP_PP");
  CHECK(!pattern->passive);
  REQUIRE(pattern->subject.has_value());
  CHECK(pattern->subject->lemma == "he");
  CHECK(pattern->subject->index == 0);
  REQUIRE(pattern->slots.size() == 2);
  CHECK(pattern->slots[0].cat == "NP");
  REQUIRE(pattern->slots[0].head.has_value());
  CHECK(pattern->slots[0].head->lemma == "failure");
  CHECK(pattern->slots[0].head->index == 3);
  REQUIRE(pattern->slots[1].pp.has_value());
  const PPRecord& pp = *pattern->slots[1].pp;
  CHECK(pp.psubcat == "SING");
  CHECK(pp.prep == "to");
  REQUIRE(pp.complement_heads.size() == 2);
  CHECK(pp.complement_heads[0].lemma == "no<blank>one");
  CHECK(pp.complement_heads[0].index == 9);
  CHECK(pp.complement_heads[1].lemma == "buy");
  CHECK(pp.complement_heads[1].index == 10);
}

TEST_CASE("intransitive pattern has no slots") {
  Analysis analysis = top_parse("he_PPHS1 walk_VVD");
  auto pattern = extract(analysis, shipped_grammar(), "walk", 1);
  REQUIRE(pattern.has_value());
  CHECK(pattern->vsubcat == "NONE");
  CHECK(pattern->slots.empty());
  REQUIRE(pattern->subject.has_value());
  CHECK(pattern->subject->lemma == "he");
}

TEST_CASE("adjunct-attached PP stays out of the pattern") {
  Analysis adjunct = from_sexpr(
      "(S (NP he_PPHS1) (VP (VP (VSUBCAT NONE) (V0 walk_VVD)) "
      "(PP (PSUBCAT NP) (P0 on_II) (NP (DT the_AT) (N1 (N0 road_NN1))))))");
  auto pattern = extract(adjunct, shipped_grammar(), "walk", 1);
  REQUIRE(pattern.has_value());
  CHECK(pattern->vsubcat == "NONE");
  CHECK(pattern->slots.empty());

  Analysis argument = from_sexpr(
      "(S (NP he_PPHS1) (VP (VSUBCAT PP) (V0 walk_VVD) "
      "(PP (PSUBCAT NP) (P0 on_II) (NP (DT the_AT) (N1 (N0 road_NN1))))))");
  auto arg_pattern = extract(argument, shipped_grammar(), "walk", 1);
  REQUIRE(arg_pattern.has_value());
  CHECK(arg_pattern->vsubcat == "PP");
  REQUIRE(arg_pattern->slots.size() == 1);
}

TEST_CASE("extract validates the predicate") {
  Analysis analysis = top_parse("he_PPHS1 walk_VVD");
  CHECK_THROWS_AS(extract(analysis, shipped_grammar(), "walk", 9), std::out_of_range);
  CHECK_THROWS_AS(extract(analysis, shipped_grammar(), "run", 1), std::invalid_argument);
  // A non-verbal token is not under a VSUBCAT rule: no pattern, no fault.
  CHECK_FALSE(extract(analysis, shipped_grammar(), "he", 0).has_value());
}

TEST_CASE("passive detection and remapping") {
  Analysis passive = from_sexpr(
      "(S (NP he_PPHS1) (VP (VSUBCAT VP) (VA0 be_VBDZ) "
      "(VP (VSUBCAT NP) (V0 give_VVN) (NP (DT the_AT) (N1 (N0 book_NN1))))))");
  PassiveInfo info = detect_passive(passive, shipped_grammar(), 2);
  CHECK(info.passive);
  auto pattern = extract(passive, shipped_grammar(), "give", 2);
  REQUIRE(pattern.has_value());
  CHECK(pattern->passive);
  CHECK(pattern->vsubcat == "NP_NP");
  REQUIRE(pattern->slots.size() == 2);
  CHECK(pattern->slots[0].head->lemma == "he");   // surface subject as deep object
  CHECK(pattern->slots[1].head->lemma == "book");
  CHECK(classify(*pattern, shipped_inventory()) == std::string("DITRANS"));
}

TEST_CASE("active clauses are not passive") {
  Analysis active = top_parse("he_PPHS1 give_VVD the_AT book_NN1");
  CHECK_FALSE(detect_passive(active, shipped_grammar(), 1).passive);
  auto pattern = extract(active, shipped_grammar(), "give", 1);
  REQUIRE(pattern.has_value());
  CHECK_FALSE(pattern->passive);
  CHECK(pattern->vsubcat == "NP");
}

TEST_CASE("auxiliary plus participle is passive for bare frames") {
  // door close: the only reading in the toy grammar is the passive one.
  Analysis analysis = from_sexpr(
      "(S (NP (DT the_AT) (N1 (N0 door_NN1))) "
      "(VP (VSUBCAT VP) (VA0 be_VBDZ) (VP (VSUBCAT NONE) (V0 close_VVN))))");
  CHECK(detect_passive(analysis, shipped_grammar(), 3).passive);
  auto pattern = extract(analysis, shipped_grammar(), "close", 3);
  REQUIRE(pattern.has_value());
  CHECK(pattern->passive);
  CHECK(pattern->vsubcat == "NP");
  REQUIRE(pattern->slots.size() == 1);
  CHECK(pattern->slots[0].head->lemma == "door");
  CHECK(classify(*pattern, shipped_inventory()) == std::string("TRANS"));
}

TEST_CASE("agentive by-phrase becomes the deep subject") {
  Analysis analysis = from_sexpr(
      "(S (NP he_PPHS1) (VP (VSUBCAT VP) (VA0 be_VBDZ) "
      "(VP (VSUBCAT NP_PP) (V0 give_VVN) (NP (DT the_AT) (N1 (N0 book_NN1))) "
      "(PP (PSUBCAT NP) (P0 by_II) (NP (DT the_AT) (N1 (N0 woman_NN1)))))))");
  PassiveInfo info = detect_passive(analysis, shipped_grammar(), 2);
  CHECK(info.passive);
  REQUIRE(info.agent.has_value());
  CHECK(info.agent->lemma == "woman");
  auto pattern = extract(analysis, shipped_grammar(), "give", 2);
  REQUIRE(pattern.has_value());
  CHECK(pattern->passive);
  CHECK(pattern->vsubcat == "NP_NP");  // by-phrase removed from the slots
  REQUIRE(pattern->subject.has_value());
  CHECK(pattern->subject->lemma == "woman");
}

TEST_CASE("build_patternsets selects highest rank and groups by lemma") {
  Grammar g = shipped_grammar();
  auto corpus = parse_lemma_corpus(
      "he_PPHS1 give_VVD the_AT book_NN1\n"
      "he_PPHS1 give_VVD the_AT letter_NN1\n"
      "he_PPHS1 walk_VVD\n");
  std::vector<std::vector<Analysis>> analyses;
  for (const Sentence& sent : corpus) analyses.push_back(parse(sent, g, 10));
  auto grouped = build_patternsets(analyses, g, shipped_tagset().verb_tags);
  REQUIRE(grouped.count("give") == 1);
  REQUIRE(grouped.count("walk") == 1);
  CHECK(grouped["give"].size() == 2);
  CHECK(grouped["walk"].size() == 1);
  for (const Patternset& ps : grouped["give"]) {
    CHECK(ps.selected_rank == 1);
    CHECK(ps.selected.predicate == "give");
  }
  // Restricting the predicate list filters the grouping.
  auto only_walk = build_patternsets(analyses, g, shipped_tagset().verb_tags, {"walk"});
  CHECK(only_walk.count("give") == 0);
  CHECK(only_walk.count("walk") == 1);
}

TEST_CASE("pattern from the best rank that produces one") {
  // Rank 1 parses the token as a noun, rank 2 as the verb; the selected
  // pattern must come from rank 2.
  Analysis noun_reading = from_sexpr(
      "(S (NP (DT the_AT) (N1 (N0 give_NN1))) (VP (VSUBCAT NONE) (V0 help_VVD)))");
  noun_reading.rank = 1;
  Analysis verb_reading = from_sexpr(
      "(S (NP he_PPHS1) (VP (VSUBCAT NP) (V0 give_VVD) (NP (DT the_AT) (N1 (N0 book_NN1)))))");
  verb_reading.rank = 2;
  auto grouped = build_patternsets({{noun_reading, verb_reading}}, shipped_grammar(),
                                   shipped_tagset().verb_tags, {"give"});
  REQUIRE(grouped.count("give") == 1);
  REQUIRE(grouped["give"].size() == 1);
  CHECK(grouped["give"][0].selected_rank == 2);
  CHECK(grouped["give"][0].candidates.size() == 1);
}

TEST_CASE("sentences without analyses contribute nothing") {
  auto grouped = build_patternsets({{}}, shipped_grammar(), shipped_tagset().verb_tags);
  CHECK(grouped.empty());
}

TEST_CASE("infinitival complements are not predicate instances with patterns") {
  Grammar g = shipped_grammar();
  auto corpus = parse_lemma_corpus("he_PPHS1 want_VVD to_TO walk_VV0\n");
  auto analyses = parse(corpus[0], g, 10);
  REQUIRE(!analyses.empty());
  auto grouped = build_patternsets({analyses}, g, shipped_tagset().verb_tags);
  REQUIRE(grouped.count("want") == 1);
  CHECK(grouped["want"][0].selected.vsubcat == "VPI");
  // "walk" sits inside the VPI complement, below any VSUBCAT rule.
  CHECK(grouped.count("walk") == 0);
}

TEST_CASE("classify maps the attribute pattern to the sing class") {
  Analysis analysis = top_parse(kAttributeSentence);
  auto pattern = extract(analysis, shipped_grammar(), "attribute", 1);
  REQUIRE(pattern.has_value());
  auto cls = classify(*pattern, shipped_inventory());
  REQUIRE(cls.has_value());
  CHECK(*cls == "NP_PP-SING");
}

TEST_CASE("classify picks the most specific class") {
  Pattern pattern;
  pattern.predicate = "move";
  pattern.vsubcat = "NP_PP";
  PatternSlot np;
  np.cat = "NP";
  np.head = HeadRef{"cup", "NN1", 2};
  PatternSlot pp;
  pp.cat = "PP";
  pp.pp = PPRecord{"NP", "to", {HeadRef{"table", "NN1", 5}}};
  pattern.slots = {np, pp};
  CHECK(classify(pattern, shipped_inventory()) == std::string("NP_PP-to"));
  pattern.slots[1].pp->prep = "near";  // no parameterized sibling
  CHECK(classify(pattern, shipped_inventory()) == std::string("NP_PP"));
  pattern.slots[1].pp->prep = "TO";  // cue matching is case-insensitive
  CHECK(classify(pattern, shipped_inventory()) == std::string("NP_PP-to"));
}

TEST_CASE("classify handles intransitive, unknown, and subject-cue patterns") {
  Pattern intrans;
  intrans.vsubcat = "NONE";
  intrans.subject = HeadRef{"he", "PPHS1", 0};
  CHECK(classify(intrans, shipped_inventory()) == std::string("INTRANS"));

  Pattern unknown;
  unknown.vsubcat = "NP_SWH";
  CHECK_FALSE(classify(unknown, shipped_inventory()).has_value());

  Pattern extrap;
  extrap.vsubcat = "SC";
  extrap.subject = HeadRef{"it", "PPH1", 0};
  PatternSlot sc;
  sc.cat = "SC";
  sc.head = HeadRef{"that", "CST", 2};
  extrap.slots = {sc};
  CHECK(classify(extrap, shipped_inventory()) == std::string("SCOMP-extrap"));
  extrap.subject = HeadRef{"he", "PPHS1", 0};
  CHECK(classify(extrap, shipped_inventory()) == std::string("SCOMP"));
}

TEST_CASE("passive patterns only match passive-compatible classes") {
  Pattern pp_comp;
  pp_comp.vsubcat = "PP";
  pp_comp.passive = true;
  PatternSlot slot;
  slot.cat = "PP";
  slot.pp = PPRecord{"NP", "to", {HeadRef{"man", "NN1", 4}}};
  pp_comp.slots = {slot};
  // PP-to is not passive-ok, so the passive flag blocks it.
  CHECK_FALSE(classify(pp_comp, shipped_inventory()).has_value());
  pp_comp.passive = false;
  CHECK(classify(pp_comp, shipped_inventory()) == std::string("PP-to"));
}

TEST_CASE("inventory loader rejects duplicates") {
  CHECK_THROWS_WITH_AS(load_inventory("A one VSUBCAT=NONE\nA two VSUBCAT=NP slot:NP\n"),
                       doctest::Contains("duplicate class id"), std::runtime_error);
  CHECK_THROWS_WITH_AS(load_inventory("A one VSUBCAT=NONE\nB two VSUBCAT=NONE\n"),
                       doctest::Contains("signature"), std::runtime_error);
}

TEST_CASE("pattern depends only on its clause") {
  Analysis bare = top_parse("he_PPHS1 walk_VVD the_AT dog_NN1");
  Analysis embedded = top_parse("he_PPHS1 say_VVD that_CST he_PPHS1 walk_VVD the_AT dog_NN1");
  auto inner = extract(embedded, shipped_grammar(), "walk", 4);
  auto outer = extract(bare, shipped_grammar(), "walk", 1);
  REQUIRE(inner.has_value());
  REQUIRE(outer.has_value());
  CHECK(inner->vsubcat == outer->vsubcat);
  REQUIRE(inner->slots.size() == outer->slots.size());
  CHECK(inner->slots[0].head->lemma == outer->slots[0].head->lemma);
  CHECK(inner->subject->lemma == outer->subject->lemma);
}

TEST_CASE("patternset sexpr round-trips") {
  Analysis analysis = top_parse(kAttributeSentence);
  std::vector<std::vector<Analysis>> per_sentence = {
      parse(parse_lemma_corpus(kAttributeSentence + "\n")[0], shipped_grammar(), 5)};
  auto grouped = build_patternsets(per_sentence, shipped_grammar(), shipped_tagset().verb_tags);
  REQUIRE(grouped.count("attribute") == 1);
  const Patternset& ps = grouped["attribute"][0];
  std::string text = patternset_sexpr(ps);
  Patternset back = patternset_from_sexpr(text);
  CHECK(back.predicate == ps.predicate);
  CHECK(back.sentence_id == ps.sentence_id);
  CHECK(back.selected_rank == ps.selected_rank);
  CHECK(back.selected.vsubcat == ps.selected.vsubcat);
  CHECK(back.selected.slots.size() == ps.selected.slots.size());
  CHECK(patternset_sexpr(back) == text);
}

TEST_CASE("unclassifiable fraction is strictly positive on the mixed fixture") {
  Grammar g = shipped_grammar();
  auto rules = load_lemma_rules(read_file(data_path("lemma.rules")));
  auto corpus = parse_tagged_corpus(read_file(data_path("fixtures/mixed.txt")));
  for (Sentence& sent : corpus) lemmatize_sentence(sent, rules);
  std::vector<std::vector<Analysis>> analyses;
  for (const Sentence& sent : corpus) {
    auto lemmas = sent;
    analyses.push_back(parse(lemmas, g, 10));
  }
  auto grouped = build_patternsets(analyses, g, shipped_tagset().verb_tags);
  long total = 0, unclassifiable = 0;
  for (const auto& [verb, sets] : grouped) {
    for (const Patternset& ps : sets) {
      ++total;
      if (!classify(ps.selected, shipped_inventory())) ++unclassifiable;
    }
  }
  CHECK(total > 0);
  CHECK(unclassifiable > 0);
  CHECK(unclassifiable < total);
}
