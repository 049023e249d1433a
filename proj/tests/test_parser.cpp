#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "subcat/corpus.hpp"
#include "subcat/grammar.hpp"
#include "subcat/parser.hpp"
#include "subcat/textio.hpp"

using namespace subcat;

namespace {

std::string data_path(const std::string& name) {
  return std::string(SUBCAT_DATA_DIR) + "/" + name;
}

Grammar shipped_grammar() { return load_grammar(read_file(data_path("grammar.pcfg"))); }

Sentence lemma_sentence(const std::string& line) {
  auto corpus = parse_lemma_corpus(line + "\n");
  REQUIRE(corpus.size() == 1);
  return corpus[0];
}

// Toy grammar with PP-attachment ambiguity.
const char* kToyGrammar = R"(
%root S
%vp VP
%pp PP
%vsubcat NP NP_PP
%psubcat NP
S -> NP VP : 1.0 slots=arg,head
NP -> D N : 0.5 slots=x,head
NP -> NP PP : 0.2 slots=head,adj
NP -> PRO : 0.3 slots=head
VP -> V NP : 0.55 VSUBCAT=NP slots=head,arg
VP -> V NP PP : 0.45 VSUBCAT=NP_PP slots=head,arg,arg
PP -> P NP : 1.0 PSUBCAT=NP slots=head,arg
)";

}  // namespace

TEST_CASE("load_grammar accepts single and split rules") {
  auto g = load_grammar("%root S\nS -> X : 1.0\nX -> a : 1.0\n");
  CHECK(g.rules.size() == 2);
  CHECK(g.is_terminal("a"));
  auto g2 = load_grammar("%root S\nS -> X : 0.6\nS -> Y : 0.4\nX -> a : 1.0\nY -> b : 1.0\n");
  CHECK(g2.rules.size() == 4);
}

TEST_CASE("load_grammar rejects probabilities that do not sum to one") {
  CHECK_THROWS_WITH_AS(
      load_grammar("%root S\nS -> X : 0.6\nS -> Y : 0.5\nX -> a : 1.0\nY -> b : 1.0\n"),
      doctest::Contains("S"), std::runtime_error);
}

TEST_CASE("load_grammar rejects unknown feature values and misplaced features") {
  CHECK_THROWS_WITH_AS(
      load_grammar("%root S\n%vp VP\nS -> VP : 1.0\nVP -> v : 1.0 VSUBCAT=NONE\n"),
      doctest::Contains("unknown VSUBCAT"), std::runtime_error);
  CHECK_THROWS_WITH_AS(
      load_grammar("%root S\n%vp VP\n%vsubcat NONE\nS -> X : 1.0\nX -> v : 1.0 VSUBCAT=NONE\n"),
      doctest::Contains("non-VP"), std::runtime_error);
}

TEST_CASE("parse returns the forced derivation with the product score") {
  auto g = load_grammar("%root S\nS -> A B : 0.7 slots=head,arg\nS -> A : 0.3\n"
                        "A -> a : 1.0\nB -> A A : 1.0 slots=head,arg\n");
  Sentence sent = lemma_sentence("x_a y_a z_a");
  auto analyses = parse(sent, g, kAllAnalyses);
  REQUIRE(analyses.size() == 1);
  CHECK(analyses[0].logp == doctest::Approx(std::log(0.7)).epsilon(1e-12));
  CHECK(analyses[0].rank == 1);
  CHECK(node_sexpr(*analyses[0].root) == "(S (A x_a) (B (A y_a) (A z_a)))");
}

TEST_CASE("ambiguous attachment ranking matches brute-force enumeration") {
  auto g = load_grammar(kToyGrammar);
  Sentence sent = lemma_sentence("he_PRO saw_V the_D man_N with_P the_D scope_N");
  auto analyses = parse(sent, g, kAllAnalyses);
  auto expected = oracle::enumerate_derivations(sent, g);
  REQUIRE(analyses.size() == expected.size());
  REQUIRE(analyses.size() == 2);
  for (size_t i = 0; i < analyses.size(); ++i) {
    CHECK(analyses[i].logp == expected[i].logp);
    CHECK(node_sexpr(*analyses[i].root) == node_sexpr(*expected[i].root));
  }
  // VP attachment carries the higher score here: 0.45 vs 0.55 * 0.2.
  CHECK(analyses[0].root->children[1]->rule->vsubcat == "NP_PP");
}

TEST_CASE("parse(k=all) equals enumeration on toy grammars") {
  auto g = load_grammar(kToyGrammar);
  for (const char* line : {
           "he_PRO saw_V the_D man_N",
           "he_PRO saw_V the_D man_N with_P the_D scope_N",
           "he_PRO saw_V the_D man_N with_P the_D scope_N on_P the_D hill_N",
       }) {
    Sentence sent = lemma_sentence(line);
    auto analyses = parse(sent, g, kAllAnalyses);
    auto expected = oracle::enumerate_derivations(sent, g);
    REQUIRE(!expected.empty());
    REQUIRE(expected.size() <= 200);
    REQUIRE(analyses.size() == expected.size());
    for (size_t i = 0; i < analyses.size(); ++i) {
      CHECK(analyses[i].logp == expected[i].logp);
      CHECK(analyses[i].rank == expected[i].rank);
      CHECK(node_sexpr(*analyses[i].root) == node_sexpr(*expected[i].root));
    }
  }
}

TEST_CASE("parse(k=all) equals enumeration on the shipped grammar") {
  auto g = shipped_grammar();
  auto corpus = parse_lemma_corpus(
      "he_PPHS1 walk_VVD the_AT dog_NN1 on_II the_AT road_NN1\n"
      "he_PPHS1 say_VVD that_CST he_PPHS1 walk_VVD\n"
      "the_AT book_NN1 be_VBDZ give_VVN to_II the_AT man_NN1\n");
  for (const Sentence& sent : corpus) {
    auto analyses = parse(sent, g, kAllAnalyses);
    auto expected = oracle::enumerate_derivations(sent, g);
    REQUIRE(expected.size() <= 200);
    REQUIRE(analyses.size() == expected.size());
    for (size_t i = 0; i < analyses.size(); ++i) {
      CHECK(analyses[i].logp == expected[i].logp);
      CHECK(node_sexpr(*analyses[i].root) == node_sexpr(*expected[i].root));
    }
  }
}

TEST_CASE("scores recompute from the rule multiset") {
  auto g = shipped_grammar();
  auto corpus = parse_lemma_corpus(
      "he_PPHS1 attribute_VVD his_APP$ failure_NN1 ,_, he_PPHS1 say_VVD ,_, "
      "to_II no<blank>one_PN buy_VVG his_APP$ book_NN2\n");
  auto analyses = parse(corpus[0], g, 10);
  REQUIRE(!analyses.empty());
  for (const Analysis& a : analyses)
    CHECK(std::fabs(recompute_logp(a.root) - a.logp) < 1e-9);
}

TEST_CASE("attribution sentence yields the NP_PP analysis on top") {
  auto g = shipped_grammar();
  auto corpus = parse_lemma_corpus(
      "he_PPHS1 attribute_VVD his_APP$ failure_NN1 ,_, he_PPHS1 say_VVD ,_, "
      "to_II no<blank>one_PN buy_VVG his_APP$ book_NN2\n");
  auto analyses = parse(corpus[0], g, 10);
  REQUIRE(!analyses.empty());
  const ParseNode* vp = analyses[0].root->children[1].get();
  REQUIRE(vp->cat == "VP");
  CHECK(vp->rule->vsubcat == "NP_PP");
  // Direct object head is "failure"; the PP is headed by "to".
  std::string sexpr = node_sexpr(*analyses[0].root);
  CHECK(sexpr.find("(PSUBCAT SING)") != std::string::npos);
  CHECK(sexpr.find("failure_NN1") != std::string::npos);
  CHECK(sexpr.find("(P0 to_II)") != std::string::npos);
}

TEST_CASE("out of coverage and unknown tags yield empty results") {
  auto g = load_grammar(kToyGrammar);
  CHECK(parse(lemma_sentence("he_PRO saw_V"), g, 5).empty());
  CHECK(parse(lemma_sentence("he_XX saw_V the_D man_N"), g, 5).empty());
}

TEST_CASE("coverage counts sentences with at least one analysis") {
  auto g = load_grammar(kToyGrammar);
  auto corpus = parse_lemma_corpus(
      "he_PRO saw_V the_D man_N\n"
      "he_PRO saw_V the_D man_N with_P the_D scope_N\n"
      "he_PRO saw_V\n"
      "the_D man_N saw_V him_PRO\n");
  CHECK(coverage(corpus, g) == doctest::Approx(0.75));
  CHECK(coverage({corpus[0], corpus[1]}, g) == 1.0);
  CHECK(coverage({corpus[2]}, g) == 0.0);
  CHECK_THROWS_AS(coverage({}, g), std::runtime_error);
}

TEST_CASE("k truncates the analysis list") {
  auto g = load_grammar(kToyGrammar);
  Sentence sent =
      lemma_sentence("he_PRO saw_V the_D man_N with_P the_D scope_N on_P the_D hill_N");
  auto all = parse(sent, g, kAllAnalyses);
  REQUIRE(all.size() > 2);
  auto top2 = parse(sent, g, 2);
  REQUIRE(top2.size() == 2);
  CHECK(top2[0].logp == all[0].logp);
  CHECK(top2[1].logp == all[1].logp);
}

TEST_CASE("alternative tags feed the parser") {
  auto g = load_grammar(kToyGrammar);
  auto corpus = parse_lemma_corpus("he_PRO saw_X the_D man_N\n");
  Sentence sent = corpus[0];
  CHECK(parse(sent, g, 5).empty());  // X is not a terminal
  sent[1].alt_tags = {"V"};
  auto analyses = parse(sent, g, 5);
  REQUIRE(!analyses.empty());
  // The leaf records the tag the parse actually used.
  CHECK(leaves(analyses[0].root)[1]->token.tag == "V");
}

TEST_CASE("unary chains are capped at three rules") {
  const char* chain3 =
      "%root S\nS -> A : 1.0\nA -> B : 1.0\nB -> C : 1.0\nC -> t : 1.0\n";
  auto g3 = load_grammar(chain3);
  auto corpus = parse_lemma_corpus("x_t\n");
  CHECK(parse(corpus[0], g3, 5).size() == 1);

  const char* chain4 =
      "%root S\nS -> A : 1.0\nA -> B : 1.0\nB -> C : 1.0\nC -> D : 1.0\nD -> t : 1.0\n";
  auto g4 = load_grammar(chain4);
  CHECK(parse(corpus[0], g4, 5).empty());
}

TEST_CASE("analysis sexpr round-trips through the line format") {
  auto g = shipped_grammar();
  auto corpus = parse_lemma_corpus("he_PPHS1 open_VVD the_AT door_NN1\n");
  auto analyses = parse(corpus[0], g, 3);
  REQUIRE(!analyses.empty());
  for (const Analysis& a : analyses) {
    std::string line = format_analysis_line(7, a);
    AnalysisLine back = parse_analysis_line(line, g);
    CHECK(back.sentence_id == 7);
    CHECK(back.analysis.rank == a.rank);
    CHECK(back.analysis.logp == a.logp);
    CHECK(node_sexpr(*back.analysis.root) == node_sexpr(*a.root));
  }
}
