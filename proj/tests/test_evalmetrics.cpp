#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subcat/evalmetrics.hpp"
#include "subcat/grammar.hpp"
#include "subcat/parser.hpp"
#include "subcat/synth.hpp"
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

Bracketing make_brackets(int length, std::vector<std::pair<int, int>> spans) {
  Bracketing b;
  b.sentence_id = 0;
  b.length = length;
  std::sort(spans.begin(), spans.end());
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
  b.spans = std::move(spans);
  return b;
}

}  // namespace

TEST_CASE("type precision and recall reproduce the benchmark totals") {
  PRResult merged = prf_from_counts({65, 34, 118});
  REQUIRE(merged.precision.has_value());
  REQUIRE(merged.recall.has_value());
  CHECK(std::fabs(*merged.precision * 100 - 65.7) < 0.05);
  CHECK(std::fabs(*merged.recall * 100 - 35.5) < 0.05);

  PRResult corpus = prf_from_counts({36, 11, 47});
  CHECK(std::fabs(*corpus.precision * 100 - 76.6) < 0.05);
  CHECK(std::fabs(*corpus.recall * 100 - 43.4) < 0.05);
}

TEST_CASE("type_prf on sets") {
  PRResult perfect = type_prf({"A", "B"}, {"A", "B"});
  CHECK(*perfect.precision == 1.0);
  CHECK(*perfect.recall == 1.0);

  PRResult mixed = type_prf({"A", "C"}, {"A", "B"});
  CHECK(mixed.counts.tp == 1);
  CHECK(mixed.counts.fp == 1);
  CHECK(mixed.counts.fn == 1);

  PRResult none = type_prf({}, {"A"});
  CHECK_FALSE(none.precision.has_value());
  CHECK(*none.recall == 0.0);
}

TEST_CASE("type_prf is invariant under class relabeling") {
  PRResult before = type_prf({"A", "C"}, {"A", "B"});
  PRResult after = type_prf({"x:A", "x:C"}, {"x:A", "x:B"});
  CHECK(before.counts.tp == after.counts.tp);
  CHECK(before.counts.fp == after.counts.fp);
  CHECK(before.counts.fn == after.counts.fn);
}

TEST_CASE("ranking accuracy worked examples") {
  CHECK(*ranking_accuracy({"A", "B", "C", "D"}, {{"A"}, {"B"}, {"C"}, {"D"}}) == 1.0);
  // system [A,B,C] vs correct [A,C,B]: pairs AB and AC agree, BC differs.
  CHECK(*ranking_accuracy({"A", "B", "C"}, {{"A"}, {"C"}, {"B"}}) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(*ranking_accuracy({"A", "B"}, {{"B"}, {"A"}}) == 0.0);
}

TEST_CASE("ranking accuracy excludes gold ties and needs two common classes") {
  // B and C tied in gold: only pairs with A count (both agree).
  CHECK(*ranking_accuracy({"A", "B", "C"}, {{"A"}, {"B", "C"}}) == 1.0);
  // All gold classes tied: no scorable pair.
  CHECK_FALSE(ranking_accuracy({"A", "B"}, {{"A", "B"}}).has_value());
  CHECK_FALSE(ranking_accuracy({"A"}, {{"A"}}).has_value());
  // Classes outside the intersection are ignored.
  CHECK(*ranking_accuracy({"A", "X", "B"}, {{"A"}, {"B"}, {"Y"}}) == 1.0);
}

TEST_CASE("token recall worked examples") {
  CHECK(*token_recall({"A", "B"}, {{"A", 60}, {"B", 40}}) == 1.0);
  CHECK(*token_recall({"A"}, {{"A", 78}, {"B", 22}}) ==
        doctest::Approx(0.78).epsilon(1e-12));
  CHECK(*token_recall({}, {{"A", 10}}) == 0.0);
  CHECK_FALSE(token_recall({"A"}, {}).has_value());
}

TEST_CASE("geig worked examples") {
  Bracketing gold = make_brackets(5, {{0, 5}, {0, 2}, {3, 5}});
  Bracketing same = gold;
  GeigResult identical = geig(same, gold);
  CHECK(identical.crossings == 0);
  CHECK(*identical.precision == 1.0);
  CHECK(*identical.recall == 1.0);

  Bracketing candidate = make_brackets(5, {{0, 5}, {1, 3}});
  GeigResult r = geig(candidate, gold);
  CHECK(r.crossings == 1);
  CHECK(*r.precision == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(*r.recall == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  Bracketing empty = make_brackets(5, {});
  GeigResult e = geig(empty, gold);
  CHECK(e.crossings == 0);
  CHECK(*e.recall == 0.0);
  CHECK_FALSE(e.precision.has_value());
}

TEST_CASE("geig swaps precision and recall when arguments swap") {
  Bracketing a = make_brackets(6, {{0, 6}, {1, 4}, {2, 6}});
  Bracketing b = make_brackets(6, {{0, 6}, {0, 3}});
  GeigResult ab = geig(a, b);
  GeigResult ba = geig(b, a);
  CHECK(*ab.precision == *ba.recall);
  CHECK(*ab.recall == *ba.precision);
}

TEST_CASE("crossing counts are not symmetric") {
  // Crossings count candidate spans only.
  Bracketing a = make_brackets(4, {{1, 3}});
  Bracketing b = make_brackets(4, {{0, 2}, {2, 4}});
  CHECK(geig(a, b).crossings == 1);
  CHECK(geig(b, a).crossings == 2);
}

TEST_CASE("geig validates spans") {
  Bracketing good = make_brackets(4, {{0, 2}});
  Bracketing other_len = make_brackets(5, {{0, 2}});
  CHECK_THROWS_AS(geig(good, other_len), std::invalid_argument);
  Bracketing out_of_range = make_brackets(4, {{2, 6}});
  CHECK_THROWS_AS(geig(out_of_range, good), std::invalid_argument);
}

TEST_CASE("bracketing from an analysis collapses unary spans") {
  auto corpus = parse_lemma_corpus("he_PPHS1 open_VVD the_AT door_NN1\n");
  auto analyses = parse(corpus[0], shipped_grammar(), 1);
  REQUIRE(!analyses.empty());
  Bracketing b = bracketing_from_analysis(3, analyses[0]);
  CHECK(b.sentence_id == 3);
  CHECK(b.length == 4);
  for (auto [s, e] : b.spans) CHECK(e - s >= 2);
  // (S he (VP open (NP the (N1 door)))): NP and N1 spans collapse to one.
  std::vector<std::pair<int, int>> expected = {{0, 4}, {1, 4}, {2, 4}};
  CHECK(b.spans == expected);
}

TEST_CASE("paired t-test worked examples") {
  TTestResult same = paired_t({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
  CHECK(same.t == 0.0);
  CHECK(*same.p == doctest::Approx(0.5).epsilon(1e-9));

  TTestResult hand = paired_t({2.0, 2.0, 2.0, 0.0}, {1.0, 1.0, 1.0, 1.0});
  CHECK(hand.t == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(hand.df == 3);
  CHECK(*hand.p == doctest::Approx(0.195501).epsilon(1e-4));

  // The reported significance level for t = 1.21 at 249 df.
  CHECK(std::fabs(t_tail_p(1.21, 249) - 0.11) < 0.005);
}

TEST_CASE("paired t-test symmetry and shift invariance") {
  std::vector<double> a = {3.0, 1.0, 4.0, 1.5}, b = {2.0, 2.0, 3.0, 1.0};
  TTestResult ab = paired_t(a, b);
  TTestResult ba = paired_t(b, a);
  CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-12));
  std::vector<double> a_shift = a, b_shift = b;
  for (double& x : a_shift) x += 7.5;
  for (double& x : b_shift) x += 7.5;
  TTestResult shifted = paired_t(a_shift, b_shift);
  CHECK(ab.t == doctest::Approx(shifted.t).epsilon(1e-9));
}

TEST_CASE("paired t-test reports zero-variance differences") {
  TTestResult r = paired_t({2.0, 3.0, 4.0}, {1.0, 2.0, 3.0});
  CHECK_FALSE(r.p.has_value());
  CHECK(!r.status.empty());
  CHECK_THROWS_AS(paired_t({1.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(paired_t({1.0, 2.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("gold entries round-trip") {
  std::string text =
      "VERB give\nDITRANS\nNP_PP-to\nTRANS\nRANK DITRANS NP_PP-to=TRANS\n"
      "TOKENS DITRANS 30\nTOKENS TRANS 12\n";
  auto gold = load_gold(text);
  REQUIRE(gold.count("give") == 1);
  const GoldEntry& entry = gold["give"];
  CHECK(entry.classes.size() == 3);
  REQUIRE(entry.ranking.size() == 2);
  CHECK(entry.ranking[1].size() == 2);
  CHECK(entry.token_counts.at("DITRANS") == 30);
  auto back = load_gold(format_gold(gold));
  CHECK(back["give"].classes == entry.classes);
  CHECK(back["give"].ranking == entry.ranking);
  CHECK(back["give"].token_counts == entry.token_counts);
}

TEST_CASE("bracket files round-trip") {
  std::map<int, Bracketing> brackets;
  brackets[0] = make_brackets(5, {{0, 5}, {1, 3}});
  brackets[0].sentence_id = 0;
  brackets[2] = make_brackets(4, {{0, 4}});
  brackets[2].sentence_id = 2;
  auto back = load_brackets(format_brackets(brackets));
  REQUIRE(back.size() == 2);
  CHECK(back[0].length == 5);
  CHECK(back[0].spans == brackets[0].spans);
  CHECK(back[2].spans == brackets[2].spans);
}

TEST_CASE("synthetic corpus basics") {
  auto seed = load_seed("VERB open\nTRANS 1.0\n");
  auto empty = gen_synth_corpus(seed, shipped_inventory(), shipped_grammar(), 7, 0);
  CHECK(empty.corpus.empty());
  CHECK(empty.labels.empty());

  auto single = gen_synth_corpus(seed, shipped_inventory(), shipped_grammar(), 7, 50);
  CHECK(single.corpus.size() == 50);
  REQUIRE(single.labels.size() == 50);
  for (const SynthLabel& label : single.labels) {
    CHECK(label.verb == "open");
    CHECK(label.class_id == "TRANS");
  }
  CHECK(single.gold.at("open").token_counts.at("TRANS") == 50);
}

TEST_CASE("synthetic corpus is deterministic and converges to the seed") {
  auto seed = load_seed("VERB open\nTRANS 0.8\nINTRANS 0.2\n");
  auto a = gen_synth_corpus(seed, shipped_inventory(), shipped_grammar(), 11, 1000);
  auto b = gen_synth_corpus(seed, shipped_inventory(), shipped_grammar(), 11, 1000);
  CHECK(format_tagged_corpus(a.corpus) == format_tagged_corpus(b.corpus));
  CHECK(format_labels(a.labels) == format_labels(b.labels));

  long trans = 0;
  for (const SynthLabel& label : a.labels)
    if (label.class_id == "TRANS") ++trans;
  double proportion = static_cast<double>(trans) / 1000.0;
  CHECK(std::fabs(proportion - 0.8) <= 0.04);
}

TEST_CASE("unrealizable seed classes fail by name") {
  auto missing = load_seed("VERB open\nNOSUCH 1.0\n");
  CHECK_THROWS_WITH_AS(
      gen_synth_corpus(missing, shipped_inventory(), shipped_grammar(), 1, 1),
      doctest::Contains("NOSUCH"), std::runtime_error);
  // A class whose shape has no matching VP rule is unrealizable even when
  // the inventory lists it.
  ClassInventory inv = load_inventory("ODD odd VSUBCAT=NP_NP slot:NP slot:PP[psubcat=NP]\n");
  auto bad = load_seed("VERB open\nODD 1.0\n");
  CHECK_THROWS_WITH_AS(gen_synth_corpus(bad, inv, shipped_grammar(), 1, 1),
                       doctest::Contains("ODD"), std::runtime_error);
}

TEST_CASE("synthetic sentences parse under the shipped grammar") {
  auto seed = load_seed(read_file(data_path("seed.conf")));
  auto result = gen_synth_corpus(seed, shipped_inventory(), shipped_grammar(), 3, 40);
  double ratio = coverage(result.corpus, shipped_grammar());
  CHECK(ratio == 1.0);
}
