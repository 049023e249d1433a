#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "subcat/classify.hpp"
#include "subcat/corpus.hpp"
#include "subcat/evalmetrics.hpp"
#include "subcat/grammar.hpp"

namespace subcat {

struct SeedEntry {
  std::string verb;
  std::vector<std::pair<std::string, double>> class_probs;  // normalized at load
};

// "VERB lemma" blocks with "class_id weight" lines.
std::vector<SeedEntry> load_seed(const std::string& text);

struct SynthLabel {
  int sentence_id = 0;
  std::string verb;
  std::string class_id;
};

struct SynthResult {
  std::vector<Sentence> corpus;  // gold-tagged sentences
  std::vector<SynthLabel> labels;
  std::map<std::string, GoldEntry> gold;  // seeded classes, seed ranking, realized counts
};

// Deterministic for a fixed seed. Every seeded class must be realizable:
// the grammar needs a VP rule matching the class shape and the realized
// pattern must classify back to the seeded class; violations raise an
// error naming the class.
SynthResult gen_synth_corpus(const std::vector<SeedEntry>& seed,
                             const ClassInventory& inventory, const Grammar& grammar,
                             std::uint64_t rng_seed, int n_sentences);

std::string format_labels(const std::vector<SynthLabel>& labels);
std::vector<SynthLabel> parse_labels(const std::string& text);

}  // namespace subcat
