#pragma once

#include <set>
#include <string>
#include <vector>

namespace subcat {

struct TaggedToken {
  std::string surface;
  std::string tag;
  std::string lemma;  // empty until lemmatized
  int index = 0;      // 0-based position within the sentence
  // Tags whose local posterior odds against the best tag exceed the
  // tagger's cutoff; the shallow parser may use them as alternatives.
  std::vector<std::string> alt_tags;
};

using Sentence = std::vector<TaggedToken>;

// Closed tagset plus the per-tag properties the pipeline needs.
struct Tagset {
  std::vector<std::string> tags;     // declaration order
  std::set<std::string> open_class;  // tags unseen words may receive
  std::set<std::string> verb_tags;   // lexical predicate tags
  bool contains(const std::string& tag) const;
};

// Format: one tag per line, "TAG [open] [verb]", "#" comments.
Tagset load_tagset(const std::string& text);

// Raw corpus: one sentence per line, whitespace-separated tokens.
std::vector<std::vector<std::string>> parse_raw_corpus(const std::string& text);

// Tagged corpus: token_TAG with the rightmost underscore as separator.
std::vector<Sentence> parse_tagged_corpus(const std::string& text);
std::string format_tagged_corpus(const std::vector<Sentence>& corpus);

// Lemma-tag corpus, as produced by the lemmatizer: lemma_TAG tokens.
std::string format_lemma_corpus(const std::vector<Sentence>& corpus);
std::vector<Sentence> parse_lemma_corpus(const std::string& text);

}  // namespace subcat
