#pragma once

#include <map>
#include <string>
#include <vector>

#include "subcat/corpus.hpp"

namespace subcat {

// First-order HMM over a closed tagset. Counts come from a gold-tagged
// corpus; probabilities are derived with add-k smoothing. Immutable after
// training and safe for concurrent reads.
class TaggerModel {
 public:
  TaggerModel() = default;

  int tag_count() const { return static_cast<int>(tags_.size()); }
  const std::vector<std::string>& tags() const { return tags_; }
  const std::string& tag_name(int id) const { return tags_[id]; }
  int tag_id(const std::string& tag) const;  // -1 if absent

  // Candidate tag ids for a word: observed tags for known words, the
  // open-class list otherwise. Ids are ascending, i.e. lexicographic.
  std::vector<int> candidate_tags(const std::string& word) const;
  bool known_word(const std::string& word) const;

  // Smoothed log probabilities. Transition contexts include the start
  // and end states; emissions share one unseen-word mass.
  double log_start(int tag) const;
  double log_trans(int from, int to) const;
  double log_end(int tag) const;
  double log_emit(const std::string& word, int tag) const;

  // Raw counts, exposed for training verification.
  long transition_count(const std::string& from, const std::string& to) const;
  long start_count(const std::string& tag) const;
  long end_count(const std::string& tag) const;
  long emission_count(const std::string& word, const std::string& tag) const;

  double smoothing() const { return smoothing_; }

  friend TaggerModel train_tagger(const std::vector<Sentence>& corpus,
                                  const Tagset& tagset, double smoothing);

 private:
  std::vector<std::string> tags_;  // sorted lexicographically; id = position
  std::map<std::string, int> tag_ids_;
  std::vector<int> open_class_;  // ascending ids
  std::vector<std::vector<long>> trans_;  // [from][to]
  std::vector<long> start_, end_, tag_total_;
  long sentence_total_ = 0;
  std::map<std::string, std::vector<std::pair<int, long>>> emit_;  // word -> (tag,count) ascending
  long vocab_size_ = 0;
  double smoothing_ = 0.5;
};

// Counts every transition and emission event in the corpus. Errors: empty
// corpus; a token with an empty tag (message names the sentence index);
// a tag outside the tagset.
TaggerModel train_tagger(const std::vector<Sentence>& corpus, const Tagset& tagset,
                         double smoothing = 0.5);

// Exact best-path decoding. Ties are broken by the lexicographically
// smallest tag sequence. alt_odds sets the posterior-odds cutoff for the
// per-token alternative tags (<= 0 disables them).
Sentence tag_sentence(const std::vector<std::string>& words, const TaggerModel& model,
                      double alt_odds = 0.1);

// Score of a full tag assignment under the model, as a plain double (the
// log terms are summed in sorted order so the value depends only on the
// term multiset).
double path_log_score(const std::vector<std::string>& words,
                      const std::vector<int>& tag_ids, const TaggerModel& model);

// Three-way comparison of two assignments' scores, exact over the reals
// (error-free summation of the log terms). This order defines the best
// path: the decoder maximizes it and enumeration checks share it, so
// mathematically tied paths resolve identically on both sides.
int compare_paths(const std::vector<std::string>& words, const std::vector<int>& tags_a,
                  const std::vector<int>& tags_b, const TaggerModel& model);

}  // namespace subcat
