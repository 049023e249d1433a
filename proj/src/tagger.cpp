#include "subcat/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subcat {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(const std::vector<double>& xs) {
  double m = kNegInf;
  for (double x : xs) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

// Canonical path score: the sorted sum of the path's log terms, so the
// reported value depends only on the term multiset.
double canonical_sum(std::vector<double> terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

// Error-free transform: s = fl(a+b) and err the exact rounding error.
inline void two_sum(double a, double b, double& s, double& err) {
  s = a + b;
  double bv = s - a;
  err = (a - (s - bv)) + (b - bv);
}

// Shewchuk grow-expansion. Components stay nonoverlapping in increasing
// magnitude, so the sign of the sum is the sign of the last component.
void grow_expansion(std::vector<double>& e, double b) {
  double q = b;
  size_t out = 0;
  for (size_t i = 0; i < e.size(); ++i) {
    double s, err;
    two_sum(q, e[i], s, err);
    q = s;
    if (err != 0.0) e[out++] = err;
  }
  e.resize(out);
  if (q != 0.0) e.push_back(q);
}

// Sign of (sum(a) - sum(b)) over the reals. A conservatively bounded
// float pass decides the common case; coincidence-level gaps fall back to
// exact expansion arithmetic.
int compare_term_sums(const std::vector<double>& a, const std::vector<double>& b) {
  double sum_a = 0.0, sum_b = 0.0, mag = 0.0;
  for (double t : a) {
    sum_a += t;
    mag += std::fabs(t);
  }
  for (double t : b) {
    sum_b += t;
    mag += std::fabs(t);
  }
  double n = static_cast<double>(a.size() + b.size());
  double bound = 4.0 * n * mag * std::numeric_limits<double>::epsilon();
  if (sum_a - sum_b > bound) return 1;
  if (sum_b - sum_a > bound) return -1;
  std::vector<double> diff;
  for (double t : a) grow_expansion(diff, t);
  for (double t : b) grow_expansion(diff, -t);
  if (diff.empty()) return 0;
  return diff.back() > 0 ? 1 : -1;
}
}  // namespace

int TaggerModel::tag_id(const std::string& tag) const {
  auto it = tag_ids_.find(tag);
  return it == tag_ids_.end() ? -1 : it->second;
}

bool TaggerModel::known_word(const std::string& word) const {
  return emit_.find(word) != emit_.end();
}

std::vector<int> TaggerModel::candidate_tags(const std::string& word) const {
  auto it = emit_.find(word);
  if (it == emit_.end()) return open_class_;
  std::vector<int> out;
  out.reserve(it->second.size());
  for (const auto& [tag, count] : it->second) out.push_back(tag);
  return out;
}

double TaggerModel::log_start(int tag) const {
  int t = tag_count();
  return std::log((start_[tag] + smoothing_) / (sentence_total_ + smoothing_ * t));
}

double TaggerModel::log_trans(int from, int to) const {
  int successors = tag_count() + 1;  // every tag plus the end state
  return std::log((trans_[from][to] + smoothing_) /
                  (tag_total_[from] + smoothing_ * successors));
}

double TaggerModel::log_end(int tag) const {
  int successors = tag_count() + 1;
  return std::log((end_[tag] + smoothing_) /
                  (tag_total_[tag] + smoothing_ * successors));
}

double TaggerModel::log_emit(const std::string& word, int tag) const {
  long c = 0;
  auto it = emit_.find(word);
  if (it != emit_.end())
    for (const auto& [t, count] : it->second)
      if (t == tag) c = count;
  double denom = tag_total_[tag] + smoothing_ * (vocab_size_ + 1);
  return std::log((c + smoothing_) / denom);
}

long TaggerModel::transition_count(const std::string& from, const std::string& to) const {
  int f = tag_id(from), t = tag_id(to);
  if (f < 0 || t < 0) return 0;
  return trans_[f][t];
}

long TaggerModel::start_count(const std::string& tag) const {
  int t = tag_id(tag);
  return t < 0 ? 0 : start_[t];
}

long TaggerModel::end_count(const std::string& tag) const {
  int t = tag_id(tag);
  return t < 0 ? 0 : end_[t];
}

long TaggerModel::emission_count(const std::string& word, const std::string& tag) const {
  int t = tag_id(tag);
  if (t < 0) return 0;
  auto it = emit_.find(word);
  if (it == emit_.end()) return 0;
  for (const auto& [id, count] : it->second)
    if (id == t) return count;
  return 0;
}

TaggerModel train_tagger(const std::vector<Sentence>& corpus, const Tagset& tagset,
                         double smoothing) {
  if (corpus.empty()) throw std::runtime_error("train_tagger: empty corpus");
  if (smoothing <= 0) throw std::runtime_error("train_tagger: smoothing must be positive");

  TaggerModel m;
  m.smoothing_ = smoothing;
  m.tags_ = tagset.tags;
  std::sort(m.tags_.begin(), m.tags_.end());
  for (size_t i = 0; i < m.tags_.size(); ++i) m.tag_ids_[m.tags_[i]] = static_cast<int>(i);
  for (const auto& tag : tagset.open_class) {
    int id = m.tag_id(tag);
    if (id < 0) throw std::runtime_error("train_tagger: open-class tag not in tagset: " + tag);
    m.open_class_.push_back(id);
  }
  std::sort(m.open_class_.begin(), m.open_class_.end());
  if (m.open_class_.empty())
    throw std::runtime_error("train_tagger: tagset declares no open-class tags");

  int t = m.tag_count();
  m.trans_.assign(t, std::vector<long>(t, 0));
  m.start_.assign(t, 0);
  m.end_.assign(t, 0);
  m.tag_total_.assign(t, 0);

  std::map<std::string, std::map<int, long>> emissions;
  for (size_t s = 0; s < corpus.size(); ++s) {
    const Sentence& sent = corpus[s];
    if (sent.empty()) continue;
    int prev = -1;
    for (const TaggedToken& tok : sent) {
      if (tok.tag.empty())
        throw std::runtime_error("train_tagger: token with empty tag in sentence " +
                                 std::to_string(s));
      int id = m.tag_id(tok.tag);
      if (id < 0)
        throw std::runtime_error("train_tagger: tag '" + tok.tag +
                                 "' not in tagset (sentence " + std::to_string(s) + ")");
      if (prev < 0)
        ++m.start_[id];
      else
        ++m.trans_[prev][id];
      ++emissions[tok.surface][id];
      ++m.tag_total_[id];
      prev = id;
    }
    ++m.end_[prev];
    ++m.sentence_total_;
  }
  if (m.sentence_total_ == 0) throw std::runtime_error("train_tagger: empty corpus");

  for (auto& [word, counts] : emissions) {
    auto& list = m.emit_[word];
    for (const auto& [id, count] : counts) list.emplace_back(id, count);
  }
  m.vocab_size_ = static_cast<long>(m.emit_.size());
  return m;
}

namespace {

std::vector<double> path_terms(const std::vector<std::string>& words,
                               const std::vector<int>& tag_ids, const TaggerModel& model) {
  if (words.empty() || words.size() != tag_ids.size())
    throw std::invalid_argument("path score: length mismatch");
  std::vector<double> terms;
  terms.reserve(2 * words.size() + 1);
  terms.push_back(model.log_start(tag_ids[0]));
  terms.push_back(model.log_emit(words[0], tag_ids[0]));
  for (size_t i = 1; i < words.size(); ++i) {
    terms.push_back(model.log_trans(tag_ids[i - 1], tag_ids[i]));
    terms.push_back(model.log_emit(words[i], tag_ids[i]));
  }
  terms.push_back(model.log_end(tag_ids.back()));
  return terms;
}

}  // namespace

double path_log_score(const std::vector<std::string>& words,
                      const std::vector<int>& tag_ids, const TaggerModel& model) {
  return canonical_sum(path_terms(words, tag_ids, model));
}

int compare_paths(const std::vector<std::string>& words, const std::vector<int>& tags_a,
                  const std::vector<int>& tags_b, const TaggerModel& model) {
  return compare_term_sums(path_terms(words, tags_a, model),
                           path_terms(words, tags_b, model));
}

namespace {

struct Cell {
  std::vector<double> terms;  // log terms of the prefix path
  std::vector<int> path;      // tag ids from position 0 through here
};

// Posterior tag distribution per position, via forward-backward over the
// same candidate sets the decoder uses.
std::vector<std::vector<double>> posteriors(const std::vector<std::string>& words,
                                            const std::vector<std::vector<int>>& cands,
                                            const TaggerModel& model) {
  size_t n = words.size();
  std::vector<std::vector<double>> fwd(n), bwd(n);
  for (size_t i = 0; i < n; ++i) {
    fwd[i].assign(cands[i].size(), kNegInf);
    bwd[i].assign(cands[i].size(), kNegInf);
  }
  for (size_t a = 0; a < cands[0].size(); ++a)
    fwd[0][a] = model.log_start(cands[0][a]) + model.log_emit(words[0], cands[0][a]);
  for (size_t i = 1; i < n; ++i) {
    for (size_t a = 0; a < cands[i].size(); ++a) {
      std::vector<double> terms;
      terms.reserve(cands[i - 1].size());
      for (size_t b = 0; b < cands[i - 1].size(); ++b)
        terms.push_back(fwd[i - 1][b] + model.log_trans(cands[i - 1][b], cands[i][a]));
      fwd[i][a] = log_sum_exp(terms) + model.log_emit(words[i], cands[i][a]);
    }
  }
  for (size_t a = 0; a < cands[n - 1].size(); ++a)
    bwd[n - 1][a] = model.log_end(cands[n - 1][a]);
  for (size_t i = n - 1; i-- > 0;) {
    for (size_t a = 0; a < cands[i].size(); ++a) {
      std::vector<double> terms;
      terms.reserve(cands[i + 1].size());
      for (size_t b = 0; b < cands[i + 1].size(); ++b)
        terms.push_back(model.log_trans(cands[i][a], cands[i + 1][b]) +
                        model.log_emit(words[i + 1], cands[i + 1][b]) + bwd[i + 1][b]);
      bwd[i][a] = log_sum_exp(terms);
    }
  }
  std::vector<std::vector<double>> post(n);
  for (size_t i = 0; i < n; ++i) {
    post[i].assign(cands[i].size(), kNegInf);
    for (size_t a = 0; a < cands[i].size(); ++a) post[i][a] = fwd[i][a] + bwd[i][a];
  }
  return post;
}

}  // namespace

Sentence tag_sentence(const std::vector<std::string>& words, const TaggerModel& model,
                      double alt_odds) {
  if (words.empty()) throw std::invalid_argument("tag_sentence: empty sentence");
  size_t n = words.size();
  std::vector<std::vector<int>> cands(n);
  for (size_t i = 0; i < n; ++i) cands[i] = model.candidate_tags(words[i]);

  // Viterbi under the exact score order; cells keep the full prefix so
  // equal-score paths resolve to the lexicographically smallest sequence.
  std::vector<std::vector<Cell>> chart(n);
  for (size_t i = 0; i < n; ++i) chart[i].resize(cands[i].size());
  for (size_t a = 0; a < cands[0].size(); ++a) {
    Cell& cell = chart[0][a];
    cell.terms = {model.log_start(cands[0][a]), model.log_emit(words[0], cands[0][a])};
    cell.path = {cands[0][a]};
  }
  for (size_t i = 1; i < n; ++i) {
    for (size_t a = 0; a < cands[i].size(); ++a) {
      Cell& cell = chart[i][a];
      double emit = model.log_emit(words[i], cands[i][a]);
      for (size_t b = 0; b < cands[i - 1].size(); ++b) {
        const Cell& prev = chart[i - 1][b];
        std::vector<double> terms = prev.terms;
        terms.push_back(model.log_trans(cands[i - 1][b], cands[i][a]));
        terms.push_back(emit);
        bool better;
        if (cell.path.empty()) {
          better = true;
        } else {
          int cmp = compare_term_sums(terms, cell.terms);
          if (cmp != 0)
            better = cmp > 0;
          else
            better = std::lexicographical_compare(prev.path.begin(), prev.path.end(),
                                                  cell.path.begin(), cell.path.end() - 1);
        }
        if (better) {
          cell.terms = std::move(terms);
          cell.path = prev.path;
          cell.path.push_back(cands[i][a]);
        }
      }
    }
  }
  const Cell* best = nullptr;
  std::vector<double> best_terms;
  for (size_t a = 0; a < cands[n - 1].size(); ++a) {
    const Cell& cell = chart[n - 1][a];
    std::vector<double> terms = cell.terms;
    terms.push_back(model.log_end(cands[n - 1][a]));
    bool better;
    if (best == nullptr) {
      better = true;
    } else {
      int cmp = compare_term_sums(terms, best_terms);
      if (cmp != 0)
        better = cmp > 0;
      else
        better = std::lexicographical_compare(cell.path.begin(), cell.path.end(),
                                              best->path.begin(), best->path.end());
    }
    if (better) {
      best = &cell;
      best_terms = std::move(terms);
    }
  }

  Sentence out(n);
  for (size_t i = 0; i < n; ++i) {
    out[i].surface = words[i];
    out[i].tag = model.tag_name(best->path[i]);
    out[i].index = static_cast<int>(i);
  }

  if (alt_odds > 0) {
    auto post = posteriors(words, cands, model);
    for (size_t i = 0; i < n; ++i) {
      double best_post = kNegInf;
      for (size_t a = 0; a < cands[i].size(); ++a)
        if (cands[i][a] == best->path[i]) best_post = post[i][a];
      for (size_t a = 0; a < cands[i].size(); ++a) {
        if (cands[i][a] == best->path[i]) continue;
        if (std::exp(post[i][a] - best_post) > alt_odds)
          out[i].alt_tags.push_back(model.tag_name(cands[i][a]));
      }
      std::sort(out[i].alt_tags.begin(), out[i].alt_tags.end());
    }
  }
  return out;
}

}  // namespace subcat
