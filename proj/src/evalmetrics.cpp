#include "subcat/evalmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

#include "subcat/textio.hpp"

namespace subcat {

PRResult prf_from_counts(const EvalCounts& counts) {
  if (counts.tp < 0 || counts.fp < 0 || counts.fn < 0)
    throw std::invalid_argument("prf_from_counts: negative count");
  PRResult r;
  r.counts = counts;
  if (counts.tp + counts.fp > 0)
    r.precision = static_cast<double>(counts.tp) / (counts.tp + counts.fp);
  if (counts.tp + counts.fn > 0)
    r.recall = static_cast<double>(counts.tp) / (counts.tp + counts.fn);
  return r;
}

PRResult type_prf(const std::set<std::string>& proposed, const std::set<std::string>& gold) {
  EvalCounts c;
  for (const auto& cls : proposed)
    gold.count(cls) ? ++c.tp : ++c.fp;
  for (const auto& cls : gold)
    if (!proposed.count(cls)) ++c.fn;
  return prf_from_counts(c);
}

std::optional<double> ranking_accuracy(const std::vector<std::string>& system,
                                       const std::vector<std::vector<std::string>>& correct) {
  std::map<std::string, int> sys_pos, gold_pos;
  for (size_t i = 0; i < system.size(); ++i) sys_pos[system[i]] = static_cast<int>(i);
  for (size_t g = 0; g < correct.size(); ++g)
    for (const std::string& cls : correct[g]) gold_pos[cls] = static_cast<int>(g);

  std::vector<std::string> common;
  for (const auto& [cls, pos] : sys_pos)
    if (gold_pos.count(cls)) common.push_back(cls);
  if (common.size() < 2) return std::nullopt;

  long pairs = 0, agree = 0;
  for (size_t i = 0; i < common.size(); ++i) {
    for (size_t j = i + 1; j < common.size(); ++j) {
      int ga = gold_pos[common[i]], gb = gold_pos[common[j]];
      if (ga == gb) continue;  // tied in the correct ranking
      ++pairs;
      int sa = sys_pos[common[i]], sb = sys_pos[common[j]];
      if ((sa < sb) == (ga < gb)) ++agree;
    }
  }
  if (pairs == 0) return std::nullopt;
  return static_cast<double>(agree) / pairs;
}

std::optional<double> token_recall(const std::set<std::string>& accepted,
                                   const std::map<std::string, long>& gold_token_counts) {
  long total = 0, covered = 0;
  for (const auto& [cls, count] : gold_token_counts) {
    total += count;
    if (accepted.count(cls)) covered += count;
  }
  if (total == 0) return std::nullopt;
  return static_cast<double>(covered) / total;
}

Bracketing bracketing_from_analysis(int sentence_id, const Analysis& analysis) {
  Bracketing b;
  b.sentence_id = sentence_id;
  auto all = leaves(analysis.root);
  b.length = static_cast<int>(all.size());
  std::set<std::pair<int, int>> spans;

  // Post-order walk mapping each node to its token span.
  std::function<int(const ParseNode*, int)> walk = [&](const ParseNode* node,
                                                       int start) -> int {
    if (node->leaf()) return start + 1;
    int pos = start;
    for (const NodePtr& child : node->children) pos = walk(child.get(), pos);
    if (pos - start >= 2) spans.insert({start, pos});
    return pos;
  };
  walk(analysis.root.get(), 0);
  b.spans.assign(spans.begin(), spans.end());
  return b;
}

namespace {

bool crosses(std::pair<int, int> a, std::pair<int, int> b) {
  bool overlap = a.first < b.second && b.first < a.second;
  if (!overlap) return false;
  bool a_in_b = b.first <= a.first && a.second <= b.second;
  bool b_in_a = a.first <= b.first && b.second <= a.second;
  return !a_in_b && !b_in_a;
}

}  // namespace

GeigResult geig(const Bracketing& candidate, const Bracketing& gold) {
  if (candidate.length != gold.length)
    throw std::invalid_argument("geig: sentence lengths differ");
  auto check = [&](const Bracketing& b) {
    for (auto [s, e] : b.spans)
      if (s < 0 || s >= e || e > b.length)
        throw std::invalid_argument("geig: span out of range");
  };
  check(candidate);
  check(gold);

  GeigResult r;
  r.candidate_count = static_cast<long>(candidate.spans.size());
  r.gold_count = static_cast<long>(gold.spans.size());
  std::multiset<std::pair<int, int>> unmatched(gold.spans.begin(), gold.spans.end());
  for (auto span : candidate.spans) {
    auto hit = unmatched.find(span);
    if (hit != unmatched.end()) {
      ++r.matched;
      unmatched.erase(hit);
    }
    for (auto g : gold.spans) {
      if (crosses(span, g)) {
        ++r.crossings;
        break;
      }
    }
  }
  if (r.candidate_count > 0)
    r.precision = static_cast<double>(r.matched) / r.candidate_count;
  if (r.gold_count > 0) r.recall = static_cast<double>(r.matched) / r.gold_count;
  return r;
}

// ---- t distribution ----------------------------------------------------

namespace {

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Continued fraction for the regularized incomplete beta (Lentz). The
// first term is folded into the initialization, so the loop starts at the
// second.
double incbeta_cf(double x, double a, double b) {
  const double tiny = 1e-300;
  const double eps = 1e-15;
  double c = 1.0;
  double d = 1.0 - (a + b) * x / (a + 1.0);
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double result = d;
  for (int i = 2; i <= 600; ++i) {
    double m = (i % 2 == 0) ? i / 2 : (i - 1) / 2;
    double numer;
    if (i % 2 == 0)
      numer = m * (b - m) * x / ((a + 2.0 * m - 1.0) * (a + 2.0 * m));
    else
      numer = -(a + m) * (a + b + m) * x / ((a + 2.0 * m) * (a + 2.0 * m + 1.0));
    d = 1.0 + numer * d;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    c = 1.0 + numer / c;
    if (std::fabs(c) < tiny) c = tiny;
    double mult = c * d;
    result *= mult;
    if (std::fabs(mult - 1.0) < eps) break;
  }
  return result;
}

double reg_incbeta(double x, double a, double b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double front = std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * incbeta_cf(x, a, b) / a;
  double front_sym = std::exp(b * std::log1p(-x) + a * std::log(x) - log_beta(b, a));
  return 1.0 - front_sym * incbeta_cf(1.0 - x, b, a) / b;
}

}  // namespace

double t_tail_p(double t, double df) {
  if (!(df > 0)) throw std::invalid_argument("t_tail_p: df must be positive");
  double x = df / (t * t + df);
  double half = reg_incbeta(x, df / 2.0, 0.5) / 2.0;
  return t >= 0 ? half : 1.0 - half;
}

TTestResult paired_t(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("paired_t: length mismatch");
  if (a.size() < 2) throw std::invalid_argument("paired_t: need at least two pairs");
  size_t n = a.size();
  std::vector<double> d(n);
  for (size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : d) ss += (x - mean) * (x - mean);
  double var = ss / static_cast<double>(n - 1);

  TTestResult r;
  r.df = static_cast<int>(n) - 1;
  if (var == 0.0) {
    if (mean == 0.0) {
      // Identical score lists: t = 0 under the symmetric null.
      r.t = 0.0;
      r.p = 0.5;
    } else {
      r.t = mean > 0 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
      r.status = "zero variance of differences";
    }
    return r;
  }
  double sd = std::sqrt(var);
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  r.p = t_tail_p(r.t, r.df);
  return r;
}

// ---- gold entries and bracket files -------------------------------------

std::map<std::string, GoldEntry> load_gold(const std::string& text) {
  std::map<std::string, GoldEntry> gold;
  GoldEntry* current = nullptr;
  for (const auto& line : config_lines(text)) {
    auto fields = split_ws(line.text);
    if (fields[0] == "VERB") {
      if (fields.size() != 2)
        throw std::runtime_error("gold: bad VERB line " + std::to_string(line.number));
      current = &gold[fields[1]];
      current->verb = fields[1];
      continue;
    }
    if (current == nullptr)
      throw std::runtime_error("gold: entry line before VERB at line " +
                               std::to_string(line.number));
    if (fields[0] == "RANK") {
      current->ranking.clear();
      for (size_t i = 1; i < fields.size(); ++i) {
        auto group = split(fields[i], '=');
        current->ranking.push_back(group);
      }
      for (const auto& group : current->ranking)
        for (const auto& cls : group)
          if (!current->classes.count(cls))
            throw std::runtime_error("gold: RANK names unlisted class " + cls);
      continue;
    }
    if (fields[0] == "TOKENS") {
      if (fields.size() != 3)
        throw std::runtime_error("gold: bad TOKENS line " + std::to_string(line.number));
      auto count = parse_long(fields[2]);
      if (!count || *count < 0)
        throw std::runtime_error("gold: bad TOKENS count at line " + std::to_string(line.number));
      current->token_counts[fields[1]] = *count;
      continue;
    }
    if (fields.size() != 1)
      throw std::runtime_error("gold: malformed line " + std::to_string(line.number));
    current->classes.insert(fields[0]);
  }
  return gold;
}

std::string format_gold(const std::map<std::string, GoldEntry>& gold) {
  std::string out;
  for (const auto& [verb, entry] : gold) {
    out += "VERB " + verb + "\n";
    for (const auto& cls : entry.classes) out += cls + "\n";
    if (!entry.ranking.empty()) {
      out += "RANK";
      for (const auto& group : entry.ranking) out += " " + join(group, "=");
      out += "\n";
    }
    for (const auto& [cls, count] : entry.token_counts)
      out += "TOKENS " + cls + " " + std::to_string(count) + "\n";
  }
  return out;
}

std::map<int, Bracketing> load_brackets(const std::string& text) {
  std::map<int, Bracketing> out;
  for (const auto& line : config_lines(text)) {
    auto fields = split_ws(line.text);
    if (fields[0] == "LEN") {
      if (fields.size() != 3) throw std::runtime_error("brackets: bad LEN line");
      auto id = parse_long(fields[1]);
      auto len = parse_long(fields[2]);
      if (!id || !len) throw std::runtime_error("brackets: bad LEN line");
      out[static_cast<int>(*id)].sentence_id = static_cast<int>(*id);
      out[static_cast<int>(*id)].length = static_cast<int>(*len);
      continue;
    }
    if (fields.size() != 3)
      throw std::runtime_error("brackets: expected 'sentence_id start end' at line " +
                               std::to_string(line.number));
    auto id = parse_long(fields[0]);
    auto start = parse_long(fields[1]);
    auto end = parse_long(fields[2]);
    if (!id || !start || !end) throw std::runtime_error("brackets: bad triple");
    auto& b = out[static_cast<int>(*id)];
    b.sentence_id = static_cast<int>(*id);
    b.spans.emplace_back(static_cast<int>(*start), static_cast<int>(*end));
  }
  for (auto& [id, b] : out) {
    std::sort(b.spans.begin(), b.spans.end());
    b.spans.erase(std::unique(b.spans.begin(), b.spans.end()), b.spans.end());
  }
  return out;
}

std::string format_brackets(const std::map<int, Bracketing>& brackets) {
  std::string out;
  for (const auto& [id, b] : brackets) {
    out += "LEN " + std::to_string(id) + " " + std::to_string(b.length) + "\n";
    for (auto [s, e] : b.spans)
      out += std::to_string(id) + " " + std::to_string(s) + " " + std::to_string(e) + "\n";
  }
  return out;
}

}  // namespace subcat
