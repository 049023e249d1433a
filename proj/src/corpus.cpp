#include "subcat/corpus.hpp"

#include <stdexcept>

#include "subcat/textio.hpp"

namespace subcat {

bool Tagset::contains(const std::string& tag) const {
  for (const auto& t : tags)
    if (t == tag) return true;
  return false;
}

Tagset load_tagset(const std::string& text) {
  Tagset ts;
  std::set<std::string> seen;
  for (const auto& line : config_lines(text)) {
    auto fields = split_ws(line.text);
    const std::string& tag = fields[0];
    if (!seen.insert(tag).second)
      throw std::runtime_error("tagset: duplicate tag " + tag + " at line " +
                               std::to_string(line.number));
    ts.tags.push_back(tag);
    for (size_t i = 1; i < fields.size(); ++i) {
      if (fields[i] == "open") ts.open_class.insert(tag);
      else if (fields[i] == "verb") ts.verb_tags.insert(tag);
      else
        throw std::runtime_error("tagset: unknown flag '" + fields[i] +
                                 "' at line " + std::to_string(line.number));
    }
  }
  if (ts.tags.empty()) throw std::runtime_error("tagset: no tags declared");
  return ts;
}

std::vector<std::vector<std::string>> parse_raw_corpus(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  for (const std::string& line : split(text, '\n')) {
    auto toks = split_ws(line);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

namespace {

TaggedToken parse_token(const std::string& item, int index, int sentence_number) {
  size_t us = item.rfind('_');
  if (us == std::string::npos || us == 0 || us + 1 >= item.size())
    throw std::runtime_error("tagged corpus: malformed token '" + item +
                             "' in sentence " + std::to_string(sentence_number));
  TaggedToken tok;
  tok.surface = item.substr(0, us);
  tok.tag = item.substr(us + 1);
  tok.index = index;
  return tok;
}

}  // namespace

std::vector<Sentence> parse_tagged_corpus(const std::string& text) {
  std::vector<Sentence> out;
  int number = 0;
  for (const std::string& line : split(text, '\n')) {
    auto items = split_ws(line);
    if (items.empty()) continue;
    Sentence sent;
    for (size_t i = 0; i < items.size(); ++i)
      sent.push_back(parse_token(items[i], static_cast<int>(i), number));
    out.push_back(std::move(sent));
    ++number;
  }
  return out;
}

std::string format_tagged_corpus(const std::vector<Sentence>& corpus) {
  std::string out;
  for (const Sentence& sent : corpus) {
    for (size_t i = 0; i < sent.size(); ++i) {
      if (i) out += ' ';
      out += sent[i].surface;
      out += '_';
      out += sent[i].tag;
    }
    out += '\n';
  }
  return out;
}

std::string format_lemma_corpus(const std::vector<Sentence>& corpus) {
  std::string out;
  for (const Sentence& sent : corpus) {
    for (size_t i = 0; i < sent.size(); ++i) {
      if (i) out += ' ';
      out += sent[i].lemma.empty() ? sent[i].surface : sent[i].lemma;
      out += '_';
      out += sent[i].tag;
    }
    out += '\n';
  }
  return out;
}

std::vector<Sentence> parse_lemma_corpus(const std::string& text) {
  auto corpus = parse_tagged_corpus(text);
  for (Sentence& sent : corpus)
    for (TaggedToken& tok : sent) tok.lemma = tok.surface;
  return corpus;
}

}  // namespace subcat
