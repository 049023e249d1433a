#include "subcat/lemmatizer.hpp"

#include <stdexcept>

#include "subcat/textio.hpp"

namespace subcat {

LemmaRuleset load_lemma_rules(const std::string& text) {
  LemmaRuleset rs;
  for (const auto& line : config_lines(text)) {
    auto fields = split_ws(line.text);
    if (fields[0] == "EXC") {
      if (fields.size() != 4)
        throw std::runtime_error("lemma rules: EXC needs surface TAG lemma (line " +
                                 std::to_string(line.number) + ")");
      rs.exceptions[{to_lower(fields[1]), fields[2]}] = fields[3];
    } else if (fields[0] == "RULE") {
      if (fields.size() != 4)
        throw std::runtime_error("lemma rules: RULE needs TAGPREFIX suffix replacement (line " +
                                 std::to_string(line.number) + ")");
      LemmaRule rule;
      rule.tag_prefix = fields[1];
      rule.suffix = fields[2];
      rule.replacement = fields[3] == "-" ? "" : fields[3];
      if (rule.suffix.empty() || rule.suffix == "-")
        throw std::runtime_error("lemma rules: empty suffix (line " +
                                 std::to_string(line.number) + ")");
      rs.rules.push_back(std::move(rule));
    } else {
      throw std::runtime_error("lemma rules: unknown directive '" + fields[0] + "' (line " +
                               std::to_string(line.number) + ")");
    }
  }
  return rs;
}

std::string lemma_of(const std::string& surface, const std::string& tag,
                     const LemmaRuleset& rules) {
  std::string word = to_lower(surface);
  auto exc = rules.exceptions.find({word, tag});
  if (exc != rules.exceptions.end()) return exc->second;
  for (const LemmaRule& rule : rules.rules) {
    if (tag.rfind(rule.tag_prefix, 0) != 0) continue;
    if (word.size() <= rule.suffix.size()) continue;
    if (word.compare(word.size() - rule.suffix.size(), rule.suffix.size(), rule.suffix) != 0)
      continue;
    return word.substr(0, word.size() - rule.suffix.size()) + rule.replacement;
  }
  return word;
}

TaggedToken lemmatize(const TaggedToken& token, const LemmaRuleset& rules) {
  if (token.tag.empty()) throw std::invalid_argument("lemmatize: token has no tag");
  TaggedToken out = token;
  out.lemma = lemma_of(token.surface, token.tag, rules);
  if (out.lemma.empty()) out.lemma = to_lower(token.surface);
  return out;
}

void lemmatize_sentence(Sentence& sentence, const LemmaRuleset& rules) {
  for (TaggedToken& tok : sentence) tok = lemmatize(tok, rules);
}

}  // namespace subcat
