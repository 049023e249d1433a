#include "subcat/classify.hpp"

#include <set>
#include <stdexcept>

#include "subcat/textio.hpp"

namespace subcat {

namespace {

// "subj:NP[head=it]" / "slot:PP[prep=to,psubcat=NP]"
SlotConstraint parse_constraint(const std::string& text, int line) {
  SlotConstraint c;
  std::string body = text;
  size_t bracket = body.find('[');
  if (bracket != std::string::npos) {
    if (body.back() != ']')
      throw std::runtime_error("inventory: unterminated '[' at line " + std::to_string(line));
    std::string inner = body.substr(bracket + 1, body.size() - bracket - 2);
    body = body.substr(0, bracket);
    for (const std::string& part : split(inner, ',')) {
      auto kv = split(part, '=');
      if (kv.size() != 2 || kv[1].empty())
        throw std::runtime_error("inventory: bad constraint '" + part + "' at line " +
                                 std::to_string(line));
      if (kv[1] == "*") continue;  // explicit wildcard
      if (kv[0] == "head") c.head_lemma = to_lower(kv[1]);
      else if (kv[0] == "prep") c.prep = to_lower(kv[1]);
      else if (kv[0] == "psubcat") c.psubcat = kv[1];
      else
        throw std::runtime_error("inventory: unknown constraint key '" + kv[0] +
                                 "' at line " + std::to_string(line));
    }
  }
  c.cat = body;
  if (c.cat.empty())
    throw std::runtime_error("inventory: slot without category at line " + std::to_string(line));
  return c;
}

int constraint_specificity(const SlotConstraint& c) {
  return (c.head_lemma ? 1 : 0) + (c.prep ? 1 : 0) + (c.psubcat ? 1 : 0);
}

std::string signature(const SubcatClass& cls) {
  std::string sig = cls.vsubcat;
  auto add = [&sig](const SlotConstraint& c) {
    sig += "|" + c.cat + ":" + (c.head_lemma ? *c.head_lemma : "*") + ":" +
           (c.prep ? *c.prep : "*") + ":" + (c.psubcat ? *c.psubcat : "*");
  };
  for (const auto& slot : cls.slots) add(slot);
  sig += cls.subject ? "|subj" : "|nosubj";
  if (cls.subject) add(*cls.subject);
  sig += cls.passive_ok ? "|pok" : "|";
  return sig;
}

bool slot_matches(const PatternSlot& slot, const SlotConstraint& c) {
  if (slot.cat != c.cat) return false;
  if (slot.pp) {
    if (c.head_lemma) return false;
    if (c.prep && to_lower(slot.pp->prep) != *c.prep) return false;
    if (c.psubcat && slot.pp->psubcat != *c.psubcat) return false;
    return true;
  }
  if (c.prep || c.psubcat) return false;
  if (c.head_lemma) {
    if (!slot.head) return false;
    if (to_lower(slot.head->lemma) != *c.head_lemma) return false;
  }
  return true;
}

bool class_matches(const Pattern& pat, const SubcatClass& cls) {
  if (pat.vsubcat != cls.vsubcat) return false;
  if (pat.passive && !cls.passive_ok) return false;
  if (pat.slots.size() != cls.slots.size()) return false;
  for (size_t i = 0; i < pat.slots.size(); ++i)
    if (!slot_matches(pat.slots[i], cls.slots[i])) return false;
  if (cls.subject) {
    if (!pat.subject) return false;
    if (cls.subject->head_lemma && to_lower(pat.subject->lemma) != *cls.subject->head_lemma)
      return false;
  }
  return true;
}

}  // namespace

const SubcatClass* ClassInventory::find(const std::string& id) const {
  for (const SubcatClass& cls : classes)
    if (cls.id == id) return &cls;
  return nullptr;
}

ClassInventory load_inventory(const std::string& text) {
  ClassInventory inv;
  std::set<std::string> ids;
  std::set<std::string> signatures;
  for (const auto& line : config_lines(text)) {
    auto fields = split_ws(line.text);
    if (fields.size() < 3)
      throw std::runtime_error("inventory: class needs ID NAME VSUBCAT=v (line " +
                               std::to_string(line.number) + ")");
    SubcatClass cls;
    cls.id = fields[0];
    cls.name = fields[1];
    if (fields[2].rfind("VSUBCAT=", 0) != 0)
      throw std::runtime_error("inventory: expected VSUBCAT= at line " +
                               std::to_string(line.number));
    cls.vsubcat = fields[2].substr(8);
    for (size_t i = 3; i < fields.size(); ++i) {
      const std::string& f = fields[i];
      if (f == "passive-ok") {
        cls.passive_ok = true;
      } else if (f.rfind("slot:", 0) == 0) {
        cls.slots.push_back(parse_constraint(f.substr(5), line.number));
      } else if (f.rfind("subj:", 0) == 0) {
        cls.subject = parse_constraint(f.substr(5), line.number);
      } else {
        throw std::runtime_error("inventory: unexpected field '" + f + "' at line " +
                                 std::to_string(line.number));
      }
    }
    cls.specificity = 0;
    for (const auto& slot : cls.slots) cls.specificity += constraint_specificity(slot);
    if (cls.subject) cls.specificity += 1 + constraint_specificity(*cls.subject);
    cls.order = static_cast<int>(inv.classes.size());
    if (!ids.insert(cls.id).second)
      throw std::runtime_error("inventory: duplicate class id " + cls.id);
    if (!signatures.insert(signature(cls)).second)
      throw std::runtime_error("inventory: duplicate constraint signature for " + cls.id);
    inv.classes.push_back(std::move(cls));
  }
  if (inv.classes.empty()) throw std::runtime_error("inventory: no classes");
  return inv;
}

std::optional<std::string> classify(const Pattern& pattern, const ClassInventory& inventory) {
  const SubcatClass* best = nullptr;
  for (const SubcatClass& cls : inventory.classes) {
    if (!class_matches(pattern, cls)) continue;
    if (best == nullptr || cls.specificity > best->specificity) best = &cls;
  }
  if (best == nullptr) return std::nullopt;
  return best->id;
}

}  // namespace subcat
