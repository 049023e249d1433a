#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subcat/patterns.hpp"

namespace subcat {

// Per-slot requirement. Category is structural; head/prep/psubcat are the
// parameterizing constraints ("*" in the file means unconstrained).
struct SlotConstraint {
  std::string cat;
  std::optional<std::string> head_lemma;  // closed-class cue, case-insensitive
  std::optional<std::string> prep;
  std::optional<std::string> psubcat;
};

struct SubcatClass {
  std::string id;
  std::string name;
  std::string vsubcat;
  std::vector<SlotConstraint> slots;
  std::optional<SlotConstraint> subject;  // e.g. dummy-it subjects
  bool passive_ok = false;
  int specificity = 0;  // number of non-wildcard constraints
  int order = 0;        // position in the inventory file
};

struct ClassInventory {
  std::vector<SubcatClass> classes;
  int size() const { return static_cast<int>(classes.size()); }
  const SubcatClass* find(const std::string& id) const;
};

// One class per line:
//   ID NAME VSUBCAT=v slot:CAT[head=l|prep=l|psubcat=p]... [subj:CAT[head=l]] [passive-ok]
// Duplicate ids and duplicate constraint signatures are errors.
ClassInventory load_inventory(const std::string& text);

// The unique most-specific matching class; residual ties resolve to
// inventory order. Empty optional means unclassifiable.
std::optional<std::string> classify(const Pattern& pattern, const ClassInventory& inventory);

}  // namespace subcat
