#include "subcat/synth.hpp"

#include <algorithm>
#include <stdexcept>

#include "subcat/textio.hpp"

namespace subcat {

namespace {

// splitmix64; the standard distributions are not pinned across library
// implementations, so sampling is done by hand.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  size_t below(size_t n) { return static_cast<size_t>(next() % n); }
};

const std::vector<std::string> kNouns = {"dog",  "man",   "woman", "book", "door",
                                         "cup",  "table", "plan",  "team", "letter",
                                         "road", "house", "river", "garden"};
const std::vector<std::string> kInnerVerbs = {"wait", "talk", "stay"};
const std::vector<std::string> kPrepPool = {"to", "on", "for", "with", "at", "in",
                                            "near", "under"};

std::string past_form(const std::string& lemma) {
  if (!lemma.empty() && lemma.back() == 'e') return lemma + "d";
  return lemma + "ed";
}

std::string ing_form(const std::string& lemma) {
  if (!lemma.empty() && lemma.back() == 'e') return lemma.substr(0, lemma.size() - 1) + "ing";
  return lemma + "ing";
}

struct Piece {
  std::string surface;
  std::string tag;
};

void add(std::vector<Piece>& out, const std::string& surface, const std::string& tag) {
  out.push_back({surface, tag});
}

class Realizer {
 public:
  Realizer(const ClassInventory& inventory, const Grammar& grammar)
      : inv_(inventory), g_(grammar) {}

  // Tokens for one sentence exemplifying the class, or an explanation of
  // why the class cannot be realized.
  std::vector<Piece> realize(const std::string& verb, const SubcatClass& cls, Rng& rng) {
    check_vp_rule(cls);
    std::vector<Piece> out;
    Pattern pattern;
    pattern.predicate = verb;
    pattern.vsubcat = cls.vsubcat;

    if (cls.subject && cls.subject->head_lemma) {
      if (*cls.subject->head_lemma != "it")
        fail(cls, "only dummy-it subject cues are supported");
      add(out, "it", "PPH1");
      pattern.subject = HeadRef{"it", "PPH1", 0};
    } else {
      realize_subject(out, pattern, rng);
    }
    add(out, past_form(verb), "VVD");

    for (const SlotConstraint& slot : cls.slots) {
      PatternSlot pslot;
      pslot.cat = slot.cat;
      if (slot.cat == "NP") {
        realize_np(out, rng, &pslot);
      } else if (slot.cat == g_.pp_category) {
        realize_pp(out, slot, cls, rng, &pslot);
      } else if (slot.cat == "SC") {
        add(out, "that", "CST");
        pslot.head = HeadRef{"that", "CST", 0};
        realize_clause(out, rng);
      } else if (slot.cat == "SWH") {
        add(out, "whether", "CSW");
        pslot.head = HeadRef{"whether", "CSW", 0};
        realize_clause(out, rng);
      } else if (slot.cat == "VPI") {
        add(out, "to", "TO");
        const std::string& v = kInnerVerbs[rng.below(kInnerVerbs.size())];
        add(out, v, "VV0");
        pslot.head = HeadRef{v, "VV0", 0};
      } else {
        fail(cls, "no template for slot category " + slot.cat);
      }
      pattern.slots.push_back(std::move(pslot));
    }

    auto classified = classify(pattern, inv_);
    if (!classified || *classified != cls.id)
      fail(cls, "realized pattern classifies as " +
                    (classified ? *classified : std::string("UNCLASSIFIABLE")));
    return out;
  }

 private:
  [[noreturn]] void fail(const SubcatClass& cls, const std::string& why) const {
    throw std::runtime_error("gen_synth_corpus: class " + cls.id + " unrealizable: " + why);
  }

  // The grammar must provide a VP argument rule matching the class shape.
  void check_vp_rule(const SubcatClass& cls) const {
    const auto* ids = g_.lhs_rules(g_.vp_category);
    if (ids != nullptr) {
      for (int id : *ids) {
        const GrammarRule& rule = g_.rules[id];
        if (rule.vsubcat != cls.vsubcat) continue;
        std::vector<std::string> args;
        for (size_t i = 0; i < rule.rhs.size(); ++i)
          if (rule.slots[i] == SlotMark::Arg) args.push_back(rule.rhs[i]);
        if (args.size() != cls.slots.size()) continue;
        bool ok = true;
        for (size_t i = 0; i < args.size(); ++i)
          if (args[i] != cls.slots[i].cat) ok = false;
        if (ok) return;
      }
    }
    fail(cls, "no VP rule with VSUBCAT=" + cls.vsubcat + " and matching argument slots");
  }

  void realize_subject(std::vector<Piece>& out, Pattern& pattern, Rng& rng) const {
    if (rng.uniform() < 0.5) {
      add(out, "he", "PPHS1");
      pattern.subject = HeadRef{"he", "PPHS1", 0};
    } else {
      const std::string& noun = kNouns[rng.below(kNouns.size())];
      add(out, "the", "AT");
      add(out, noun, "NN1");
      pattern.subject = HeadRef{noun, "NN1", 0};
    }
  }

  void realize_np(std::vector<Piece>& out, Rng& rng, PatternSlot* slot) const {
    const std::string& noun = kNouns[rng.below(kNouns.size())];
    if (rng.uniform() < 0.3)
      add(out, "his", "APP$");
    else
      add(out, "the", "AT");
    add(out, noun, "NN1");
    slot->head = HeadRef{noun, "NN1", 0};
  }

  void realize_pp(std::vector<Piece>& out, const SlotConstraint& constraint,
                  const SubcatClass& cls, Rng& rng, PatternSlot* slot) const {
    std::string psubcat = constraint.psubcat ? *constraint.psubcat : "NP";
    std::vector<std::string> preps =
        constraint.prep ? std::vector<std::string>{*constraint.prep} : kPrepPool;

    // The chosen preposition must classify back to the seeded class, not
    // to a more specific parameterized sibling.
    for (const std::string& prep : preps) {
      Pattern probe;
      probe.vsubcat = cls.vsubcat;
      probe.subject = HeadRef{"he", "PPHS1", 0};
      for (const SlotConstraint& sc : cls.slots) {
        PatternSlot ps;
        ps.cat = sc.cat;
        if (sc.cat == g_.pp_category) {
          PPRecord pp;
          pp.psubcat = sc.psubcat ? *sc.psubcat : psubcat;
          pp.prep = (&sc == &constraint) ? prep : (sc.prep ? *sc.prep : "to");
          pp.complement_heads.push_back(HeadRef{"dog", "NN1", 0});
          ps.pp = std::move(pp);
        } else {
          ps.head = HeadRef{sc.head_lemma ? *sc.head_lemma : "dog", "NN1", 0};
        }
        probe.slots.push_back(std::move(ps));
      }
      auto cls_id = classify(probe, inv_);
      if (!cls_id || *cls_id != cls.id) continue;

      PPRecord pp;
      pp.psubcat = psubcat;
      pp.prep = prep;
      add(out, prep, "II");
      const std::string& noun = kNouns[rng.below(kNouns.size())];
      add(out, "the", "AT");
      add(out, noun, "NN1");
      pp.complement_heads.push_back(HeadRef{noun, "NN1", 0});
      if (psubcat == "SING") {
        const std::string& v = kInnerVerbs[rng.below(kInnerVerbs.size())];
        const std::string& obj = kNouns[rng.below(kNouns.size())];
        add(out, ing_form(v), "VVG");
        add(out, "the", "AT");
        add(out, obj, "NN1");
        pp.complement_heads.push_back(HeadRef{v, "VVG", 0});
      }
      slot->pp = std::move(pp);
      return;
    }
    fail(cls, "no preposition realizes psubcat " + psubcat + " as this class");
  }

  void realize_clause(std::vector<Piece>& out, Rng& rng) const {
    add(out, "he", "PPHS1");
    add(out, past_form(kInnerVerbs[rng.below(kInnerVerbs.size())]), "VVD");
  }

  const ClassInventory& inv_;
  const Grammar& g_;
};

}  // namespace

std::vector<SeedEntry> load_seed(const std::string& text) {
  std::vector<SeedEntry> seed;
  SeedEntry* current = nullptr;
  for (const auto& line : config_lines(text)) {
    auto fields = split_ws(line.text);
    if (fields[0] == "VERB") {
      if (fields.size() != 2) throw std::runtime_error("seed: bad VERB line");
      seed.push_back(SeedEntry{fields[1], {}});
      current = &seed.back();
      continue;
    }
    if (current == nullptr || fields.size() != 2)
      throw std::runtime_error("seed: expected 'class weight' at line " +
                               std::to_string(line.number));
    auto weight = parse_double(fields[1]);
    if (!weight || *weight <= 0) throw std::runtime_error("seed: bad weight for " + fields[0]);
    current->class_probs.emplace_back(fields[0], *weight);
  }
  for (SeedEntry& entry : seed) {
    if (entry.class_probs.empty())
      throw std::runtime_error("seed: verb " + entry.verb + " has no classes");
    double total = 0;
    for (const auto& [cls, w] : entry.class_probs) total += w;
    for (auto& [cls, w] : entry.class_probs) w /= total;
  }
  return seed;
}

SynthResult gen_synth_corpus(const std::vector<SeedEntry>& seed,
                             const ClassInventory& inventory, const Grammar& grammar,
                             std::uint64_t rng_seed, int n_sentences) {
  if (n_sentences < 0) throw std::invalid_argument("gen_synth_corpus: negative count");
  if (seed.empty()) throw std::invalid_argument("gen_synth_corpus: empty seed lexicon");
  Realizer realizer(inventory, grammar);
  Rng rng(rng_seed);

  // Validate realizability up front so errors fire even for n = 0.
  for (const SeedEntry& entry : seed) {
    for (const auto& [cls_id, prob] : entry.class_probs) {
      const SubcatClass* cls = inventory.find(cls_id);
      if (cls == nullptr)
        throw std::runtime_error("gen_synth_corpus: class " + cls_id +
                                 " is not in the inventory");
      Rng probe(rng_seed ^ 0x5eedull);
      realizer.realize(entry.verb, *cls, probe);
    }
  }

  SynthResult result;
  std::map<std::string, std::map<std::string, long>> realized;
  for (int i = 0; i < n_sentences; ++i) {
    const SeedEntry& entry = seed[static_cast<size_t>(i) % seed.size()];
    double u = rng.uniform();
    const std::string* cls_id = &entry.class_probs.back().first;
    double cum = 0;
    for (const auto& [cls, prob] : entry.class_probs) {
      cum += prob;
      if (u < cum) {
        cls_id = &cls;
        break;
      }
    }
    const SubcatClass* cls = inventory.find(*cls_id);
    auto pieces = realizer.realize(entry.verb, *cls, rng);
    Sentence sent;
    for (size_t k = 0; k < pieces.size(); ++k) {
      TaggedToken tok;
      tok.surface = pieces[k].surface;
      tok.tag = pieces[k].tag;
      tok.index = static_cast<int>(k);
      sent.push_back(std::move(tok));
    }
    int sid = static_cast<int>(result.corpus.size());
    result.corpus.push_back(std::move(sent));
    result.labels.push_back(SynthLabel{sid, entry.verb, *cls_id});
    ++realized[entry.verb][*cls_id];
  }

  for (const SeedEntry& entry : seed) {
    GoldEntry gold;
    gold.verb = entry.verb;
    for (const auto& [cls, prob] : entry.class_probs) gold.classes.insert(cls);
    // Seed ranking: descending probability; equal weights form tie
    // groups.
    std::vector<std::pair<std::string, double>> ordered = entry.class_probs;
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    size_t i = 0;
    while (i < ordered.size()) {
      std::vector<std::string> group{ordered[i].first};
      size_t j = i + 1;
      while (j < ordered.size() && ordered[j].second == ordered[i].second)
        group.push_back(ordered[j++].first);
      gold.ranking.push_back(std::move(group));
      i = j;
    }
    auto it = realized.find(entry.verb);
    if (it != realized.end()) gold.token_counts.insert(it->second.begin(), it->second.end());
    result.gold[entry.verb] = std::move(gold);
  }
  return result;
}

std::string format_labels(const std::vector<SynthLabel>& labels) {
  std::string out;
  for (const SynthLabel& label : labels)
    out += std::to_string(label.sentence_id) + " " + label.verb + " " + label.class_id + "\n";
  return out;
}

std::vector<SynthLabel> parse_labels(const std::string& text) {
  std::vector<SynthLabel> out;
  for (const auto& line : config_lines(text)) {
    auto fields = split_ws(line.text);
    if (fields.size() != 3) throw std::runtime_error("labels: expected 'id verb class'");
    auto id = parse_long(fields[0]);
    if (!id) throw std::runtime_error("labels: bad sentence id");
    out.push_back(SynthLabel{static_cast<int>(*id), fields[1], fields[2]});
  }
  return out;
}

}  // namespace subcat
