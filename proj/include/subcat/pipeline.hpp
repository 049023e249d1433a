#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace subcat {

// Exit codes shared with the CLI: 1 for configuration problems, 2 for a
// missing stage artifact.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct MissingArtifact : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  // Inputs.
  std::string corpus;        // raw text, or token_TAG when pretagged
  std::string train_corpus;  // gold-tagged corpus for tagger training
  bool pretagged = false;
  std::string tagset;
  std::string ruleset;  // lemma rules
  std::string grammar;
  std::string inventory;
  std::string priors;
  std::string stats;  // optional override; classify derives one otherwise
  std::string gold;
  std::string brackets;      // optional gold bracketings for rerank
  std::string seed_lexicon;  // synth seed distributions
  // Outputs.
  std::string workdir = ".";
  std::string lexicon;  // defaults to <workdir>/lexicon.txt

  std::string corpus_id;
  double threshold = 0.05;
  int k = 10;
  std::uint64_t seed = 1;
  int synth_n = 100;
  int workers = 1;
  std::string mode = "smoothed";  // rerank weighting: raw|smoothed
  double alt_odds = 0.1;
  double smoothing = 0.5;
  int accept_over = 0;  // optional evidence shortcut; 0 = off
  double rerank_weight = 1.0;

  std::string lexicon_path() const;
  std::string artifact(const std::string& name) const;
  // Hash over the canonical key=value rendering; recorded in the lexicon.
  std::string config_hash() const;
};

// "key = value" lines, "#" comments.
PipelineConfig load_config(const std::string& text);
PipelineConfig load_config_file(const std::string& path);

extern const std::vector<std::string> kStageOrder;

// Runs the requested stages in canonical order. Throws ConfigError for
// invalid configuration and MissingArtifact when a stage's input artifact
// does not exist; both name the offender.
void run_pipeline(const PipelineConfig& config, std::vector<std::string> stages);

}  // namespace subcat
