#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subcat/pipeline.hpp"
#include "subcat/textio.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string stages;
  std::optional<double> threshold;
  std::optional<int> k;
  std::optional<long> seed;
  std::optional<int> workers;
  std::optional<std::string> mode;
  std::optional<std::string> workdir;
  std::optional<int> synth_n;
};

void add_common(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "pipeline config file")->required();
  cmd->add_option("--threshold", ov.threshold, "binomial filter threshold");
  cmd->add_option("--k", ov.k, "analyses per sentence");
  cmd->add_option("--seed", ov.seed, "rng seed");
  cmd->add_option("--workers", ov.workers, "worker threads");
  cmd->add_option("--mode", ov.mode, "rerank weighting: raw|smoothed");
  cmd->add_option("--workdir", ov.workdir, "artifact directory");
  cmd->add_option("--synth-n", ov.synth_n, "synthetic sentence count");
}

int run_stages(const Overrides& ov, const std::vector<std::string>& stages) {
  try {
    subcat::PipelineConfig cfg = subcat::load_config_file(ov.config_path);
    if (ov.threshold) cfg.threshold = *ov.threshold;
    if (ov.k) cfg.k = *ov.k;
    if (ov.seed) cfg.seed = static_cast<std::uint64_t>(*ov.seed);
    if (ov.workers) cfg.workers = *ov.workers;
    if (ov.mode) cfg.mode = *ov.mode;
    if (ov.workdir) cfg.workdir = *ov.workdir;
    if (ov.synth_n) cfg.synth_n = *ov.synth_n;
    subcat::run_pipeline(cfg, stages);
    return 0;
  } catch (const subcat::MissingArtifact& e) {
    std::cerr << "subcat: " << e.what() << "\n";
    return 2;
  } catch (const subcat::ConfigError& e) {
    std::cerr << "subcat: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "subcat: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subcategorization acquisition pipeline"};
  app.require_subcommand(1);

  Overrides ov;
  std::vector<CLI::App*> stage_cmds;
  const std::vector<std::pair<std::string, std::string>> kStages = {
      {"tag", "tag and lemmatize the corpus"},
      {"parse", "parse the lemmatized corpus"},
      {"extract", "extract patternsets from ranked analyses"},
      {"classify", "classify patterns against the class inventory"},
      {"lexicon", "filter class counts into lexicon entries"},
      {"evaluate", "score the lexicon against gold entries"},
      {"rerank", "lexicalize parse ranking with the lexicon"},
      {"synth", "generate a synthetic corpus from seed distributions"},
  };
  for (const auto& [name, help] : kStages) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd, ov);
    stage_cmds.push_back(cmd);
  }
  CLI::App* run = app.add_subcommand("run", "run several stages in order");
  add_common(run, ov);
  run->add_option("--stages", ov.stages, "comma-separated stage list")->required();

  CLI11_PARSE(app, argc, argv);

  for (size_t i = 0; i < stage_cmds.size(); ++i)
    if (stage_cmds[i]->parsed()) return run_stages(ov, {kStages[i].first});
  if (run->parsed()) {
    std::vector<std::string> stages;
    for (const std::string& s : subcat::split(ov.stages, ','))
      if (!subcat::trim(s).empty()) stages.push_back(subcat::trim(s));
    return run_stages(ov, stages);
  }
  return 1;
}
