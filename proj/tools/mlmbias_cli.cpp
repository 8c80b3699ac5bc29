// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// mlmbias: bias evaluation of masked language models from token records.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mlmbias/commands.hpp"
#include "mlmbias/error.hpp"

namespace {

using mlmbias::RunConfig;

struct Flags {
  std::string kind;
  std::vector<std::string> measures;
  std::string casing = "uncased";
};

void dataset_flags(CLI::App* sub, RunConfig& c, Flags& f) {
  sub->add_option("--dataset", c.dataset, "CrowS-Pairs CSV or StereoSet JSON")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--kind", f.kind, "Dataset kind (default: from extension)")
      ->check(CLI::IsMember({"cps", "ss"}));
  sub->add_option("--out", c.out, "Output directory")->capture_default_str();
  sub->add_option("--manifest", c.manifest,
                  "Write a JSON manifest with input digests and flags");
}

void casing_flag(CLI::App* sub, Flags& f) {
  sub->add_option("--casing", f.casing, "Sentence casing for tokenization")
      ->check(CLI::IsMember({"cased", "uncased"}))
      ->capture_default_str();
}

void score_inputs(CLI::App* sub, RunConfig& c, Flags& f) {
  sub->add_option("--records", c.records, "Token record JSONL file(s)")
      ->check(CLI::ExistingFile);
  sub->add_option("--scores", c.scores, "Sentence score JSONL (from `score`)")
      ->check(CLI::ExistingFile);
  sub->add_option("--measures", f.measures, "Subset of measures")
      ->delimiter(',');
  sub->add_flag("--allow-partial", c.allow_partial,
                "Exit 0 even when some sentences lack records");
  casing_flag(sub, f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Social-bias evaluation of masked language models"};
  app.set_version_flag("--version", MLMBIAS_VERSION);
  app.require_subcommand(1);

  RunConfig config;
  Flags flags;

  auto* validate = app.add_subcommand(
      "validate-dataset", "Check per-category counts against the benchmark");
  dataset_flags(validate, config, flags);
  validate->add_flag("--allow-partial", config.allow_partial,
                     "Exit 0 even when counts differ");

  auto* score = app.add_subcommand("score", "Sentence scores from records");
  dataset_flags(score, config, flags);
  score->add_option("--records", config.records, "Token record JSONL file(s)")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_flag("--allow-partial", config.allow_partial,
                  "Exit 0 even when some sentences lack records");
  casing_flag(score, flags);

  auto* bias = app.add_subcommand("bias-score", "Per-category bias scores");
  dataset_flags(bias, config, flags);
  score_inputs(bias, config, flags);
  bias->add_option("--records-base", config.records_base,
                   "Base-model records (retrained comparison)")
      ->check(CLI::ExistingFile);
  bias->add_option("--scores-base", config.scores_base,
                   "Base-model sentence scores (retrained comparison)")
      ->check(CLI::ExistingFile);
  bias->add_flag("--significance,!--no-significance", config.significance,
                 "Welch / McNemar significance columns")
      ->capture_default_str();

  auto* roc = app.add_subcommand("roc", "ROC curves against annotations");
  dataset_flags(roc, config, flags);
  score_inputs(roc, config, flags);

  auto* ecdf = app.add_subcommand("ecdf", "ECDF series per category");
  dataset_flags(ecdf, config, flags);
  score_inputs(ecdf, config, flags);

  auto* mock = app.add_subcommand("mock", "Synthetic records for a dataset");
  dataset_flags(mock, config, flags);
  casing_flag(mock, flags);
  mock->add_option("--seed", config.seed, "Hash seed")->capture_default_str();
  mock->add_option("--bias-knob", config.bias_knob, "Preference in [-1, 1]")
      ->check(CLI::Range(-1.0, 1.0))
      ->capture_default_str();
  mock->add_option("--vocab-size", config.vocab_size, "Vocabulary size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  mock->add_option("--model-id", config.model_id, "model_id of the records")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!flags.kind.empty()) {
      config.kind = flags.kind == "cps" ? mlmbias::Source::kCps
                                        : mlmbias::Source::kSs;
    }
    config.casing = flags.casing == "cased" ? mlmbias::Casing::kCased
                                            : mlmbias::Casing::kUncased;
    if (!flags.measures.empty()) {
      config.measures.clear();
      for (const auto& m : flags.measures) {
        config.measures.push_back(mlmbias::parse_measure(m));
      }
    }
    if (validate->parsed()) return mlmbias::cmd_validate_dataset(config, std::cout);
    if (score->parsed()) return mlmbias::cmd_score(config, std::cout);
    if (bias->parsed()) return mlmbias::cmd_bias_score(config, std::cout);
    if (roc->parsed()) return mlmbias::cmd_roc(config, std::cout);
    if (ecdf->parsed()) return mlmbias::cmd_ecdf(config, std::cout);
    if (mock->parsed()) return mlmbias::cmd_mock(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "mlmbias: error: " << e.what() << '\n';
    return mlmbias::kExitError;
  }
  return mlmbias::kExitError;
}
