// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Pairwise preference differences and per-category bias scores.
//
// A pair delta is positive exactly when the model prefers the sentence
// biased against the disadvantaged group: prediction-quality measures (M1)
// use f(adv) - f(dis) since lower is better, likelihood measures (M2) use
// f(dis) - f(adv).

#ifndef MLMBIAS_BIAS_SCORES_HPP_
#define MLMBIAS_BIAS_SCORES_HPP_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mlmbias/dataset.hpp"
#include "mlmbias/measures.hpp"
#include "mlmbias/stats.hpp"

namespace mlmbias {

struct PairDelta {
  std::string pair_id;
  MeasureKind measure = MeasureKind::kCrr;
  double delta = 0.0;
};

// Throws std::invalid_argument if either score lacks `kind`.
PairDelta pair_delta(const std::string& pair_id, const SentenceScore& dis,
                     const SentenceScore& adv, MeasureKind kind);

// 100/N * #{delta > 0}. Ties count as not preferred. Throws on empty input.
double bspt(std::span<const PairDelta> deltas);

// 100/N * #{first[i] > second[i]}. The lists must cover the same pair ids in
// the same order. Throws std::invalid_argument otherwise.
double bsrt(std::span<const PairDelta> first,
            std::span<const PairDelta> second);

// Sentence scores keyed by sentence id.
using ScoreIndex = std::map<std::string, SentenceScore>;

std::string dis_sentence_id(const SentencePair& pair);
std::string adv_sentence_id(const SentencePair& pair);

// Paired (pretrained, retrained) preference bits, 1 meaning delta > 0.
// Pairs missing the measure in either model are left out; throws
// std::invalid_argument when nothing is left.
Contingency binarize_outcomes(const ScoreIndex& retrained,
                              const ScoreIndex& pretrained,
                              std::span<const SentencePair> pairs,
                              MeasureKind kind);

enum class ReportMode { kPretrained, kRetrainedVsBase };

struct ReportCell {
  double score = 0.0;
  std::size_t n = 0;
  // Pretrained: mean of f(adv) - f(dis) (M1 only). Retrained: unused.
  std::optional<double> mean_difference;
  // Pretrained: Welch t-test of f(adv) against f(dis) (M1 only).
  // Retrained: McNemar on binarized pre/re-trained preferences.
  std::optional<StatResult> significance;
};

struct SkippedPair {
  std::string pair_id;
  MeasureKind measure = MeasureKind::kCrr;
  std::string reason;
};

inline constexpr const char* kOverallRow = "overall";

struct BiasReport {
  ReportMode mode = ReportMode::kPretrained;
  std::string model_id;
  std::string base_model_id;  // retrained mode only
  Source source = Source::kCps;
  std::vector<MeasureKind> measures;
  // Category rows in benchmark order, then the pooled "overall" row.
  std::vector<std::string> row_order;
  std::map<std::string, std::map<MeasureKind, ReportCell>> rows;
  std::vector<SkippedPair> skipped;
};

struct ReportOptions {
  ReportMode mode = ReportMode::kPretrained;
  std::vector<MeasureKind> measures{kAllMeasures.begin(), kAllMeasures.end()};
  bool significance = true;
};

// `scores` belongs to the evaluated model; `base` is the pre-trained base
// and is required in retrained mode. The overall row pools the deltas of
// every category. Categories without any scored pair are omitted.
BiasReport category_report(const ScoreIndex& scores,
                           std::span<const SentencePair> pairs,
                           const ReportOptions& options,
                           const ScoreIndex* base = nullptr);

enum class RetrainDirection { kDis, kAdv };

// One BSRT value from a retrained-vs-base report.
struct BsrtCell {
  std::string model_id;
  RetrainDirection direction = RetrainDirection::kDis;
  std::string category;
  MeasureKind measure = MeasureKind::kCrr;
  double score = 0.0;
};

struct ErrorRate {
  MeasureKind measure = MeasureKind::kCrr;
  std::size_t cells = 0;
  std::size_t errors = 0;
  // Cells scoring exactly 50, predicted 0.
  std::size_t ties = 0;
  double rate = 0.0;
};

// Prediction is 1 iff BSRT > 50; truth is 1 for models retrained on the
// disadvantaged-biased set and 0 for the advantaged-biased set. One rate
// per measure, in first-seen order.
std::vector<ErrorRate> binary_classification_eval(std::span<const BsrtCell> cells);

// Flattens category rows (not the overall row) of a retrained report.
std::vector<BsrtCell> bsrt_cells(const BiasReport& report,
                                 RetrainDirection direction);

}  // namespace mlmbias

#endif  // MLMBIAS_BIAS_SCORES_HPP_
