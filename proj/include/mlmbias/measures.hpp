// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Token- and sentence-level prediction-quality measures.
//
// Prediction-quality measures (CRR, CRRA, dP, dPA) are computed from
// iterative-masking records and are "better" when closer to zero.
// Likelihood measures (CSPS, SSS, AUL, AULA) are log-likelihood based and
// are "better" when larger.

#ifndef MLMBIAS_MEASURES_HPP_
#define MLMBIAS_MEASURES_HPP_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "mlmbias/records.hpp"

namespace mlmbias {

enum class MeasureKind { kCrr, kCrra, kDp, kDpa, kCsps, kSss, kAul, kAula };

// M1 = {CRR, CRRA, dP, dPA}; M2 = {CSPS, SSS, AUL, AULA}.
enum class MeasureSet { kM1, kM2 };

inline constexpr std::array<MeasureKind, 8> kAllMeasures = {
    MeasureKind::kCrr,  MeasureKind::kCrra, MeasureKind::kDp,
    MeasureKind::kDpa,  MeasureKind::kCsps, MeasureKind::kSss,
    MeasureKind::kAul,  MeasureKind::kAula,
};

MeasureSet set_of(MeasureKind kind);

// Lower-case serialized names: crr, crra, dp, dpa, csps, sss, aul, aula.
std::string_view to_string(MeasureKind kind);
MeasureKind parse_measure(std::string_view name);

// Per-token measures. All require an iterative-masked record and throw
// std::invalid_argument otherwise.
double crr_token(const TokenPredictionRecord& r);   // 1 - 1/rank
double dp_token(const TokenPredictionRecord& r);    // top - gt log-prob
double crra_token(const TokenPredictionRecord& r);  // a * (1 + ln rank)
double dpa_token(const TokenPredictionRecord& r);   // a * (top - gt)

// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

// Mean of the token measure over all masked records of the sentence.
// `kind` must be in M1. Throws std::invalid_argument when the sentence has
// no masked records.
double sentence_measure(const SentenceRecordSet& set, MeasureKind kind);

// Sum of ground-truth log-probabilities over the unmodified positions.
// Throws std::invalid_argument when `unmodified` is empty.
double csps(const SentenceRecordSet& set,
            std::span<const std::size_t> unmodified);

struct SssValue {
  double value = 0.0;
  // More than one modified token: the other modified tokens stayed visible
  // in each masked record, so the conditioning only approximates P(t | U).
  bool approx = false;
};

// Sum of ground-truth log-probabilities over the modified positions divided
// by the sentence length. Throws std::invalid_argument when `modified` is
// empty.
SssValue sss(const SentenceRecordSet& set,
             std::span<const std::size_t> modified);

// Mean unmasked log-probability, plain and attention weighted. Throw
// std::invalid_argument when the sentence has no unmasked records.
double aul(const SentenceRecordSet& set);
double aula(const SentenceRecordSet& set);

struct SentenceScore {
  std::string sentence_id;
  std::string model_id;
  std::map<MeasureKind, double> values;
  bool sss_approx = false;

  std::optional<double> get(MeasureKind kind) const {
    auto it = values.find(kind);
    if (it == values.end()) return std::nullopt;
    return it->second;
  }
};

// JSON line with keys sentence_id, model_id, one key per measure (null when
// undefined) and sss_approx.
std::string to_json_line(const SentenceScore& score);
SentenceScore parse_score_line(std::string_view line, std::size_t line_no = 0);

}  // namespace mlmbias

#endif  // MLMBIAS_MEASURES_HPP_
