// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic synthetic MLM records for exercising the pipeline without
// model inference. Every value is a pure function of
// (seed, sentence text, token, position, stream) through stable_hash(), so
// records do not depend on generation order.

#ifndef MLMBIAS_MOCK_BACKEND_HPP_
#define MLMBIAS_MOCK_BACKEND_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlmbias/dataset.hpp"
#include "mlmbias/records.hpp"

namespace mlmbias {

struct MockModelSpec {
  std::uint64_t seed = 0;
  std::int64_t vocab_size = 30522;
  // In [-1, 1]. Positive values move ranks and log-probabilities of S^dis
  // sentences toward a perfect prediction and those of S^adv sentences
  // away from it; negative values do the opposite.
  double bias_knob = 0.0;
  std::string model_id = "mock";
};

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// SplitMix64 output function applied to z + 0x9E3779B97F4A7C15.
std::uint64_t splitmix64(std::uint64_t z);

// h = seed; for v in values: h = splitmix64(h ^ v).
std::uint64_t stable_hash(std::uint64_t seed,
                          std::span<const std::uint64_t> values);

// Throws std::invalid_argument when vocab_size < 2 or bias_knob is outside
// [-1, 1] or not finite.
void validate(const MockModelSpec& spec);

// For each pair, sentence ids "<pair_id>/dis" and "<pair_id>/adv"; tokens
// are the whitespace tokens of normalize(sentence, casing). One masked and
// one unmasked record per token, masked records first. Sentences that
// normalize to nothing are skipped with a warning.
std::vector<TokenPredictionRecord> generate_records(
    std::span<const SentencePair> pairs, const MockModelSpec& spec,
    Casing casing = Casing::kUncased);

// Records of a single sentence. `disadvantaged` selects the knob direction.
std::vector<TokenPredictionRecord> generate_sentence_records(
    const std::string& sentence_id, std::span<const std::string> tokens,
    bool disadvantaged, const MockModelSpec& spec);

}  // namespace mlmbias

#endif  // MLMBIAS_MOCK_BACKEND_HPP_
