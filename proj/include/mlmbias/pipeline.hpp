// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Sentence scoring: dataset pairs + grouped records -> SentenceScores.
//
// Modified/unmodified positions are found at the whitespace-word level and
// then mapped onto record tokens, each word covering all of its subwords.

#ifndef MLMBIAS_PIPELINE_HPP_
#define MLMBIAS_PIPELINE_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlmbias/dataset.hpp"
#include "mlmbias/measures.hpp"
#include "mlmbias/records.hpp"

namespace mlmbias {

// Lower-cased token text with subword markers ("##", "\xC4\xA0", "\xE2\x96\x81")
// removed.
std::string surface_form(std::string_view token_text);

// Record-token span [first, last) covered by each word, or nullopt when the
// concatenated surface forms do not spell the words exactly.
std::optional<std::vector<std::pair<std::size_t, std::size_t>>> map_words(
    std::span<const std::string> words,
    std::span<const std::string> token_texts);

// Record-token positions of the modified/unmodified sets for both sentences.
struct TokenAlignment {
  PairAlignment positions;
  // True when word mapping failed and the record tokens were aligned
  // directly.
  bool fallback = false;
};

TokenAlignment align_records(const SentencePair& pair,
                             const SentenceRecordSet& dis,
                             const SentenceRecordSet& adv, Casing casing);

struct ScoreRun {
  // Ordered by pair_id, dis before adv.
  std::vector<SentenceScore> scores;
  // Sentence ids with no records at all.
  std::vector<std::string> missing;
  std::size_t fallback_alignments = 0;
};

// Scores every pair for which records exist. M1 and AUL/AULA need masked
// and unmasked records respectively; CSPS/SSS need masked records for both
// sentences and a non-empty unmodified/modified set.
ScoreRun score_pairs(std::span<const SentencePair> pairs,
                     const RecordIndex& records, Casing casing);

}  // namespace mlmbias

#endif  // MLMBIAS_PIPELINE_HPP_
