// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Prediction records: the boundary between an MLM backend and the scoring
// core. A record holds what the backend observed for one evaluated token,
// either under iterative masking (that token masked, everything else
// visible) or in a single unmasked forward pass.

#ifndef MLMBIAS_RECORDS_HPP_
#define MLMBIAS_RECORDS_HPP_

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mlmbias {

enum class Mode { kIterativeMasked, kUnmasked };

std::string_view to_string(Mode mode);

struct TokenPredictionRecord {
  std::string sentence_id;
  std::string model_id;
  Mode mode = Mode::kIterativeMasked;
  // Position among evaluated tokens; special start/end tokens are excluded.
  std::size_t token_index = 0;
  std::string token_text;
  // Rank of the ground-truth token (1 = argmax). Masked mode only.
  std::optional<std::int64_t> gt_rank;
  // Natural-log probability of the ground-truth token.
  double gt_logprob = 0.0;
  // Natural-log probability of the rank-1 token. Masked mode only.
  std::optional<double> top_logprob;
  // Averaged multi-head attention associated with the ground-truth token.
  double attention = 0.0;
  std::int64_t vocab_size = 2;

  friend bool operator==(const TokenPredictionRecord&,
                         const TokenPredictionRecord&) = default;
};

// Throws ValidationError naming the first offending field.
void validate(const TokenPredictionRecord& record);

std::string to_json_line(const TokenPredictionRecord& record);

// Parses and validates one serialized record. `line_no` is only used for
// error messages.
TokenPredictionRecord parse_record_line(std::string_view line,
                                        std::size_t line_no = 0);

// One JSON object per line. Throws IoError naming the record index when the
// sink fails.
void write_records(std::span<const TokenPredictionRecord> records,
                   std::ostream& sink);

// Blank lines are skipped. Throws ParseError / ValidationError; a
// ValidationError message is prefixed with the line number.
std::vector<TokenPredictionRecord> read_records(std::istream& source);

// All records of one sentence for one model, ordered by token_index.
struct SentenceRecordSet {
  std::string sentence_id;
  std::string model_id;
  std::vector<TokenPredictionRecord> masked;
  std::vector<TokenPredictionRecord> unmasked;

  // l_s: number of evaluated tokens.
  std::size_t length() const {
    return masked.empty() ? unmasked.size() : masked.size();
  }
};

using RecordIndex = std::map<std::string, SentenceRecordSet>;

// Groups validated records by sentence. Either mode may be absent for a
// sentence; when both are present they must cover the same tokens. Throws
// ValidationError on duplicates, gaps, or mixed model ids.
RecordIndex group_by_sentence(std::span<const TokenPredictionRecord> records);

}  // namespace mlmbias

#endif  // MLMBIAS_RECORDS_HPP_
