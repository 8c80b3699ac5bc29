// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Stereotype benchmark loading. Both CrowS-Pairs (CSV) and StereoSet
// intrasentence (JSON) are normalized into SentencePair values where
// `sent_dis` is the sentence biased against the historically disadvantaged
// group and `sent_adv` the one biased against the advantaged group.

#ifndef MLMBIAS_DATASET_HPP_
#define MLMBIAS_DATASET_HPP_

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mlmbias {

enum class Source { kCps, kSs };

enum class BiasType {
  kRace,
  kReligion,
  kNationality,
  kSocioeconomic,
  kGender,
  kSexualOrientation,
  kAge,
  kDisability,
  kPhysicalAppearance,
  kProfession,
};

// Canonical names: "race", "sexual-orientation", "physical-appearance", ...
std::string_view to_string(BiasType type);
std::string_view to_string(Source source);

// Accepts canonical names plus the raw CrowS-Pairs label "race-color".
// Throws ParseError for anything else.
BiasType parse_bias_type(std::string_view name);

// Categories of a benchmark in the order they are reported.
std::span<const BiasType> categories(Source source);

// Published number of pairs per category.
const std::map<BiasType, std::size_t>& expected_counts(Source source);

struct SentencePair {
  std::string pair_id;
  std::string sent_dis;
  std::string sent_adv;
  BiasType bias_type = BiasType::kRace;
  Source source = Source::kCps;
  // One label list per validating annotator; an empty list means that
  // annotator did not consider the pair biased. CrowS-Pairs only.
  std::optional<std::vector<std::vector<std::string>>> annotations;
};

// Expects the published column names `sent_more`, `sent_less`,
// `stereo_antistereo`, `bias_type` and `annotations`. Pair ids are
// "cps-NNNNN" from the leading index column (or the row number when the file
// has none).
std::vector<SentencePair> parse_cps(std::istream& source);

struct SsParseResult {
  std::vector<SentencePair> pairs;
  // Intrasentence entries lacking a stereotype or anti-stereotype option.
  std::size_t skipped = 0;
  // Intersentence entries seen and dropped.
  std::size_t intersentence_dropped = 0;
};

// Reads `data.intrasentence` of the published StereoSet JSON. Throws
// ParseError on malformed JSON.
SsParseResult parse_ss(std::istream& source);

enum class Casing { kCased, kUncased };

// Replaces punctuation with spaces (so "businessman's" becomes
// "businessman s"), keeps hyphens joining two word characters, collapses
// whitespace and lowercases when `casing` is uncased. Idempotent.
std::string normalize(std::string_view text, Casing casing);

// Splits on ASCII whitespace.
std::vector<std::string> split_tokens(std::string_view text);

struct PairAlignment {
  std::vector<std::size_t> unmodified_dis;
  std::vector<std::size_t> unmodified_adv;
  std::vector<std::size_t> modified_dis;
  std::vector<std::size_t> modified_adv;
};

// Unmodified tokens are a longest common subsequence of the two token
// lists (exact string match); modified tokens are the complement on each
// side. Among several longest subsequences the lexicographically smallest
// token sequence is taken, embedded at its leftmost positions, which makes
// the result symmetric under swapping the inputs. Throws
// std::invalid_argument when either list is empty.
PairAlignment align_pair(std::span<const std::string> tokens_dis,
                         std::span<const std::string> tokens_adv);

enum class AnnotationLabel { kBiased, kUnbiased };

// Biased iff at least 3 of 6 annotators (5 validators plus the writer, who
// implicitly agrees with the pair's own bias type) consider the pair biased
// and a strict majority of those also name the pair's bias type. Throws
// ValidationError when annotations are missing.
AnnotationLabel annotation_label(const SentencePair& pair);

// Parses a Python-literal list of string lists, e.g.
// "[['race-color'], [], ['gender', 'age']]".
std::vector<std::vector<std::string>> parse_annotation_list(
    std::string_view text);

}  // namespace mlmbias

#endif  // MLMBIAS_DATASET_HPP_
