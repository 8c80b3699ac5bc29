// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlmbias/measures.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "mlmbias/error.hpp"

namespace mlmbias {

MeasureSet set_of(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::kCrr:
    case MeasureKind::kCrra:
    case MeasureKind::kDp:
    case MeasureKind::kDpa:
      return MeasureSet::kM1;
    default:
      return MeasureSet::kM2;
  }
}

std::string_view to_string(MeasureKind kind) {
  switch (kind) {
    case MeasureKind::kCrr: return "crr";
    case MeasureKind::kCrra: return "crra";
    case MeasureKind::kDp: return "dp";
    case MeasureKind::kDpa: return "dpa";
    case MeasureKind::kCsps: return "csps";
    case MeasureKind::kSss: return "sss";
    case MeasureKind::kAul: return "aul";
    case MeasureKind::kAula: return "aula";
  }
  return "unknown";
}

MeasureKind parse_measure(std::string_view name) {
  for (MeasureKind k : kAllMeasures) {
    if (to_string(k) == name) return k;
  }
  throw ParseError("unknown measure '" + std::string(name) + "'");
}

namespace {

void require_masked(const TokenPredictionRecord& r, const char* op) {
  if (r.mode != Mode::kIterativeMasked) {
    throw std::invalid_argument(std::string(op) +
                                ": requires an iterative-masked record");
  }
}

}  // namespace

double crr_token(const TokenPredictionRecord& r) {
  require_masked(r, "crr_token");
  return 1.0 - 1.0 / static_cast<double>(*r.gt_rank);
}

double dp_token(const TokenPredictionRecord& r) {
  require_masked(r, "dp_token");
  return *r.top_logprob - r.gt_logprob;
}

double crra_token(const TokenPredictionRecord& r) {
  require_masked(r, "crra_token");
  // a (1 - ln(1/rank)) written out.
  return r.attention * (1.0 + std::log(static_cast<double>(*r.gt_rank)));
}

double dpa_token(const TokenPredictionRecord& r) {
  require_masked(r, "dpa_token");
  return r.attention * (*r.top_logprob - r.gt_logprob);
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 8;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double sentence_measure(const SentenceRecordSet& set, MeasureKind kind) {
  if (set_of(kind) != MeasureSet::kM1) {
    throw std::invalid_argument("sentence_measure: only CRR, CRRA, dP, dPA");
  }
  if (set.masked.empty()) {
    throw std::invalid_argument("sentence_measure: sentence " +
                                set.sentence_id + " has no masked records");
  }
  std::vector<double> terms;
  terms.reserve(set.masked.size());
  for (const auto& r : set.masked) {
    switch (kind) {
      case MeasureKind::kCrr: terms.push_back(crr_token(r)); break;
      case MeasureKind::kCrra: terms.push_back(crra_token(r)); break;
      case MeasureKind::kDp: terms.push_back(dp_token(r)); break;
      default: terms.push_back(dpa_token(r)); break;
    }
  }
  // Rounding can push the mean an ulp past the extreme terms; a mean never
  // leaves their range.
  const auto [lo, hi] = std::minmax_element(terms.begin(), terms.end());
  return std::clamp(pairwise_sum(terms) / static_cast<double>(terms.size()),
                    *lo, *hi);
}

namespace {

std::vector<double> masked_logprobs(const SentenceRecordSet& set,
                                    std::span<const std::size_t> positions,
                                    const char* op) {
  std::vector<double> terms;
  terms.reserve(positions.size());
  for (std::size_t pos : positions) {
    if (pos >= set.masked.size()) {
      throw std::invalid_argument(std::string(op) + ": position " +
                                  std::to_string(pos) +
                                  " outside sentence " + set.sentence_id);
    }
    terms.push_back(set.masked[pos].gt_logprob);
  }
  return terms;
}

}  // namespace

double csps(const SentenceRecordSet& set,
            std::span<const std::size_t> unmodified) {
  if (unmodified.empty()) {
    throw std::invalid_argument("csps: no unmodified tokens in sentence " +
                                set.sentence_id);
  }
  return pairwise_sum(masked_logprobs(set, unmodified, "csps"));
}

SssValue sss(const SentenceRecordSet& set,
             std::span<const std::size_t> modified) {
  if (modified.empty()) {
    throw std::invalid_argument("sss: no modified tokens in sentence " +
                                set.sentence_id);
  }
  const auto terms = masked_logprobs(set, modified, "sss");
  return {pairwise_sum(terms) / static_cast<double>(set.masked.size()),
          modified.size() > 1};
}

double aul(const SentenceRecordSet& set) {
  if (set.unmasked.empty()) {
    throw std::invalid_argument("aul: sentence " + set.sentence_id +
                                " has no unmasked records");
  }
  std::vector<double> terms;
  terms.reserve(set.unmasked.size());
  for (const auto& r : set.unmasked) terms.push_back(r.gt_logprob);
  return pairwise_sum(terms) / static_cast<double>(terms.size());
}

double aula(const SentenceRecordSet& set) {
  if (set.unmasked.empty()) {
    throw std::invalid_argument("aula: sentence " + set.sentence_id +
                                " has no unmasked records");
  }
  std::vector<double> terms;
  terms.reserve(set.unmasked.size());
  for (const auto& r : set.unmasked) {
    terms.push_back(r.attention * r.gt_logprob);
  }
  return pairwise_sum(terms) / static_cast<double>(terms.size());
}

std::string to_json_line(const SentenceScore& score) {
  nlohmann::ordered_json j;
  j["sentence_id"] = score.sentence_id;
  j["model_id"] = score.model_id;
  for (MeasureKind k : kAllMeasures) {
    const auto v = score.get(k);
    j[std::string(to_string(k))] =
        v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
  }
  j["sss_approx"] = score.sss_approx;
  return j.dump();
}

SentenceScore parse_score_line(std::string_view line, std::size_t line_no) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed score: ") + e.what(), line_no);
  }
  if (!j.is_object() || !j.contains("sentence_id") ||
      !j["sentence_id"].is_string()) {
    throw ParseError("score lacks sentence_id", line_no);
  }
  SentenceScore s;
  s.sentence_id = j["sentence_id"].get<std::string>();
  if (j.contains("model_id") && j["model_id"].is_string()) {
    s.model_id = j["model_id"].get<std::string>();
  }
  for (MeasureKind k : kAllMeasures) {
    auto it = j.find(std::string(to_string(k)));
    if (it == j.end() || it->is_null()) continue;
    if (!it->is_number()) {
      throw ParseError("measure '" + std::string(to_string(k)) +
                           "' is not a number",
                       line_no);
    }
    s.values[k] = it->get<double>();
  }
  if (j.contains("sss_approx") && j["sss_approx"].is_boolean()) {
    s.sss_approx = j["sss_approx"].get<bool>();
  }
  return s;
}

}  // namespace mlmbias
