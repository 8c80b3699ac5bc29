// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlmbias/pipeline.hpp"

#include <algorithm>
#include <cctype>

#include "mlmbias/bias_scores.hpp"
#include "mlmbias/logging.hpp"

namespace mlmbias {

std::string surface_form(std::string_view token_text) {
  std::string_view t = token_text;
  for (std::string_view marker : {"##", "\xC4\xA0", "\xE2\x96\x81"}) {
    if (t.substr(0, marker.size()) == marker) {
      t.remove_prefix(marker.size());
      break;
    }
  }
  std::string out(t);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::optional<std::vector<std::pair<std::size_t, std::size_t>>> map_words(
    std::span<const std::string> words,
    std::span<const std::string> token_texts) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  spans.reserve(words.size());
  std::size_t t = 0;
  for (const auto& word : words) {
    const std::string target = surface_form(word);
    const std::size_t first = t;
    std::string built;
    while (built.size() < target.size() && t < token_texts.size()) {
      built += surface_form(token_texts[t++]);
      if (target.compare(0, built.size(), built) != 0) return std::nullopt;
    }
    if (built != target || t == first) return std::nullopt;
    spans.emplace_back(first, t);
  }
  if (t != token_texts.size()) return std::nullopt;
  return spans;
}

namespace {

std::vector<std::string> token_texts(const SentenceRecordSet& set) {
  std::vector<std::string> out;
  out.reserve(set.masked.size());
  for (const auto& r : set.masked) out.push_back(r.token_text);
  return out;
}

std::vector<std::size_t> expand(
    std::span<const std::size_t> word_positions,
    const std::vector<std::pair<std::size_t, std::size_t>>& spans) {
  std::vector<std::size_t> out;
  for (std::size_t w : word_positions) {
    for (std::size_t t = spans[w].first; t < spans[w].second; ++t) {
      out.push_back(t);
    }
  }
  return out;
}

}  // namespace

TokenAlignment align_records(const SentencePair& pair,
                             const SentenceRecordSet& dis,
                             const SentenceRecordSet& adv, Casing casing) {
  const auto words_dis = split_tokens(normalize(pair.sent_dis, casing));
  const auto words_adv = split_tokens(normalize(pair.sent_adv, casing));
  const auto texts_dis = token_texts(dis);
  const auto texts_adv = token_texts(adv);

  const auto spans_dis = map_words(words_dis, texts_dis);
  const auto spans_adv = map_words(words_adv, texts_adv);
  TokenAlignment out;
  if (spans_dis && spans_adv && !words_dis.empty() && !words_adv.empty()) {
    const PairAlignment words = align_pair(words_dis, words_adv);
    out.positions.unmodified_dis = expand(words.unmodified_dis, *spans_dis);
    out.positions.unmodified_adv = expand(words.unmodified_adv, *spans_adv);
    out.positions.modified_dis = expand(words.modified_dis, *spans_dis);
    out.positions.modified_adv = expand(words.modified_adv, *spans_adv);
    return out;
  }
  log::warn("pair {}: record tokens do not spell the dataset words; aligning "
            "record tokens directly",
            pair.pair_id);
  std::vector<std::string> surf_dis;
  std::vector<std::string> surf_adv;
  for (const auto& t : texts_dis) surf_dis.push_back(surface_form(t));
  for (const auto& t : texts_adv) surf_adv.push_back(surface_form(t));
  out.positions = align_pair(surf_dis, surf_adv);
  out.fallback = true;
  return out;
}

ScoreRun score_pairs(std::span<const SentencePair> pairs,
                     const RecordIndex& records, Casing casing) {
  std::vector<const SentencePair*> ordered;
  ordered.reserve(pairs.size());
  for (const auto& p : pairs) ordered.push_back(&p);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SentencePair* a, const SentencePair* b) {
                     return a->pair_id < b->pair_id;
                   });

  ScoreRun run;
  for (const SentencePair* pair : ordered) {
    const std::string id_dis = dis_sentence_id(*pair);
    const std::string id_adv = adv_sentence_id(*pair);
    const auto it_dis = records.find(id_dis);
    const auto it_adv = records.find(id_adv);
    if (it_dis == records.end()) run.missing.push_back(id_dis);
    if (it_adv == records.end()) run.missing.push_back(id_adv);

    SentenceScore s_dis;
    SentenceScore s_adv;
    s_dis.sentence_id = id_dis;
    s_adv.sentence_id = id_adv;
    for (auto [set_it, score] :
         {std::pair{it_dis, &s_dis}, std::pair{it_adv, &s_adv}}) {
      if (set_it == records.end()) continue;
      const SentenceRecordSet& set = set_it->second;
      score->model_id = set.model_id;
      if (!set.masked.empty()) {
        for (MeasureKind k : {MeasureKind::kCrr, MeasureKind::kCrra,
                              MeasureKind::kDp, MeasureKind::kDpa}) {
          score->values[k] = sentence_measure(set, k);
        }
      }
      if (!set.unmasked.empty()) {
        score->values[MeasureKind::kAul] = aul(set);
        score->values[MeasureKind::kAula] = aula(set);
      }
    }

    if (it_dis != records.end() && it_adv != records.end() &&
        !it_dis->second.masked.empty() && !it_adv->second.masked.empty()) {
      const TokenAlignment al =
          align_records(*pair, it_dis->second, it_adv->second, casing);
      if (al.fallback) ++run.fallback_alignments;
      if (!al.positions.unmodified_dis.empty()) {
        s_dis.values[MeasureKind::kCsps] =
            csps(it_dis->second, al.positions.unmodified_dis);
        s_adv.values[MeasureKind::kCsps] =
            csps(it_adv->second, al.positions.unmodified_adv);
      }
      if (!al.positions.modified_dis.empty() &&
          !al.positions.modified_adv.empty()) {
        const SssValue v_dis = sss(it_dis->second, al.positions.modified_dis);
        const SssValue v_adv = sss(it_adv->second, al.positions.modified_adv);
        s_dis.values[MeasureKind::kSss] = v_dis.value;
        s_adv.values[MeasureKind::kSss] = v_adv.value;
        s_dis.sss_approx = v_dis.approx;
        s_adv.sss_approx = v_adv.approx;
      }
    }
    if (it_dis != records.end()) run.scores.push_back(std::move(s_dis));
    if (it_adv != records.end()) run.scores.push_back(std::move(s_adv));
  }
  return run;
}

}  // namespace mlmbias
