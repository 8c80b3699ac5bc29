// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlmbias/mock_backend.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "mlmbias/bias_scores.hpp"
#include "mlmbias/logging.hpp"

namespace mlmbias {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t stable_hash(std::uint64_t seed,
                          std::span<const std::uint64_t> values) {
  std::uint64_t h = seed;
  for (std::uint64_t v : values) h = splitmix64(h ^ v);
  return h;
}

void validate(const MockModelSpec& spec) {
  if (spec.vocab_size < 2) {
    throw std::invalid_argument("mock: vocab_size must be >= 2");
  }
  if (!std::isfinite(spec.bias_knob) || spec.bias_knob < -1.0 ||
      spec.bias_knob > 1.0) {
    throw std::invalid_argument("mock: bias_knob must lie in [-1, 1]");
  }
}

namespace {

enum Stream : std::uint64_t {
  kRank = 1,
  kTop,
  kGap,
  kAttention,
  kUnmaskedLevel,
  kUnmaskedScale,
};

// Uniform in [0, 1) from the top 53 bits.
double unit(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Moves a log-rank level in [0, ln V] toward 0 (better) by `k` for the
// favoured side and toward ln V (worse) for the other. Monotone in the knob.
double shift(double level, double log_v, double knob, bool disadvantaged) {
  const double toward_best = disadvantaged ? knob : -knob;
  if (toward_best >= 0.0) return level * (1.0 - toward_best);
  return level + (-toward_best) * (log_v - level);
}

}  // namespace

std::vector<TokenPredictionRecord> generate_sentence_records(
    const std::string& sentence_id, std::span<const std::string> tokens,
    bool disadvantaged, const MockModelSpec& spec) {
  validate(spec);
  std::string text;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) text += ' ';
    text += tokens[i];
  }
  const std::uint64_t text_hash = fnv1a64(text);
  const double log_v = std::log(static_cast<double>(spec.vocab_size));
  const double l = static_cast<double>(tokens.size());

  std::vector<TokenPredictionRecord> masked;
  std::vector<TokenPredictionRecord> unmasked;
  masked.reserve(tokens.size());
  unmasked.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::uint64_t token_hash = fnv1a64(tokens[i]);
    auto u = [&](Stream s) {
      const std::array<std::uint64_t, 4> key{text_hash, token_hash, i, s};
      return unit(stable_hash(spec.seed, key));
    };

    const double level =
        shift(u(kRank) * log_v, log_v, spec.bias_knob, disadvantaged);
    const auto rank = std::clamp<std::int64_t>(
        std::llround(std::exp(level)), 1, spec.vocab_size);
    const double top = -(0.05 + 2.0 * u(kTop));
    const double gt =
        rank == 1 ? top
                  : top - std::log(static_cast<double>(rank)) * (0.5 + u(kGap));
    const double attention = std::clamp((0.5 + u(kAttention)) / l, 0.0, 1.0);

    TokenPredictionRecord r;
    r.sentence_id = sentence_id;
    r.model_id = spec.model_id;
    r.mode = Mode::kIterativeMasked;
    r.token_index = i;
    r.token_text = tokens[i];
    r.gt_rank = rank;
    r.gt_logprob = gt;
    r.top_logprob = top;
    r.attention = attention;
    r.vocab_size = spec.vocab_size;
    masked.push_back(r);

    const double u_level = shift(u(kUnmaskedLevel) * log_v, log_v,
                                 spec.bias_knob, disadvantaged);
    r.mode = Mode::kUnmasked;
    r.gt_rank.reset();
    r.top_logprob.reset();
    r.gt_logprob = -(0.01 + u_level * (0.3 + 0.4 * u(kUnmaskedScale)));
    unmasked.push_back(std::move(r));
  }
  masked.insert(masked.end(), std::make_move_iterator(unmasked.begin()),
                std::make_move_iterator(unmasked.end()));
  return masked;
}

std::vector<TokenPredictionRecord> generate_records(
    std::span<const SentencePair> pairs, const MockModelSpec& spec,
    Casing casing) {
  validate(spec);
  std::vector<TokenPredictionRecord> out;
  for (const auto& pair : pairs) {
    for (bool dis : {true, false}) {
      const std::string id = dis ? dis_sentence_id(pair) : adv_sentence_id(pair);
      const auto tokens =
          split_tokens(normalize(dis ? pair.sent_dis : pair.sent_adv, casing));
      if (tokens.empty()) {
        log::warn("mock: sentence {} has no tokens; skipped", id);
        continue;
      }
      auto records = generate_sentence_records(id, tokens, dis, spec);
      out.insert(out.end(), std::make_move_iterator(records.begin()),
                 std::make_move_iterator(records.end()));
    }
  }
  return out;
}

}  // namespace mlmbias
