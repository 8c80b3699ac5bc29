// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include "doctest.h"
#include "mlmbias/error.hpp"
#include "mlmbias/measures.hpp"
#include "mlmbias/mock_backend.hpp"
#include "support/fixtures.hpp"

using namespace mlmbias;

namespace {

constexpr double kRel = 1e-9;

bool close(double got, double want) {
  return std::fabs(got - want) <= kRel * std::max(1.0, std::fabs(want));
}

TokenPredictionRecord rec(std::int64_t rank, double top, double gt,
                          double attention, std::int64_t vocab = 50000,
                          std::size_t index = 0) {
  TokenPredictionRecord r;
  r.sentence_id = "s";
  r.model_id = "m";
  r.token_index = index;
  r.token_text = "t" + std::to_string(index);
  r.gt_rank = rank;
  r.top_logprob = top;
  r.gt_logprob = gt;
  r.attention = attention;
  r.vocab_size = vocab;
  return r;
}

TokenPredictionRecord unmasked(double gt, double attention, std::size_t index) {
  TokenPredictionRecord r;
  r.sentence_id = "s";
  r.model_id = "m";
  r.mode = Mode::kUnmasked;
  r.token_index = index;
  r.token_text = "t" + std::to_string(index);
  r.gt_logprob = gt;
  r.attention = attention;
  r.vocab_size = 50000;
  return r;
}

SentenceRecordSet masked_set(std::vector<TokenPredictionRecord> records) {
  for (std::size_t i = 0; i < records.size(); ++i) records[i].token_index = i;
  SentenceRecordSet s;
  s.sentence_id = "s";
  s.model_id = "m";
  s.masked = std::move(records);
  return s;
}

std::vector<TokenPredictionRecord> mock_records(std::size_t per_category,
                                                std::uint64_t seed) {
  MockModelSpec spec;
  spec.seed = seed;
  spec.vocab_size = 1000;
  spec.bias_knob = 0.3;
  return generate_records(
      testing::synthetic_pairs(Source::kCps, per_category, seed), spec);
}

}  // namespace

TEST_CASE("crr_token") {
  CHECK(crr_token(rec(1, -0.1, -0.1, 0.2)) == 0.0);
  CHECK(close(crr_token(rec(4, -0.1, -2.0, 0.2)), 0.75));
  CHECK(close(crr_token(rec(50000, -0.1, -20.0, 0.2)), 1.0 - 1.0 / 50000.0));
  CHECK_THROWS_AS(crr_token(unmasked(-1.0, 0.5, 0)), std::invalid_argument);
}

TEST_CASE("dp_token") {
  CHECK(dp_token(rec(1, -0.7, -0.7, 0.2)) == 0.0);
  CHECK(close(dp_token(rec(3, -1.0, -3.5, 0.2)), 2.5));
  CHECK_THROWS_AS(dp_token(unmasked(-1.0, 0.5, 0)), std::invalid_argument);
}

TEST_CASE("crra_token") {
  CHECK(close(crra_token(rec(1, -0.1, -0.1, 0.5)), 0.5));
  CHECK(crra_token(rec(7, -0.1, -3.0, 0.0)) == 0.0);
  const long double oracle = 1.0L + std::log(3.0L);
  CHECK(close(crra_token(rec(3, -0.1, -2.0, 1.0)), static_cast<double>(oracle)));
  CHECK_THROWS_AS(crra_token(unmasked(-1.0, 0.5, 0)), std::invalid_argument);
}

TEST_CASE("dpa_token") {
  CHECK(dpa_token(rec(1, -0.3, -0.3, 0.9)) == 0.0);
  CHECK(close(dpa_token(rec(5, -1.0, -3.5, 0.1)), 0.25));
  CHECK_THROWS_AS(dpa_token(unmasked(-1.0, 0.5, 0)), std::invalid_argument);
}

TEST_CASE("token properties over mock records") {
  const auto records = mock_records(60, 17);
  for (const auto& r : records) {
    if (r.mode != Mode::kIterativeMasked) continue;
    const double dp = dp_token(r);
    REQUIRE(dp >= 0.0);
    REQUIRE((dp == 0.0) == (*r.gt_rank == 1));
    REQUIRE(dpa_token(r) <= dp);
    const double crr = crr_token(r);
    REQUIRE(crr >= 0.0);
    REQUIRE(crr <= 1.0 - 1.0 / static_cast<double>(r.vocab_size));
  }
}

TEST_CASE("crr_token is monotone in rank") {
  double prev = -1.0;
  for (std::int64_t rank = 1; rank <= 2000; ++rank) {
    const double v = crr_token(rec(rank, -0.1, rank == 1 ? -0.1 : -5.0, 0.3));
    REQUIRE(v >= prev);
    prev = v;
  }
}

TEST_CASE("sentence measures are means of token measures") {
  const std::int64_t v = 50000;
  auto one = masked_set({rec(4, -0.5, -2.0, 0.3, v)});
  CHECK(sentence_measure(one, MeasureKind::kCrr) == crr_token(one.masked[0]));
  CHECK(sentence_measure(one, MeasureKind::kDpa) == dpa_token(one.masked[0]));

  // crr_token values {0, .5, .75, 1 - 1/V, .8}; 0.2 has no integer rank.
  auto five = masked_set({rec(1, -0.2, -0.2, 0.1, v), rec(2, -0.2, -1.0, 0.1, v),
                          rec(4, -0.2, -2.0, 0.1, v), rec(v, -0.2, -9.0, 0.1, v),
                          rec(5, -0.2, -3.0, 0.1, v)});
  const long double oracle =
      (0.0L + 0.5L + 0.75L + (1.0L - 1.0L / v) + 0.8L) / 5.0L;
  CHECK(close(sentence_measure(five, MeasureKind::kCrr), static_cast<double>(oracle)));

  SentenceRecordSet empty;
  CHECK_THROWS_AS(sentence_measure(empty, MeasureKind::kCrr), std::invalid_argument);
  CHECK_THROWS_AS(sentence_measure(one, MeasureKind::kAul), std::invalid_argument);
}

TEST_CASE("sentence measures ignore record order") {
  const auto records = mock_records(5, 3);
  SentenceRecordSet set;
  for (const auto& r : records) {
    if (r.sentence_id == records.front().sentence_id && r.mode == Mode::kIterativeMasked) {
      set.masked.push_back(r);
    }
  }
  REQUIRE(set.masked.size() >= 4);
  std::mt19937_64 rng(1);
  for (MeasureKind k : {MeasureKind::kCrr, MeasureKind::kCrra, MeasureKind::kDp,
                        MeasureKind::kDpa}) {
    const double base = sentence_measure(set, k);
    auto shuffled = set;
    for (int i = 0; i < 5; ++i) {
      std::shuffle(shuffled.masked.begin(), shuffled.masked.end(), rng);
      CHECK(close(sentence_measure(shuffled, k), base));
    }
  }
}

TEST_CASE("uniform attention scales the attention-weighted forms") {
  const double c = 0.37;
  auto set = masked_set({rec(3, -0.5, -2.0, c), rec(1, -0.4, -0.4, c),
                         rec(12, -0.1, -4.0, c), rec(2, -1.0, -1.5, c)});
  CHECK(close(sentence_measure(set, MeasureKind::kDpa),
              c * sentence_measure(set, MeasureKind::kDp)));
  long double log_terms = 0.0L;
  for (auto rank : {3, 1, 12, 2}) log_terms += 1.0L + std::log(static_cast<long double>(rank));
  CHECK(close(sentence_measure(set, MeasureKind::kCrra),
              static_cast<double>(c * log_terms / 4.0L)));
}

TEST_CASE("csps and sss") {
  auto set = masked_set({rec(1, -2.0, -2.0, 0.1)});
  const std::vector<std::size_t> first{0};
  CHECK(csps(set, first) == -2.0);
  CHECK_THROWS_AS(csps(set, {}), std::invalid_argument);

  std::vector<TokenPredictionRecord> ten;
  for (int i = 0; i < 10; ++i) ten.push_back(rec(2, -1.0, i == 3 ? -4.0 : -1.5, 0.1));
  auto ten_set = masked_set(ten);
  const std::vector<std::size_t> m{3};
  const SssValue one = sss(ten_set, m);
  CHECK(close(one.value, -0.4));
  CHECK_FALSE(one.approx);
  CHECK_THROWS_AS(sss(ten_set, {}), std::invalid_argument);

  const std::vector<std::size_t> m2{3, 7};
  const SssValue two = sss(ten_set, m2);
  CHECK(two.approx);
  CHECK(close(two.value, (-4.0 - 1.5) / 10.0));
}

TEST_CASE("csps on the poor/rich sentence sums the unmodified tokens") {
  const std::vector<double> lp{-0.8, -9.1, -1.2, -3.3, -2.9, -1.1, -0.4,
                               -0.2, -3.0, -0.3, -4.4, -1.0, -0.6, -0.9};
  std::vector<TokenPredictionRecord> rs;
  for (double v : lp) rs.push_back(rec(3, -0.1, v, 0.2));
  auto set = masked_set(rs);
  std::vector<std::size_t> u;
  for (std::size_t i = 0; i < lp.size(); ++i) {
    if (i != 1) u.push_back(i);
  }
  long double oracle = 0.0L;
  for (std::size_t i : u) oracle += lp[i];
  CHECK(close(csps(set, u), static_cast<double>(oracle)));

  // Splits over any alignment: total = CSPS + sum over M.
  const std::vector<std::size_t> m{1};
  long double total = 0.0L;
  for (double v : lp) total += v;
  CHECK(close(csps(set, u) + sss(set, m).value * static_cast<double>(lp.size()),
              static_cast<double>(total)));
}

TEST_CASE("aul and aula") {
  SentenceRecordSet one;
  one.unmasked = {unmasked(-1.2, 0.3, 0)};
  CHECK(close(aul(one), -1.2));
  CHECK(close(aula(one), -0.36));

  SentenceRecordSet ones;
  for (std::size_t i = 0; i < 8; ++i) ones.unmasked.push_back(unmasked(-0.1 * (i + 1), 1.0, i));
  CHECK(close(aula(ones), aul(ones)));

  SentenceRecordSet eight;
  long double num = 0.0L, wnum = 0.0L;
  for (std::size_t i = 0; i < 8; ++i) {
    const double gt = -0.37 * static_cast<double>(i) - 0.05;
    const double a = 0.05 + 0.1 * static_cast<double>(i);
    eight.unmasked.push_back(unmasked(gt, a, i));
    num += gt;
    wnum += static_cast<long double>(a) * gt;
  }
  CHECK(close(aul(eight), static_cast<double>(num / 8.0L)));
  CHECK(close(aula(eight), static_cast<double>(wnum / 8.0L)));

  SentenceRecordSet none;
  CHECK_THROWS_AS(aul(none), std::invalid_argument);
  CHECK_THROWS_AS(aula(none), std::invalid_argument);
}

TEST_CASE("pairwise_sum agrees with long double accumulation") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-10.0, 0.0);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 100u, 1000u}) {
    std::vector<double> v(n);
    long double ref = 0.0L;
    for (auto& x : v) {
      x = u(rng);
      ref += x;
    }
    CHECK(close(pairwise_sum(v), static_cast<double>(ref)));
  }
}

TEST_CASE("score lines round-trip") {
  SentenceScore s;
  s.sentence_id = "cps-00001/dis";
  s.model_id = "m";
  s.values[MeasureKind::kCrr] = 0.862;
  s.values[MeasureKind::kSss] = -0.123456789012345678;
  s.sss_approx = true;
  const std::string line = to_json_line(s);
  CHECK(line.find("\"aul\":null") != std::string::npos);
  const SentenceScore back = parse_score_line(line);
  CHECK(back.sentence_id == s.sentence_id);
  CHECK(back.values == s.values);
  CHECK(back.sss_approx);
  CHECK_THROWS_AS(parse_score_line("{]", 4), ParseError);
}

TEST_CASE("measure names") {
  for (MeasureKind k : kAllMeasures) CHECK(parse_measure(to_string(k)) == k);
  CHECK_THROWS_AS(parse_measure("bleu"), ParseError);
  CHECK(set_of(MeasureKind::kDpa) == MeasureSet::kM1);
  CHECK(set_of(MeasureKind::kCsps) == MeasureSet::kM2);
}
