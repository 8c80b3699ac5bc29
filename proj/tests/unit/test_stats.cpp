// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "mlmbias/stats.hpp"
#include "oracles/reference_tables.hpp"

using namespace mlmbias;

namespace {

// Two-sided exact binomial p by summing every outcome no more likely than
// the observed one.
double brute_force_binomial_p(long k, long n) {
  std::vector<long double> pmf(static_cast<std::size_t>(n + 1));
  for (long i = 0; i <= n; ++i) {
    long double c = 1.0L;
    for (long j = 1; j <= i; ++j) c = c * static_cast<long double>(n - i + j) / j;
    pmf[static_cast<std::size_t>(i)] = c * std::pow(0.5L, static_cast<long double>(n));
  }
  long double p = 0.0L;
  const long double observed = pmf[static_cast<std::size_t>(k)];
  for (long double v : pmf) {
    if (v <= observed * (1.0L + 1e-12L)) p += v;
  }
  return static_cast<double>(std::min(1.0L, p));
}

double pair_counting_auc(const std::vector<double>& s, const std::vector<bool>& y) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (!y[i] || y[j]) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / pairs;
}

std::unique_ptr<bool[]> as_array(const std::vector<bool>& v) {
  std::unique_ptr<bool[]> out(new bool[v.size()]);
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
  return out;
}

RocCurve run_roc(const std::vector<double>& s, const std::vector<bool>& y,
                 RocOrientation o = RocOrientation::kHigherIsPositive) {
  auto arr = as_array(y);
  return roc(s, std::span<const bool>(arr.get(), y.size()), o);
}

}  // namespace

TEST_CASE("welch_t against reference table") {
  for (const auto& c : oracle::kWelchCases) {
    const StatResult r = welch_t(c.a, c.b);
    CHECK(r.test_name == "welch-t");
    CHECK(std::fabs(r.statistic - c.t) <= 1e-9 * std::max(1.0, std::fabs(c.t)));
    REQUIRE(r.df);
    CHECK(std::fabs(*r.df - c.df) <= 1e-9 * std::max(1.0, c.df));
    CHECK(std::fabs(r.p_value - c.p) <= 1e-9);
    CHECK(r.significant == (c.p < 0.05));
  }
}

TEST_CASE("welch_t properties") {
  const std::vector<double> a{1.0, 2.5, 3.0, 4.2, 5.0};
  const std::vector<double> b{2.0, 3.1, 4.0, 5.9, 6.0, 7.5};
  const auto ab = welch_t(a, b);
  const auto ba = welch_t(b, a);
  CHECK(ab.statistic == doctest::Approx(-ba.statistic).epsilon(1e-14));
  CHECK(ab.p_value == doctest::Approx(ba.p_value).epsilon(1e-14));

  std::vector<double> ka, kb;
  for (double x : a) ka.push_back(4.5 * x);
  for (double x : b) kb.push_back(4.5 * x);
  const auto k = welch_t(ka, kb);
  CHECK(k.statistic == doctest::Approx(ab.statistic).epsilon(1e-12));
  CHECK(k.p_value == doctest::Approx(ab.p_value).epsilon(1e-12));

  const auto same = welch_t(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == doctest::Approx(1.0).epsilon(1e-14));

  const std::vector<double> c1{2.0, 2.0, 2.0}, c2{2.0, 2.0};
  const auto flat = welch_t(c1, c2);
  CHECK(flat.p_value == 1.0);
  CHECK_FALSE(flat.note.empty());

  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(welch_t(one, a), std::invalid_argument);
}

TEST_CASE("mcnemar exact branch equals brute-force binomial") {
  for (long n01 = 0; n01 < 25; ++n01) {
    for (long n10 = 0; n01 + n10 < 25; ++n10) {
      if (n01 + n10 == 0) continue;
      const StatResult r = mcnemar(n01, n10);
      CHECK(r.test_name == "mcnemar-exact");
      CHECK(std::fabs(r.p_value -
                      brute_force_binomial_p(std::min(n01, n10), n01 + n10)) <= 1e-12);
      CHECK(mcnemar(n10, n01).p_value == r.p_value);
    }
  }
  const auto r = mcnemar(15, 3);
  CHECK(std::fabs(r.p_value - brute_force_binomial_p(3, 18)) <= 1e-12);
  CHECK(r.significant);
}

TEST_CASE("mcnemar chi-squared branch and conventions") {
  const auto r = mcnemar(20, 5);
  CHECK(r.test_name == "mcnemar-chi2");
  CHECK(r.statistic == doctest::Approx(14.0 * 14.0 / 25.0).epsilon(1e-14));
  REQUIRE(r.df);
  CHECK(*r.df == 1.0);
  CHECK(mcnemar(13, 12).test_name == "mcnemar-chi2");
  CHECK(mcnemar(12, 12).test_name == "mcnemar-exact");
  for (long n : {1L, 10L, 12L, 30L}) CHECK_FALSE(mcnemar(n, n).significant);

  const auto zero = mcnemar(0, 0);
  CHECK(zero.p_value == 1.0);
  CHECK_FALSE(zero.note.empty());
  CHECK_THROWS_AS(mcnemar(-1, 3), std::invalid_argument);
}

TEST_CASE("contingency") {
  const bool a[] = {true, true, false, false, true};
  const bool b[] = {true, false, true, false, false};
  const Contingency c = contingency(a, b);
  CHECK(c.n11 == 1);
  CHECK(c.n10 == 2);
  CHECK(c.n01 == 1);
  CHECK(c.n00 == 1);
  CHECK_THROWS_AS(contingency(std::span<const bool>(a, 2), b), std::invalid_argument);
}

TEST_CASE("shapiro_wilk against reference table") {
  for (const auto& c : oracle::kShapiroCases) {
    CAPTURE(c.x.size());
    const StatResult r = shapiro_wilk(c.x);
    CHECK(std::fabs(r.statistic - c.w) <= 1e-6);
    CHECK(std::fabs(r.p_value - c.p) <= 1e-5);
  }
}

TEST_CASE("shapiro_wilk properties") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> x(30), y(30);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = n(rng);
      y[i] = 3.0 - 2.5 * x[i];
    }
    const auto rx = shapiro_wilk(x);
    CHECK(rx.statistic <= 1.0);
    CHECK(shapiro_wilk(y).statistic == doctest::Approx(rx.statistic).epsilon(1e-10));
  }
  const std::vector<double> two{1.0, 2.0};
  const std::vector<double> flat{1.0, 1.0, 1.0, 1.0};
  CHECK_THROWS_AS(shapiro_wilk(two), std::invalid_argument);
  CHECK_THROWS_AS(shapiro_wilk(flat), std::invalid_argument);
  CHECK_THROWS_AS(shapiro_wilk(std::vector<double>(5001, 0.0)), std::invalid_argument);
}

TEST_CASE("shapiro_wilk Monte-Carlo calibration") {
  std::mt19937_64 rng(2718);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::size_t normal_pass = 0;
  std::size_t exp_reject = 0;
  std::vector<double> x(50);
  for (int t = 0; t < 1000; ++t) {
    for (auto& v : x) {
      const double u1 = 1.0 - unit();
      v = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * unit());
    }
    if (shapiro_wilk(x).p_value > 0.05) ++normal_pass;
    for (auto& v : x) v = -std::log1p(-unit());
    if (shapiro_wilk(x).p_value < 0.05) ++exp_reject;
  }
  // The acceptance rate under normality is the nominal 95%, so a 1000-trial
  // count scatters around 950; 927 is the lower 99.9% binomial limit.
  CHECK(normal_pass >= 927);
  CHECK(exp_reject >= 900);
}

TEST_CASE("ecdf") {
  const std::vector<double> v{3.0, 1.0, 2.0, 2.0};
  const EcdfSeries e = ecdf(v);
  CHECK(e.xs == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(e.fractions == std::vector<double>{0.25, 0.75, 1.0});
  CHECK(e(0.5) == 0.0);
  CHECK(e(2.0) == 0.75);
  CHECK(e(2.5) == 0.75);
  CHECK(e(10.0) == 1.0);
  CHECK_THROWS_AS(ecdf({}), std::invalid_argument);
}

TEST_CASE("ecdf_diff") {
  const std::vector<double> zeros{0.0, 0.0}, ones{1.0, 1.0};
  const auto d = ecdf_diff(ecdf(zeros), ecdf(ones));
  CHECK(d.xs == std::vector<double>{0.0, 1.0});
  CHECK(d.diff == std::vector<double>{1.0, 0.0});

  const std::vector<double> s{0.3, -1.0, 2.0, 0.3};
  const auto same = ecdf_diff(ecdf(s), ecdf(s));
  for (double x : same.diff) CHECK(x == 0.0);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> a(100), b(100);
    for (auto& x : a) x = std::round(u(rng) * 50.0) / 50.0;
    for (auto& x : b) x = std::round((u(rng) * 0.8 + 0.1) * 50.0) / 50.0;
    const auto diff = ecdf_diff(ecdf(a), ecdf(b));
    // Step integral of the difference equals mean(b) - mean(a).
    double integral = 0.0;
    for (std::size_t i = 0; i + 1 < diff.xs.size(); ++i) {
      integral += diff.diff[i] * (diff.xs[i + 1] - diff.xs[i]);
    }
    double ma = 0.0, mb = 0.0;
    for (double x : a) ma += x / 100.0;
    for (double x : b) mb += x / 100.0;
    CHECK(integral == doctest::Approx(mb - ma).epsilon(1e-12));
    for (double x : diff.diff) {
      CHECK(x >= -1.0);
      CHECK(x <= 1.0);
    }
  }
}

TEST_CASE("roc basics") {
  const std::vector<double> s{0.9, 0.8, 0.3, 0.1};
  const std::vector<bool> y{true, true, false, false};
  const auto c = run_roc(s, y);
  CHECK(c.auc == 1.0);
  CHECK(c.youden_j == 1.0);
  CHECK(c.youden_threshold == 0.8);
  CHECK(c.points.front().fpr == 0.0);
  CHECK(c.points.back().fpr == 1.0);
  CHECK(c.points.back().tpr == 1.0);
  CHECK(run_roc(s, y, RocOrientation::kLowerIsPositive).auc == 0.0);

  const std::vector<double> flat(6, 0.5);
  const std::vector<bool> mixed{true, false, true, false, false, true};
  CHECK(run_roc(flat, mixed).auc == 0.5);

  const std::vector<bool> single(4, true);
  CHECK_THROWS_AS(run_roc(s, single), std::invalid_argument);
}

TEST_CASE("roc AUC equals pair counting and is monotone-invariant") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> level(0, 9);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 20 + t;
    std::vector<double> s(n);
    std::vector<bool> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = i % 3 == 0 || (rng() % 2 == 0);
      s[i] = 0.1 * level(rng) + (y[i] ? 0.15 : 0.0);
    }
    y[0] = true;
    y[1] = false;
    const auto c = run_roc(s, y);
    CHECK(std::fabs(c.auc - pair_counting_auc(s, y)) <= 1e-12);

    std::vector<double> transformed(n), negated(n);
    for (std::size_t i = 0; i < n; ++i) {
      transformed[i] = std::exp(3.0 * s[i]) - 2.0;
      negated[i] = -s[i];
    }
    CHECK(std::fabs(run_roc(transformed, y).auc - c.auc) <= 1e-12);
    CHECK(std::fabs(run_roc(negated, y, RocOrientation::kLowerIsPositive).auc - c.auc) <= 1e-12);
    for (std::size_t i = 1; i < c.points.size(); ++i) {
      CHECK(c.points[i].fpr >= c.points[i - 1].fpr);
      CHECK(c.points[i].tpr >= c.points[i - 1].tpr);
    }
  }
}
