// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Significance tests, empirical CDFs and ROC analysis.

#ifndef MLMBIAS_STATS_HPP_
#define MLMBIAS_STATS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mlmbias {

inline constexpr double kSignificanceLevel = 0.05;

struct StatResult {
  std::string test_name;
  double statistic = 0.0;
  std::optional<double> df;
  double p_value = 1.0;
  bool significant = false;
  // Set when a documented convention replaced the regular computation.
  std::string note;
};

// Two-tailed Welch's t-test of mean(a) == mean(b). Both samples need at
// least two values. Two constant samples give t = 0, p = 1 when their
// values agree and t = +-inf, p = 0 otherwise.
StatResult welch_t(std::span<const double> a, std::span<const double> b);

// McNemar's test on the discordant cells of a paired 2x2 table. Exact
// two-sided binomial test when n01 + n10 < 25, continuity-corrected
// chi-squared (df 1) otherwise. n01 + n10 == 0 yields p = 1 with a note.
StatResult mcnemar(long n01, long n10);

// Cell counts of (first bit, second bit).
struct Contingency {
  long n00 = 0;
  long n01 = 0;
  long n10 = 0;
  long n11 = 0;
};

// Counts paired bits; `first[i]` is the row, `second[i]` the column.
// Throws std::invalid_argument on a length mismatch.
Contingency contingency(std::span<const bool> first,
                        std::span<const bool> second);

// Shapiro-Wilk W test using Royston's polynomial approximations for the
// coefficients and the p-value (valid for 3 <= n <= 5000). Throws
// std::invalid_argument outside that range or for a constant sample.
StatResult shapiro_wilk(std::span<const double> sample);

// Right-continuous empirical CDF: `fractions[i]` = #{v <= xs[i]} / n over
// the distinct sorted values `xs`.
struct EcdfSeries {
  std::vector<double> xs;
  std::vector<double> fractions;
  std::size_t n = 0;

  double operator()(double x) const;
};

EcdfSeries ecdf(std::span<const double> values);

struct EcdfDifference {
  std::vector<double> xs;  // union of both jump sets
  std::vector<double> diff;  // a(x) - b(x)
};

EcdfDifference ecdf_diff(const EcdfSeries& a, const EcdfSeries& b);

enum class RocOrientation {
  kHigherIsPositive,
  kLowerIsPositive,
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // Score threshold producing this point (in original units); the (0, 0)
  // start point carries +-infinity.
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.5;
  double youden_threshold = 0.0;
  double youden_j = 0.0;
};

// Threshold sweep over the distinct scores. AUC is the Mann-Whitney
// statistic with ties counted as one half. Throws std::invalid_argument
// when only one class is present or lengths differ.
RocCurve roc(std::span<const double> scores, std::span<const bool> labels,
             RocOrientation orientation);

}  // namespace mlmbias

#endif  // MLMBIAS_STATS_HPP_
