// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0

#include "mlmbias/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mlmbias/measures.hpp"
#include "mlmbias/special_functions.hpp"

namespace mlmbias {

namespace {

double mean_of(std::span<const double> v) {
  return pairwise_sum(v) / static_cast<double>(v.size());
}

// Unbiased sample variance, two-pass.
double variance_of(std::span<const double> v, double mean) {
  std::vector<double> sq(v.size());
  std::transform(v.begin(), v.end(), sq.begin(), [mean](double x) {
    return (x - mean) * (x - mean);
  });
  return pairwise_sum(sq) / static_cast<double>(v.size() - 1);
}

void finalize(StatResult& r) {
  r.p_value = std::clamp(r.p_value, 0.0, 1.0);
  r.significant = r.p_value < kSignificanceLevel;
}

}  // namespace

StatResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw std::invalid_argument("welch_t: each sample needs at least 2 values");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  const double sa = variance_of(a, ma) / na;
  const double sb = variance_of(b, mb) / nb;

  StatResult r;
  r.test_name = "welch-t";
  const double se2 = sa + sb;
  if (se2 == 0.0) {
    r.df = na + nb - 2.0;
    if (ma == mb) {
      r.statistic = 0.0;
      r.p_value = 1.0;
      r.note = "both samples constant and equal";
    } else {
      r.statistic = ma > mb ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
      r.note = "both samples constant";
    }
    finalize(r);
    return r;
  }
  r.statistic = (ma - mb) / std::sqrt(se2);
  const double df =
      se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  r.df = df;
  r.p_value = special::student_t_two_sided(r.statistic, df);
  finalize(r);
  return r;
}

StatResult mcnemar(long n01, long n10) {
  if (n01 < 0 || n10 < 0) {
    throw std::invalid_argument("mcnemar: counts must be non-negative");
  }
  StatResult r;
  const long n = n01 + n10;
  if (n == 0) {
    r.test_name = "mcnemar-exact";
    r.statistic = 0.0;
    r.p_value = 1.0;
    r.note = "no discordant pairs";
    finalize(r);
    return r;
  }
  if (n < 25) {
    const long k = std::min(n01, n10);
    r.test_name = "mcnemar-exact";
    r.statistic = static_cast<double>(k);
    r.p_value = std::min(1.0, 2.0 * special::binomial_cdf(k, n, 0.5));
  } else {
    const double d = std::fabs(static_cast<double>(n01 - n10)) - 1.0;
    r.test_name = "mcnemar-chi2";
    r.statistic = d * d / static_cast<double>(n);
    r.df = 1.0;
    r.p_value = special::chi_squared_sf(r.statistic, 1.0);
  }
  finalize(r);
  return r;
}

Contingency contingency(std::span<const bool> first,
                        std::span<const bool> second) {
  if (first.size() != second.size()) {
    throw std::invalid_argument("contingency: length mismatch");
  }
  Contingency c;
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i]) {
      (second[i] ? c.n11 : c.n10)++;
    } else {
      (second[i] ? c.n01 : c.n00)++;
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Shapiro-Wilk (Royston 1995, algorithm AS R94)

namespace {

double poly(std::span<const double> c, double x) {
  double r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
  return r;
}

}  // namespace

StatResult shapiro_wilk(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 3 || n > 5000) {
    throw std::invalid_argument("shapiro_wilk: sample size must be in [3, 5000]");
  }
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  if (!(x.back() - x.front() > 0.0)) {
    throw std::invalid_argument("shapiro_wilk: sample has zero variance");
  }

  static constexpr double c1[] = {0.0, 0.221157, -0.147981,
                                  -2.07119, 4.434685, -2.706056};
  static constexpr double c2[] = {0.0, 0.042981, -0.293762,
                                  -1.752461, 5.682633, -3.582633};
  static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
  static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
  static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
  static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};
  static constexpr double g[] = {-2.273, 0.459};

  const std::size_t half = n / 2;
  const double an = static_cast<double>(n);
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
  } else {
    std::vector<double> m(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
      m[i] = special::normal_quantile((static_cast<double>(i + 1) - 0.375) /
                                      (an + 0.25));
      summ2 += m[i] * m[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    const double a1 = poly(c1, rsn) - m[0] / ssumm2;
    std::size_t first;
    double fac;
    if (n > 5) {
      first = 2;
      const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                      (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
      a[1] = a2;
    } else {
      first = 1;
      fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    }
    a[0] = a1;
    for (std::size_t i = first; i < half; ++i) a[i] = -m[i] / fac;
  }

  const double mean = mean_of(x);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (x[i] - mean) * (x[i] - mean);
  const double ssq = pairwise_sum(sq);
  double num = 0.0;
  for (std::size_t i = 0; i < half; ++i) num += a[i] * (x[n - 1 - i] - x[i]);
  const double w = std::min(1.0, num * num / ssq);

  StatResult r;
  r.test_name = "shapiro-wilk";
  r.statistic = w;
  if (n == 3) {
    constexpr double kSixOverPi = 1.90985931710274;
    constexpr double kPiOverThree = 1.04719755119660;
    r.p_value = std::max(0.0, kSixOverPi * (std::asin(std::sqrt(w)) -
                                            kPiOverThree));
    finalize(r);
    return r;
  }
  double y = std::log1p(-w);
  double mu;
  double sigma;
  if (n <= 11) {
    const double gamma = poly(g, an);
    if (y >= gamma) {
      r.p_value = 1e-99;
      finalize(r);
      return r;
    }
    y = -std::log(gamma - y);
    mu = poly(c3, an);
    sigma = std::exp(poly(c4, an));
  } else {
    const double ln_n = std::log(an);
    mu = poly(c5, ln_n);
    sigma = std::exp(poly(c6, ln_n));
  }
  r.p_value = special::normal_sf(y, mu, sigma);
  finalize(r);
  return r;
}

// ---------------------------------------------------------------------------
// ECDF

double EcdfSeries::operator()(double x) const {
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return 0.0;
  return fractions[static_cast<std::size_t>(it - xs.begin()) - 1];
}

EcdfSeries ecdf(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("ecdf: empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  EcdfSeries out;
  out.n = v.size();
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    out.xs.push_back(v[i]);
    out.fractions.push_back(static_cast<double>(i + 1) / n);
  }
  return out;
}

EcdfDifference ecdf_diff(const EcdfSeries& a, const EcdfSeries& b) {
  if (a.xs.empty() || b.xs.empty()) {
    throw std::invalid_argument("ecdf_diff: empty series");
  }
  EcdfDifference out;
  std::set_union(a.xs.begin(), a.xs.end(), b.xs.begin(), b.xs.end(),
                 std::back_inserter(out.xs));
  out.diff.reserve(out.xs.size());
  for (double x : out.xs) out.diff.push_back(a(x) - b(x));
  return out;
}

// ---------------------------------------------------------------------------
// ROC

RocCurve roc(std::span<const double> scores, std::span<const bool> labels,
             RocOrientation orientation) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("roc: scores and labels differ in length");
  }
  const std::size_t n = scores.size();
  const auto positives =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw std::invalid_argument("roc: both classes must be present");
  }
  const double sign = orientation == RocOrientation::kLowerIsPositive ? -1.0 : 1.0;
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::isnan(scores[i])) throw std::invalid_argument("roc: NaN score");
    s[i] = sign * scores[i];
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return s[i] > s[j]; });

  RocCurve curve;
  const double P = static_cast<double>(positives);
  const double N = static_cast<double>(negatives);
  curve.points.push_back(
      {0.0, 0.0, sign * std::numeric_limits<double>::infinity()});
  double tp = 0.0;
  double fp = 0.0;
  curve.youden_j = -1.0;
  for (std::size_t k = 0; k < n;) {
    const double thr = s[order[k]];
    while (k < n && s[order[k]] == thr) {
      (labels[order[k]] ? tp : fp) += 1.0;
      ++k;
    }
    const RocPoint p{fp / N, tp / P, sign * thr};
    curve.points.push_back(p);
    if (p.tpr - p.fpr > curve.youden_j) {
      curve.youden_j = p.tpr - p.fpr;
      curve.youden_threshold = p.threshold;
    }
  }

  // Mann-Whitney U from mid-ranks (ascending).
  double rank_sum = 0.0;
  for (std::size_t k = n; k > 0;) {
    // order is descending; walk from the end to get ascending ranks.
    std::size_t hi = k;
    const double v = s[order[k - 1]];
    while (k > 0 && s[order[k - 1]] == v) --k;
    const double first_rank = static_cast<double>(n - hi + 1);
    const double last_rank = static_cast<double>(n - k);
    const double mid = 0.5 * (first_rank + last_rank);
    for (std::size_t t = k; t < hi; ++t) {
      if (labels[order[t]]) rank_sum += mid;
    }
  }
  const double u = rank_sum - P * (P + 1.0) / 2.0;
  curve.auc = u / (P * N);
  return curve;
}

}  // namespace mlmbias
