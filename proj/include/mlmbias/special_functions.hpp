// Copyright 2026 The mlmbias Authors
// SPDX-License-Identifier: Apache-2.0
//
// Special functions backing the p-value computations. Accuracy target is an
// absolute error of 1e-10 or better over the ranges the tests exercise.

#ifndef MLMBIAS_SPECIAL_FUNCTIONS_HPP_
#define MLMBIAS_SPECIAL_FUNCTIONS_HPP_

namespace mlmbias::special {

// Regularized incomplete beta I_x(a, b); a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

// Regularized lower / upper incomplete gamma P(a, x), Q(a, x); a > 0, x >= 0.
double incomplete_gamma_p(double a, double x);
double incomplete_gamma_q(double a, double x);

double normal_cdf(double z);
// Upper tail of N(mean, sd).
double normal_sf(double x, double mean, double sd);
// Inverse of the standard normal CDF; p in (0, 1).
double normal_quantile(double p);

// P(|T| > |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

// P(X > x) for chi-squared with `df` degrees of freedom.
double chi_squared_sf(double x, double df);

// P(X <= k) for X ~ Binomial(n, p).
double binomial_cdf(long k, long n, double p);

}  // namespace mlmbias::special

#endif  // MLMBIAS_SPECIAL_FUNCTIONS_HPP_
