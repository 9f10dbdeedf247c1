#pragma once

#include <span>

namespace wavescale {

// Digamma for x > 0 (recurrence to the asymptotic range plus Bernoulli
// series); absolute error below 1e-12 for x >= 1e-3.
double digamma(double x);

// Regularized incomplete beta I_x(a,b) by the Lentz continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

// F distribution CDF and survival function.
double f_cdf(double x, double df1, double df2);
double f_sf(double x, double df1, double df2);

// Jarque-Bera normality statistic (asymptotically chi^2 with 2 df).
double jarque_bera(std::span<const double> sample);

// Lag-1 sample autocorrelation.
double lag1_autocorrelation(std::span<const double> sample);

}  // namespace wavescale
