#include "wavescale/stats.hpp"

#include <cmath>
#include <limits>

#include "wavescale/errors.hpp"

namespace wavescale {

double digamma(double x) {
  if (!(x > 0.0)) {
    throw Error(Error::Kind::invalid_input, "digamma requires x > 0");
  }
  double result = 0.0;
  while (x < 10.0) {
    result -= 1.0 / x;
    x += 1.0;
  }
  // Asymptotic series with Bernoulli coefficients.
  const double inv2 = 1.0 / (x * x);
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0 -
                  inv2 * (691.0 / 32760.0))))));
  return result + std::log(x) - 0.5 / x - series;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw Error(Error::Kind::numeric_failure, "incomplete beta did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw Error(Error::Kind::invalid_input, "incomplete beta requires a,b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_cf(a, b, x) / a;
  }
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double df1, double df2) {
  if (x <= 0.0) return 0.0;
  return regularized_incomplete_beta(df1 / 2.0, df2 / 2.0,
                                     df1 * x / (df1 * x + df2));
}

double f_sf(double x, double df1, double df2) {
  if (x <= 0.0) return 1.0;
  // Upper tail via the mirrored argument; stable for small p.
  return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * x));
}

double jarque_bera(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 4) {
    throw Error(Error::Kind::invalid_input, "jarque_bera needs at least 4 samples");
  }
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : sample) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (m2 <= 0.0) return std::numeric_limits<double>::infinity();
  const double skew = m3 / std::pow(m2, 1.5);
  const double kurt = m4 / (m2 * m2);
  const double nn = static_cast<double>(n);
  return nn * (skew * skew / 6.0 + (kurt - 3.0) * (kurt - 3.0) / 24.0);
}

double lag1_autocorrelation(std::span<const double> sample) {
  const std::size_t n = sample.size();
  if (n < 2) {
    throw Error(Error::Kind::invalid_input, "autocorrelation needs >= 2 samples");
  }
  double mean = 0.0;
  for (double v : sample) mean += v;
  mean /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = sample[i] - mean;
    den += d * d;
    if (i + 1 < n) num += d * (sample[i + 1] - mean);
  }
  if (den == 0.0) return 0.0;
  return num / den;
}

}  // namespace wavescale
