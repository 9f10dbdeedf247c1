#include "wavescale/estimators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wavescale/errors.hpp"

namespace wavescale {

namespace {

const double kLn2 = std::numbers::ln2;

void check_dimension(int m) {
  if (m != 1 && m != 2) {
    throw Error(Error::Kind::invalid_input, "dimension must be 1 or 2");
  }
}

void check_points(const WaveletSpectrum& spectrum) {
  if (spectrum.points.size() < 2) {
    throw InsufficientLevels("estimator needs at least 2 spectrum levels, got " +
                             std::to_string(spectrum.points.size()));
  }
}

HurstEstimate finish(EstimatorMethod method, const WaveletSpectrum& spectrum, int m,
                     double slope) {
  HurstEstimate est;
  est.method = method;
  est.direction = spectrum.direction;
  est.dimension = m;
  est.slope = slope;
  est.hurst = slope_to_hurst(slope, m);
  est.level_range = {spectrum.points.front().level, spectrum.points.back().level};
  est.n_levels = static_cast<int>(spectrum.points.size());
  est.out_of_range = !(est.hurst > 0.0 && est.hurst < 1.0);
  return est;
}

double weighted_slope(const std::vector<SpectrumPoint>& pts,
                      const std::vector<double>& w) {
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    sw += w[i];
    sx += w[i] * pts[i].level;
    sy += w[i] * pts[i].log_energy;
  }
  const double xbar = sx / sw;
  const double ybar = sy / sw;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double dx = pts[i].level - xbar;
    num += w[i] * dx * (pts[i].log_energy - ybar);
    den += w[i] * dx * dx;
  }
  return num / den;
}

}  // namespace

std::string method_token(EstimatorMethod method) {
  switch (method) {
    case EstimatorMethod::ols: return "ols";
    case EstimatorMethod::av: return "av";
    case EstimatorMethod::tt: return "tt";
  }
  return "?";
}

EstimatorMethod parse_method(std::string_view token) {
  if (token == "ols") return EstimatorMethod::ols;
  if (token == "av") return EstimatorMethod::av;
  if (token == "tt") return EstimatorMethod::tt;
  throw Error(Error::Kind::invalid_input, "unknown estimator: " + std::string(token));
}

double slope_to_hurst(double slope, int dimension) {
  check_dimension(dimension);
  return -(slope + dimension) / 2.0;
}

double pairwise_weight(int i, int j, int dimension) {
  check_dimension(dimension);
  if (i == j) throw DegeneratePair("pairwise weight undefined for i == j");
  const double ni = std::exp2(dimension * i);
  const double nj = std::exp2(dimension * j);
  const double harmonic = 2.0 * ni * nj / (ni + nj);
  const double gap = static_cast<double>(i - j);
  return gap * gap * harmonic;
}

HurstEstimate estimate_ols(const WaveletSpectrum& spectrum, int dimension) {
  check_dimension(dimension);
  check_points(spectrum);
  if (spectrum.bias_mode != BiasMode::none) {
    throw AlreadyCorrected("OLS regresses raw (uncorrected) energies");
  }
  std::vector<double> w(spectrum.points.size(), 1.0);
  return finish(EstimatorMethod::ols, spectrum, dimension,
                weighted_slope(spectrum.points, w));
}

HurstEstimate estimate_av(const WaveletSpectrum& spectrum, int dimension,
                          const EstimatorOptions& options) {
  check_dimension(dimension);
  check_points(spectrum);
  const WaveletSpectrum corrected =
      (options.av_bias == BiasMode::none) ? spectrum
                                          : apply_bias_correction(spectrum, options.av_bias);
  std::vector<double> w(corrected.points.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = av_weight(corrected.points[i].count);
  }
  return finish(EstimatorMethod::av, corrected, dimension,
                weighted_slope(corrected.points, w));
}

HurstEstimate estimate_tt(const WaveletSpectrum& spectrum, int dimension,
                          const EstimatorOptions& options) {
  check_dimension(dimension);
  check_points(spectrum);
  if (spectrum.bias_mode != BiasMode::none) {
    throw AlreadyCorrected("TT applies its own pairwise correction");
  }
  const auto& pts = spectrum.points;
  double num = 0.0, den = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      const int i = pts[a].level;
      const int j = pts[b].level;
      double s = (pts[b].log_energy - pts[a].log_energy) / static_cast<double>(j - i);
      if (options.tt_pair_correction) {
        s += (std::exp2(-dimension * j) - std::exp2(-dimension * i)) /
             (static_cast<double>(j - i) * kLn2);
      }
      const double w = pairwise_weight(i, j, dimension);
      num += w * s;
      den += w;
    }
  }
  return finish(EstimatorMethod::tt, spectrum, dimension, num / den);
}

HurstEstimate estimate(EstimatorMethod method, const WaveletSpectrum& spectrum,
                       int dimension, const EstimatorOptions& options) {
  switch (method) {
    case EstimatorMethod::ols: return estimate_ols(spectrum, dimension);
    case EstimatorMethod::av: return estimate_av(spectrum, dimension, options);
    case EstimatorMethod::tt: return estimate_tt(spectrum, dimension, options);
  }
  throw Error(Error::Kind::invalid_input, "unknown estimator method");
}

}  // namespace wavescale
