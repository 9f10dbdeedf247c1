#pragma once

#include <string>

#include "wavescale/spectrum.hpp"

namespace wavescale {

enum class EstimatorMethod { ols, av, tt };

std::string method_token(EstimatorMethod method);  // "ols" | "av" | "tt"
EstimatorMethod parse_method(std::string_view token);

struct HurstEstimate {
  EstimatorMethod method = EstimatorMethod::ols;
  Direction direction = Direction::signal;
  int dimension = 1;
  double slope = 0.0;
  double hurst = 0.0;
  LevelRange level_range{0, 0};
  int n_levels = 0;
  // Estimates are never clamped; out-of-range values are only flagged.
  bool out_of_range = false;
};

struct EstimatorOptions {
  BiasMode av_bias = BiasMode::second_order;  // AV correction; none disables
  bool tt_pair_correction = true;             // TT pairwise bias correction
};

// H = -(slope + m)/2.
double slope_to_hurst(double slope, int dimension);

// (i-j)^2 * HA(2^{mi}, 2^{mj}) with HA the harmonic average.
double pairwise_weight(int i, int j, int dimension);

// Unweighted least squares on (j, y_j) pairs; raw (uncorrected) energies.
HurstEstimate estimate_ols(const WaveletSpectrum& spectrum, int dimension);

// Bias-corrected weighted least squares, weights proportional to n_j.
HurstEstimate estimate_av(const WaveletSpectrum& spectrum, int dimension,
                          const EstimatorOptions& options = {});

// Theil-type weighted mean of all bias-corrected pairwise slopes
// s*_ij = s_ij + (2^{-mj} - 2^{-mi}) / ((j-i) ln 2).
HurstEstimate estimate_tt(const WaveletSpectrum& spectrum, int dimension,
                          const EstimatorOptions& options = {});

HurstEstimate estimate(EstimatorMethod method, const WaveletSpectrum& spectrum,
                       int dimension, const EstimatorOptions& options = {});

}  // namespace wavescale
