#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wavescale/transform.hpp"

namespace wavescale {

enum class BiasMode { none, second_order, exact_digamma };

std::string bias_mode_token(BiasMode mode);  // "none" | "av" | "digamma"
BiasMode parse_bias_mode(std::string_view token);

struct LevelRange {
  int first = 0;
  int last = 0;

  int count() const { return last - first + 1; }
};

// Default spectrum range for a dyadic input of the given size: five levels
// ending one below the finest, [J-6, J-2] for side 2^J, floored at level 1.
// The finest level of a sampled grid carries a discretization energy excess
// and is excluded by default.
LevelRange default_level_range(std::size_t size);

struct SpectrumPoint {
  int level = 0;
  std::size_t count = 0;      // n_j = 2^{mj}
  double mean_energy = 0.0;   // mu_j
  double log_energy = 0.0;    // y_j = log2 mu_j (plus any correction)
};

struct WaveletSpectrum {
  Direction direction = Direction::signal;
  int dimension = 1;
  BiasMode bias_mode = BiasMode::none;
  std::vector<SpectrumPoint> points;
};

WaveletSpectrum level_energies(const Decomposition1D& decomp, LevelRange range);
WaveletSpectrum level_energies(const Decomposition2D& decomp, Direction direction,
                               LevelRange range);

// second_order adds 1/(n_j ln 2) to each y_j; exact_digamma subtracts the
// exact log2-chi-square bias (psi(n_j/2) - ln(n_j/2))/ln 2. Input must be
// uncorrected.
WaveletSpectrum apply_bias_correction(const WaveletSpectrum& spectrum, BiasMode mode);

// Asymptotic variance of y_j and the matching regression weight:
// var = 2/(n_j ln^2 2), weight = its reciprocal.
double av_variance(std::size_t n);
double av_weight(std::size_t n);

// (psi(n/2) - ln(n/2))/ln 2, the exact bias of log2 of a mean of n squared
// iid centered Gaussians.
double exact_log2_bias(std::size_t n);

}  // namespace wavescale
