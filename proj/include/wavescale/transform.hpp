#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wavescale/filters.hpp"

namespace wavescale {

enum class Direction { horizontal, vertical, diagonal, signal };

// Token used in file names and CSV: "h", "v", "d", "1d".
std::string direction_token(Direction dir);
Direction parse_direction(std::string_view token);

bool is_power_of_two(std::size_t n);
// n must be a power of two.
int log2_exact(std::size_t n);

// Square row-major grid with dyadic side.
struct Grid2D {
  std::size_t side = 0;
  std::vector<double> samples;

  Grid2D() = default;
  Grid2D(std::size_t side_, double fill = 0.0);

  double& at(std::size_t r, std::size_t c) { return samples[r * side + c]; }
  double at(std::size_t r, std::size_t c) const { return samples[r * side + c]; }

  Grid2D transposed() const;
};

// Checks side >= 2, power of two, all samples finite.
void validate_grid(const Grid2D& grid);

// One 2-D detail level: three directional subbands of side 2^j each.
// horizontal = lowpass along axis 0, highpass along axis 1 (phi x psi).
struct Subband2D {
  std::size_t side = 0;
  std::vector<double> h, v, d;

  const std::vector<double>& band(Direction dir) const;
  std::vector<double>& band(Direction dir);
};

struct Decomposition2D {
  int coarsest_level = 0;  // J0
  int finest_level = -1;   // J-1
  std::vector<Subband2D> levels;  // levels[0] is level J0
  std::vector<double> approx;     // 2^J0 x 2^J0, row-major
  std::size_t approx_side = 0;

  bool has_level(int j) const { return j >= coarsest_level && j <= finest_level; }
  const Subband2D& level(int j) const { return levels[static_cast<std::size_t>(j - coarsest_level)]; }
  Subband2D& level(int j) { return levels[static_cast<std::size_t>(j - coarsest_level)]; }
};

struct Decomposition1D {
  int coarsest_level = 0;
  int finest_level = -1;
  std::vector<std::vector<double>> details;  // details[0] is level J0, length 2^j each
  std::vector<double> approx;                // length 2^J0

  bool has_level(int j) const { return j >= coarsest_level && j <= finest_level; }
  const std::vector<double>& level(int j) const { return details[static_cast<std::size_t>(j - coarsest_level)]; }
  std::vector<double>& level(int j) { return details[static_cast<std::size_t>(j - coarsest_level)]; }
};

// Periodic (circular) Mallat cascade under L2 normalization. Level j holds
// 2^j coefficients per axis; the finest detail level of a 2^J input is J-1.
Decomposition1D dwt1d(const std::vector<double>& signal, const WaveletFilter& filter, int j0);
std::vector<double> idwt1d(const Decomposition1D& decomp, const WaveletFilter& filter);

Decomposition2D dwt2d(const Grid2D& grid, const WaveletFilter& filter, int j0);
Grid2D idwt2d(const Decomposition2D& decomp, const WaveletFilter& filter);

}  // namespace wavescale
