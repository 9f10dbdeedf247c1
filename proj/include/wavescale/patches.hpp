#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "wavescale/estimators.hpp"
#include "wavescale/transform.hpp"

namespace wavescale {

// Rectangular image, row-major.
struct Image {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> pixels;

  Image() = default;
  Image(std::size_t rows_, std::size_t cols_, double fill = 0.0);

  double& at(std::size_t r, std::size_t c) { return pixels[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return pixels[r * cols + c]; }
};

struct PatchLayout {
  std::size_t side = 1024;
  std::vector<std::pair<std::size_t, std::size_t>> offsets;  // (row, col)
};

// Default five placements: the four corners of the usable extent inset by
// `inset` pixels, plus the center.
PatchLayout five_patch_layout(std::size_t rows, std::size_t cols, std::size_t side,
                              std::size_t inset = 0);

std::vector<Grid2D> extract_patches(const Image& image, const PatchLayout& layout);

struct DirectionalHurst {
  double h_d = 0.0;
  double h_h = 0.0;
  double h_v = 0.0;
};

// dwt2d -> per-direction level energies -> chosen estimator.
DirectionalHurst image_hurst(const Grid2D& patch, const WaveletFilter& filter,
                             LevelRange levels, EstimatorMethod method,
                             const EstimatorOptions& options = {});

}  // namespace wavescale
