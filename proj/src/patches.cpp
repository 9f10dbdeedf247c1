#include "wavescale/patches.hpp"

#include <algorithm>
#include <string>

#include "wavescale/errors.hpp"

namespace wavescale {

Image::Image(std::size_t rows_, std::size_t cols_, double fill)
    : rows(rows_), cols(cols_), pixels(rows_ * cols_, fill) {}

PatchLayout five_patch_layout(std::size_t rows, std::size_t cols, std::size_t side,
                              std::size_t inset) {
  if (rows < side + 2 * inset || cols < side + 2 * inset) {
    throw InsufficientExtent("image " + std::to_string(rows) + "x" +
                             std::to_string(cols) + " cannot hold a " +
                             std::to_string(side) + " patch with inset " +
                             std::to_string(inset));
  }
  const std::size_t max_r = rows - side - inset;
  const std::size_t max_c = cols - side - inset;
  PatchLayout layout;
  layout.side = side;
  layout.offsets = {
      {inset, inset},
      {inset, max_c},
      {max_r, inset},
      {max_r, max_c},
      {(rows - side) / 2, (cols - side) / 2},
  };
  return layout;
}

std::vector<Grid2D> extract_patches(const Image& image, const PatchLayout& layout) {
  if (layout.offsets.empty()) {
    throw Error(Error::Kind::invalid_input, "patch layout has no placements");
  }
  std::vector<Grid2D> patches;
  patches.reserve(layout.offsets.size());
  for (const auto& [r0, c0] : layout.offsets) {
    if (r0 + layout.side > image.rows || c0 + layout.side > image.cols) {
      throw InsufficientExtent("patch at (" + std::to_string(r0) + "," +
                               std::to_string(c0) + ") exceeds image bounds");
    }
    Grid2D patch(layout.side);
    for (std::size_t r = 0; r < layout.side; ++r) {
      for (std::size_t c = 0; c < layout.side; ++c) {
        patch.at(r, c) = image.at(r0 + r, c0 + c);
      }
    }
    validate_grid(patch);
    patches.push_back(std::move(patch));
  }
  return patches;
}

DirectionalHurst image_hurst(const Grid2D& patch, const WaveletFilter& filter,
                             LevelRange levels, EstimatorMethod method,
                             const EstimatorOptions& options) {
  const int j0 = std::max(0, levels.first - 1);
  const Decomposition2D decomp = dwt2d(patch, filter, j0);
  DirectionalHurst out;
  out.h_d = estimate(method, level_energies(decomp, Direction::diagonal, levels), 2,
                     options).hurst;
  out.h_h = estimate(method, level_energies(decomp, Direction::horizontal, levels), 2,
                     options).hurst;
  out.h_v = estimate(method, level_energies(decomp, Direction::vertical, levels), 2,
                     options).hurst;
  return out;
}

}  // namespace wavescale
