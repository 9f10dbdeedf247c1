#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "wavescale/transform.hpp"

namespace wavescale {

struct SynthesisSpec {
  double hurst = 0.5;
  int dimension = 1;       // 1 or 2
  std::size_t size = 512;  // sample count (1-D) or side (2-D), power of two
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

void validate_synthesis_spec(const SynthesisSpec& spec);

// fBm/fBf covariance (sigma^2/2)(|t|^2H + |s|^2H - |t-s|^2H).
double fbm_cov(std::span<const double> t, std::span<const double> s, double hurst,
               double sigma = 1.0);
double fbm_cov1(double t, double s, double hurst, double sigma = 1.0);

// 1-D fBm by circulant embedding of fractional Gaussian noise followed by a
// cumulative sum. Output sample k (k = 0..size-1) is X((k+1)/size); the
// pinned origin X(0) = 0 is implicit. The eigenvalue setup is done once per
// (hurst, size, sigma), so a generator can be reused across seeds.
class FbmGenerator1D {
 public:
  FbmGenerator1D(double hurst, std::size_t size, double sigma = 1.0);
  ~FbmGenerator1D();
  FbmGenerator1D(const FbmGenerator1D&) = delete;
  FbmGenerator1D& operator=(const FbmGenerator1D&) = delete;

  std::vector<double> generate(std::uint64_t seed, std::uint64_t stream_index = 0) const;

  double hurst() const;
  std::size_t size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// 2-D fractional Brownian field by circulant embedding of a stationary
// helper field with compact-support covariance (Stein's construction),
// exact on the simulated disk and mapped onto the unit square by
// self-similarity. Output grid holds B(k1/side, k2/side) for k = 1..side;
// B(0,0) = 0 is implicit.
class FbfGenerator2D {
 public:
  FbfGenerator2D(double hurst, std::size_t side, double sigma = 1.0);
  ~FbfGenerator2D();
  FbfGenerator2D(const FbfGenerator2D&) = delete;
  FbfGenerator2D& operator=(const FbfGenerator2D&) = delete;

  Grid2D generate(std::uint64_t seed, std::uint64_t stream_index = 0) const;

  double hurst() const;
  std::size_t side() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Convenience one-shot wrappers.
std::vector<double> synth_fbm_1d(const SynthesisSpec& spec);
Grid2D synth_fbf_2d(const SynthesisSpec& spec);

// Exact-covariance fallback: Cholesky factorization of the full covariance
// matrix on the same grid. Quadratic memory; restricted to side <= 128.
// The generator form factors once and can be reused across seeds.
class FbfCholeskyGenerator2D {
 public:
  FbfCholeskyGenerator2D(double hurst, std::size_t side, double sigma = 1.0);
  ~FbfCholeskyGenerator2D();
  FbfCholeskyGenerator2D(const FbfCholeskyGenerator2D&) = delete;
  FbfCholeskyGenerator2D& operator=(const FbfCholeskyGenerator2D&) = delete;

  Grid2D generate(std::uint64_t seed, std::uint64_t stream_index = 0) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Grid2D synth_fbf_2d_cholesky(const SynthesisSpec& spec);

enum class ScaleRule { match_average_energy, explicit_variance };

struct ContaminationSpec {
  int target_level = 3;
  // 2-D subbands to hit; ignored for 1-D (single detail band).
  std::vector<Direction> directions = {Direction::diagonal, Direction::horizontal,
                                       Direction::vertical};
  ScaleRule scale_rule = ScaleRule::match_average_energy;
  double variance = 0.0;  // used when scale_rule == explicit_variance
  std::uint64_t seed = 0;
  std::uint64_t stream_index = 0;
};

// Adds iid zero-mean Gaussian noise to every coefficient of the targeted
// subbands. Under match_average_energy the noise variance equals the
// subband's empirical mean squared coefficient. Untouched subbands are
// bit-identical to the input.
Decomposition1D contaminate(const Decomposition1D& decomp, const ContaminationSpec& spec);
Decomposition2D contaminate(const Decomposition2D& decomp, const ContaminationSpec& spec);

}  // namespace wavescale
