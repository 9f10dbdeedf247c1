#include "wavescale/synthesis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <string>

#include "wavescale/errors.hpp"
#include "wavescale/rng.hpp"

namespace wavescale {

namespace {

// FFTW plan creation is not thread-safe; execution on distinct buffers is.
std::mutex g_fftw_mutex;

struct FftwBuffer {
  fftw_complex* data = nullptr;
  explicit FftwBuffer(std::size_t n) {
    data = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  std::complex<double>* cx() { return reinterpret_cast<std::complex<double>*>(data); }
};

class FftPlan {
 public:
  // 1-D forward complex plan of length n (rank 1) or n x n (rank 2).
  FftPlan(int rank, std::size_t n) : n_(n) {
    const std::size_t total = (rank == 1) ? n : n * n;
    FftwBuffer in(total), out(total);
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    // FFTW_ESTIMATE keeps the chosen algorithm (hence rounding) reproducible.
    if (rank == 1) {
      plan_ = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, FFTW_FORWARD,
                               FFTW_ESTIMATE);
    } else {
      plan_ = fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), in.data,
                               out.data, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    if (!plan_) throw Error(Error::Kind::numeric_failure, "fftw plan creation failed");
  }
  ~FftPlan() {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_destroy_plan(plan_);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  void execute(FftwBuffer& in, FftwBuffer& out) const {
    fftw_execute_dft(plan_, in.data, out.data);
  }

 private:
  std::size_t n_;
  fftw_plan plan_;
};

void check_hurst(double hurst) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw InvalidHurst("Hurst exponent must lie in (0,1), got " + std::to_string(hurst));
  }
}

double norm_of(std::span<const double> p) {
  double s = 0.0;
  for (double v : p) s += v * v;
  return std::sqrt(s);
}

// Eigenvalue guard: circulant spectra are nonnegative in exact arithmetic;
// tiny negative roundoff is clamped, anything larger is a hard failure.
void sqrt_eigenvalues(std::vector<double>& lambda) {
  double max_lambda = 0.0;
  for (double v : lambda) max_lambda = std::max(max_lambda, v);
  const double tol = 1e-8 * max_lambda;
  for (double& v : lambda) {
    if (v < -tol) {
      throw EmbeddingFailure("circulant embedding is not positive semidefinite (min " +
                             std::to_string(v) + ")");
    }
    v = std::sqrt(std::max(v, 0.0));
  }
}

}  // namespace

void validate_synthesis_spec(const SynthesisSpec& spec) {
  check_hurst(spec.hurst);
  if (spec.dimension != 1 && spec.dimension != 2) {
    throw Error(Error::Kind::invalid_input, "synthesis dimension must be 1 or 2");
  }
  if (!is_power_of_two(spec.size) || spec.size < 2) {
    throw InvalidShape("synthesis size must be a power of two >= 2");
  }
  if (!(spec.sigma > 0.0)) {
    throw Error(Error::Kind::invalid_input, "sigma must be positive");
  }
}

double fbm_cov(std::span<const double> t, std::span<const double> s, double hurst,
               double sigma) {
  check_hurst(hurst);
  if (t.size() != s.size() || t.empty()) {
    throw Error(Error::Kind::invalid_input, "fbm_cov points must share a dimension");
  }
  std::vector<double> diff(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) diff[i] = t[i] - s[i];
  const double a = norm_of(t);
  const double b = norm_of(s);
  const double c = norm_of(diff);
  const double h2 = 2.0 * hurst;
  return 0.5 * sigma * sigma *
         (std::pow(a, h2) + std::pow(b, h2) - std::pow(c, h2));
}

double fbm_cov1(double t, double s, double hurst, double sigma) {
  const double tt[1] = {t};
  const double ss[1] = {s};
  return fbm_cov(std::span<const double>(tt, 1), std::span<const double>(ss, 1), hurst,
                 sigma);
}

// ---------------------------------------------------------------------------
// 1-D: circulant embedding of fractional Gaussian noise.

struct FbmGenerator1D::Impl {
  double hurst;
  std::size_t n;
  double sigma;
  std::vector<double> sqrt_lambda;  // length 2n
  FftPlan plan;

  Impl(double hurst_, std::size_t n_, double sigma_)
      : hurst(hurst_), n(n_), sigma(sigma_), plan(1, 2 * n_) {
    const double delta = 1.0 / static_cast<double>(n);
    const double scale = sigma * sigma * std::pow(delta, 2.0 * hurst);
    const double h2 = 2.0 * hurst;
    // fGn autocovariance gamma(k), k = 0..n.
    std::vector<double> gamma(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      gamma[k] = 0.5 * scale *
                 (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) +
                  std::pow(std::abs(kk - 1.0), h2));
    }
    const std::size_t m = 2 * n;
    FftwBuffer in(m), out(m);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t k = (j <= n) ? j : m - j;
      in.cx()[j] = {gamma[k], 0.0};
    }
    plan.execute(in, out);
    std::vector<double> lambda(m);
    for (std::size_t j = 0; j < m; ++j) lambda[j] = out.cx()[j].real();
    sqrt_eigenvalues(lambda);
    sqrt_lambda = std::move(lambda);
  }
};

FbmGenerator1D::FbmGenerator1D(double hurst, std::size_t size, double sigma) {
  SynthesisSpec spec{hurst, 1, size, sigma, 0};
  validate_synthesis_spec(spec);
  impl_ = std::make_unique<Impl>(hurst, size, sigma);
}

FbmGenerator1D::~FbmGenerator1D() = default;
double FbmGenerator1D::hurst() const { return impl_->hurst; }
std::size_t FbmGenerator1D::size() const { return impl_->n; }

std::vector<double> FbmGenerator1D::generate(std::uint64_t seed,
                                             std::uint64_t stream_index) const {
  const std::size_t n = impl_->n;
  const std::size_t m = 2 * n;
  CounterRng rng(seed, make_stream(StreamPurpose::synthesis, stream_index));
  FftwBuffer in(m), out(m);
  for (std::size_t j = 0; j < m; ++j) {
    const double re = rng.normal();
    const double im = rng.normal();
    in.cx()[j] = {impl_->sqrt_lambda[j] * re, impl_->sqrt_lambda[j] * im};
  }
  impl_->plan.execute(in, out);
  const double norm = 1.0 / std::sqrt(static_cast<double>(m));
  std::vector<double> series(n);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    acc += out.cx()[k].real() * norm;  // increment k
    series[k] = acc;                   // X((k+1)/n)
  }
  return series;
}

std::vector<double> synth_fbm_1d(const SynthesisSpec& spec) {
  validate_synthesis_spec(spec);
  if (spec.dimension != 1) {
    throw Error(Error::Kind::invalid_input, "synth_fbm_1d requires dimension 1");
  }
  FbmGenerator1D gen(spec.hurst, spec.size, spec.sigma);
  return gen.generate(spec.seed);
}

// ---------------------------------------------------------------------------
// 2-D: Stein's compact-support covariance, exact on the simulated disk.

namespace {

struct SteinConstants {
  double alpha, beta, c2, c0;
  static constexpr double kR = 2.0;
};

SteinConstants stein_constants(double hurst) {
  SteinConstants k{};
  k.alpha = 2.0 * hurst;
  const double r = SteinConstants::kR;
  if (k.alpha <= 1.5) {
    k.beta = 0.0;
    k.c2 = k.alpha / 2.0;
    k.c0 = 1.0 - k.alpha / 2.0;
  } else {
    k.beta = k.alpha * (2.0 - k.alpha) / (3.0 * r * (r * r - 1.0));
    k.c2 = (k.alpha - k.beta * (r - 1.0) * (r - 1.0) * (r + 2.0)) / 2.0;
    k.c0 = k.beta * (r - 1.0) * (r - 1.0) * (r - 1.0) + 1.0 - k.c2;
  }
  return k;
}

double stein_cov(double r, const SteinConstants& k) {
  if (r <= 1.0) return k.c0 + k.c2 * r * r - std::pow(r, k.alpha);
  if (r <= SteinConstants::kR) {
    const double t = SteinConstants::kR - r;
    return k.beta * t * t * t / r;
  }
  return 0.0;
}

}  // namespace

struct FbfGenerator2D::Impl {
  double hurst;
  std::size_t side;     // output side 2^J
  double sigma;
  std::size_t m;        // torus side, 4 * side
  double delta;         // simulation grid spacing 2^-J / sqrt2
  double c2;
  std::vector<double> sqrt_lambda;  // m x m
  FftPlan plan;

  Impl(double hurst_, std::size_t side_, double sigma_)
      : hurst(hurst_), side(side_), sigma(sigma_), m(4 * side_), plan(2, 4 * side_) {
    const SteinConstants k = stein_constants(hurst);
    c2 = k.c2;
    delta = 1.0 / (static_cast<double>(side) * std::sqrt(2.0));
    const double period = static_cast<double>(m) * delta;  // 2*sqrt(2) > R + extraction span

    // Periodized covariance on the torus; all images vanish on extraction
    // displacements, so the extracted block keeps the exact covariance.
    std::vector<double> signed_coord(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double idx = (i <= m / 2) ? static_cast<double>(i)
                                      : static_cast<double>(i) - static_cast<double>(m);
      signed_coord[i] = idx * delta;
    }
    FftwBuffer in(m * m), out(m * m);
    for (std::size_t p = 0; p < m; ++p) {
      for (std::size_t q = 0; q < m; ++q) {
        double sum = 0.0;
        for (int j1 = -1; j1 <= 1; ++j1) {
          for (int j2 = -1; j2 <= 1; ++j2) {
            const double x = signed_coord[p] + j1 * period;
            const double y = signed_coord[q] + j2 * period;
            sum += stein_cov(std::hypot(x, y), k);
          }
        }
        in.cx()[p * m + q] = {sum, 0.0};
      }
    }
    plan.execute(in, out);
    std::vector<double> lambda(m * m);
    for (std::size_t i = 0; i < m * m; ++i) lambda[i] = out.cx()[i].real();
    sqrt_eigenvalues(lambda);
    sqrt_lambda = std::move(lambda);
  }
};

FbfGenerator2D::FbfGenerator2D(double hurst, std::size_t side, double sigma) {
  SynthesisSpec spec{hurst, 2, side, sigma, 0};
  validate_synthesis_spec(spec);
  impl_ = std::make_unique<Impl>(hurst, side, sigma);
}

FbfGenerator2D::~FbfGenerator2D() = default;
double FbfGenerator2D::hurst() const { return impl_->hurst; }
std::size_t FbfGenerator2D::side() const { return impl_->side; }

Grid2D FbfGenerator2D::generate(std::uint64_t seed, std::uint64_t stream_index) const {
  const std::size_t n = impl_->side;
  const std::size_t m = impl_->m;
  CounterRng rng(seed, make_stream(StreamPurpose::synthesis, stream_index));
  FftwBuffer in(m * m), out(m * m);
  for (std::size_t i = 0; i < m * m; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    in.cx()[i] = {impl_->sqrt_lambda[i] * re, impl_->sqrt_lambda[i] * im};
  }
  impl_->plan.execute(in, out);
  const double norm = 1.0 / static_cast<double>(m);

  // Stationary helper field Z on the (n+1) x (n+1) corner block.
  const double z00 = out.cx()[0].real() * norm;
  const double xi = rng.normal();
  const double eta = rng.normal();
  const double drift = std::sqrt(2.0 * impl_->c2);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  // B(t) = (Z(t) - Z(0) + sqrt(2 c2)(xi t1 + eta t2))/sqrt2 is exact fBf on
  // the unit disk of the simulation coordinates; the output rescales it onto
  // (0,1]^2 by self-similarity.
  const double out_scale = impl_->sigma * std::pow(2.0, impl_->hurst / 2.0);

  Grid2D field(n);
  for (std::size_t r = 0; r < n; ++r) {
    const double t1 = static_cast<double>(r + 1) * impl_->delta;
    for (std::size_t c = 0; c < n; ++c) {
      const double t2 = static_cast<double>(c + 1) * impl_->delta;
      const double z = out.cx()[(r + 1) * m + (c + 1)].real() * norm;
      const double b = (z - z00 + drift * (xi * t1 + eta * t2)) * inv_sqrt2;
      field.at(r, c) = out_scale * b;
    }
  }
  return field;
}

Grid2D synth_fbf_2d(const SynthesisSpec& spec) {
  validate_synthesis_spec(spec);
  if (spec.dimension != 2) {
    throw Error(Error::Kind::invalid_input, "synth_fbf_2d requires dimension 2");
  }
  try {
    FbfGenerator2D gen(spec.hurst, spec.size, spec.sigma);
    return gen.generate(spec.seed);
  } catch (const EmbeddingFailure&) {
    if (spec.size <= 128) return synth_fbf_2d_cholesky(spec);
    throw;
  }
}

struct FbfCholeskyGenerator2D::Impl {
  std::size_t n;
  std::vector<double> factor;  // lower-triangular, row-major (n^2 x n^2)

  Impl(double hurst, std::size_t n_, double sigma) : n(n_) {
    const std::size_t dim = n * n;
    const double s2 = sigma * sigma;

    // Exact covariance of the grid points (k1, k2)/n, k = 1..n.
    std::vector<double>& cov = factor;
    cov.resize(dim * dim);
    std::vector<double> norms(dim);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const double t1 = static_cast<double>(r + 1) / static_cast<double>(n);
        const double t2 = static_cast<double>(c + 1) / static_cast<double>(n);
        norms[r * n + c] = std::pow(t1 * t1 + t2 * t2, hurst);
      }
    }
    for (std::size_t a = 0; a < dim; ++a) {
      const double a1 = static_cast<double>(a / n + 1);
      const double a2 = static_cast<double>(a % n + 1);
      for (std::size_t b = 0; b <= a; ++b) {
        const double d1 = (a1 - static_cast<double>(b / n + 1)) / static_cast<double>(n);
        const double d2 = (a2 - static_cast<double>(b % n + 1)) / static_cast<double>(n);
        const double dist2 = d1 * d1 + d2 * d2;
        const double value = 0.5 * s2 * (norms[a] + norms[b] - std::pow(dist2, hurst));
        cov[a * dim + b] = value;
        cov[b * dim + a] = value;
      }
    }

    // In-place lower Cholesky with a nonnegative-diagonal guard.
    for (std::size_t i = 0; i < dim; ++i) {
      for (std::size_t j = 0; j <= i; ++j) {
        double sum = cov[i * dim + j];
        for (std::size_t k = 0; k < j; ++k) sum -= cov[i * dim + k] * cov[j * dim + k];
        if (i == j) {
          if (sum <= 0.0) {
            if (sum < -1e-9) {
              throw EmbeddingFailure("covariance matrix is not positive definite");
            }
            sum = 0.0;
          }
          cov[i * dim + i] = std::sqrt(sum);
        } else {
          const double diag = cov[j * dim + j];
          cov[i * dim + j] = (diag > 0.0) ? sum / diag : 0.0;
        }
      }
      std::fill(cov.begin() + static_cast<std::ptrdiff_t>(i * dim + i + 1),
                cov.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim), 0.0);
    }
  }
};

FbfCholeskyGenerator2D::FbfCholeskyGenerator2D(double hurst, std::size_t side,
                                               double sigma) {
  SynthesisSpec spec{hurst, 2, side, sigma, 0};
  validate_synthesis_spec(spec);
  if (side > 128) {
    throw Error(Error::Kind::invalid_input,
                "cholesky synthesis is restricted to side <= 128");
  }
  impl_ = std::make_unique<Impl>(hurst, side, sigma);
}

FbfCholeskyGenerator2D::~FbfCholeskyGenerator2D() = default;

Grid2D FbfCholeskyGenerator2D::generate(std::uint64_t seed,
                                        std::uint64_t stream_index) const {
  const std::size_t n = impl_->n;
  const std::size_t dim = n * n;
  CounterRng rng(seed, make_stream(StreamPurpose::synthesis, stream_index));
  std::vector<double> z(dim);
  for (double& v : z) v = rng.normal();
  Grid2D field(n);
  const std::vector<double>& factor = impl_->factor;
  for (std::size_t i = 0; i < dim; ++i) {
    double sum = 0.0;
    for (std::size_t k = 0; k <= i; ++k) sum += factor[i * dim + k] * z[k];
    field.samples[i] = sum;
  }
  return field;
}

Grid2D synth_fbf_2d_cholesky(const SynthesisSpec& spec) {
  validate_synthesis_spec(spec);
  if (spec.dimension != 2) {
    throw Error(Error::Kind::invalid_input, "synth_fbf_2d_cholesky requires dimension 2");
  }
  FbfCholeskyGenerator2D gen(spec.hurst, spec.size, spec.sigma);
  return gen.generate(spec.seed);
}

// ---------------------------------------------------------------------------
// Level contamination.

namespace {

double subband_noise_sd(const std::vector<double>& coeffs, const ContaminationSpec& spec) {
  if (spec.scale_rule == ScaleRule::explicit_variance) {
    if (spec.variance < 0.0) {
      throw Error(Error::Kind::invalid_input, "contamination variance must be >= 0");
    }
    return std::sqrt(spec.variance);
  }
  double energy = 0.0;
  for (double c : coeffs) energy += c * c;
  return std::sqrt(energy / static_cast<double>(coeffs.size()));
}

void add_noise(std::vector<double>& coeffs, double sd, CounterRng& rng) {
  for (double& c : coeffs) c += sd * rng.normal();
}

}  // namespace

Decomposition1D contaminate(const Decomposition1D& decomp, const ContaminationSpec& spec) {
  if (!decomp.has_level(spec.target_level)) {
    throw InvalidLevelRange("contamination level " + std::to_string(spec.target_level) +
                            " outside decomposition range");
  }
  Decomposition1D out = decomp;
  CounterRng rng(spec.seed, make_stream(StreamPurpose::contamination, spec.stream_index));
  auto& band = out.level(spec.target_level);
  add_noise(band, subband_noise_sd(band, spec), rng);
  return out;
}

Decomposition2D contaminate(const Decomposition2D& decomp, const ContaminationSpec& spec) {
  if (!decomp.has_level(spec.target_level)) {
    throw InvalidLevelRange("contamination level " + std::to_string(spec.target_level) +
                            " outside decomposition range");
  }
  if (spec.directions.empty()) {
    throw Error(Error::Kind::invalid_input, "contamination needs at least one direction");
  }
  Decomposition2D out = decomp;
  CounterRng rng(spec.seed, make_stream(StreamPurpose::contamination, spec.stream_index));
  for (Direction dir : spec.directions) {
    auto& band = out.level(spec.target_level).band(dir);
    add_noise(band, subband_noise_sd(band, spec), rng);
  }
  return out;
}

}  // namespace wavescale
