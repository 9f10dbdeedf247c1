#include "wavescale/transform.hpp"

#include <cmath>
#include <string>

#include "wavescale/errors.hpp"

namespace wavescale {

std::string direction_token(Direction dir) {
  switch (dir) {
    case Direction::horizontal: return "h";
    case Direction::vertical: return "v";
    case Direction::diagonal: return "d";
    case Direction::signal: return "1d";
  }
  return "?";
}

Direction parse_direction(std::string_view token) {
  if (token == "h") return Direction::horizontal;
  if (token == "v") return Direction::vertical;
  if (token == "d") return Direction::diagonal;
  if (token == "1d") return Direction::signal;
  throw Error(Error::Kind::invalid_input, "unknown direction: " + std::string(token));
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(std::size_t n) {
  int j = 0;
  while ((std::size_t{1} << j) < n) ++j;
  return j;
}

Grid2D::Grid2D(std::size_t side_, double fill)
    : side(side_), samples(side_ * side_, fill) {}

Grid2D Grid2D::transposed() const {
  Grid2D out(side);
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) out.at(c, r) = at(r, c);
  }
  return out;
}

void validate_grid(const Grid2D& grid) {
  if (grid.side < 2 || !is_power_of_two(grid.side)) {
    throw InvalidShape("grid side must be a power of two >= 2, got " +
                       std::to_string(grid.side));
  }
  if (grid.samples.size() != grid.side * grid.side) {
    throw InvalidShape("grid sample count does not match side");
  }
  for (double v : grid.samples) {
    if (!std::isfinite(v)) throw InvalidShape("grid contains non-finite samples");
  }
}

const std::vector<double>& Subband2D::band(Direction dir) const {
  switch (dir) {
    case Direction::horizontal: return h;
    case Direction::vertical: return v;
    case Direction::diagonal: return d;
    default: break;
  }
  throw Error(Error::Kind::invalid_input, "2-D subband direction must be h, v or d");
}

std::vector<double>& Subband2D::band(Direction dir) {
  return const_cast<std::vector<double>&>(
      static_cast<const Subband2D&>(*this).band(dir));
}

namespace {

// Filter taps folded modulo n; handles filters longer than the signal.
std::vector<double> fold_filter(const std::vector<double>& f, std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < f.size(); ++k) out[k % n] += f[k];
  return out;
}

// One periodic analysis step: out_a[k] = sum_n h[n] x[(2k+n) mod N].
void analysis_step(const double* x, std::size_t n, const std::vector<double>& h,
                   const std::vector<double>& g, double* a, double* d) {
  const std::size_t half = n / 2;
  if (h.size() <= n) {
    const std::size_t taps = h.size();
    for (std::size_t k = 0; k < half; ++k) {
      double sa = 0.0, sd = 0.0;
      std::size_t idx = 2 * k;
      for (std::size_t t = 0; t < taps; ++t) {
        const double xv = x[idx];
        sa += h[t] * xv;
        sd += g[t] * xv;
        if (++idx == n) idx = 0;
      }
      a[k] = sa;
      d[k] = sd;
    }
  } else {
    const std::vector<double> hf = fold_filter(h, n);
    const std::vector<double> gf = fold_filter(g, n);
    for (std::size_t k = 0; k < half; ++k) {
      double sa = 0.0, sd = 0.0;
      std::size_t idx = 2 * k;
      for (std::size_t t = 0; t < n; ++t) {
        const double xv = x[idx];
        sa += hf[t] * xv;
        sd += gf[t] * xv;
        if (++idx == n) idx = 0;
      }
      a[k] = sa;
      d[k] = sd;
    }
  }
}

// Adjoint of analysis_step: x[(2k+n) mod N] += h[n] a[k] + g[n] d[k].
void synthesis_step(const double* a, const double* d, std::size_t n,
                    const std::vector<double>& h, const std::vector<double>& g,
                    double* x) {
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) x[i] = 0.0;
  const bool folded = h.size() > n;
  std::vector<double> hf_storage, gf_storage;
  if (folded) {
    hf_storage = fold_filter(h, n);
    gf_storage = fold_filter(g, n);
  }
  const std::vector<double>& hf = folded ? hf_storage : h;
  const std::vector<double>& gf = folded ? gf_storage : g;
  const std::size_t taps = folded ? n : h.size();
  for (std::size_t k = 0; k < half; ++k) {
    std::size_t idx = 2 * k;
    const double av = a[k], dv = d[k];
    for (std::size_t t = 0; t < taps; ++t) {
      x[idx] += hf[t] * av + gf[t] * dv;
      if (++idx == n) idx = 0;
    }
  }
}

void check_levels(std::size_t size, int j0, int& j_top) {
  if (!is_power_of_two(size) || size < 2) {
    throw InvalidShape("input length/side must be a power of two >= 2, got " +
                       std::to_string(size));
  }
  j_top = log2_exact(size);
  if (j0 < 0 || j0 >= j_top) {
    throw InvalidLevelRange("coarsest level J0 must satisfy 0 <= J0 < " +
                            std::to_string(j_top) + ", got " + std::to_string(j0));
  }
}

}  // namespace

Decomposition1D dwt1d(const std::vector<double>& signal, const WaveletFilter& filter,
                      int j0) {
  int j_top = 0;
  check_levels(signal.size(), j0, j_top);

  Decomposition1D decomp;
  decomp.coarsest_level = j0;
  decomp.finest_level = j_top - 1;
  decomp.details.resize(static_cast<std::size_t>(j_top - j0));

  std::vector<double> approx = signal;
  std::vector<double> next_a, detail;
  for (int j = j_top - 1; j >= j0; --j) {
    const std::size_t n = approx.size();
    next_a.assign(n / 2, 0.0);
    detail.assign(n / 2, 0.0);
    analysis_step(approx.data(), n, filter.lowpass, filter.highpass, next_a.data(),
                  detail.data());
    decomp.details[static_cast<std::size_t>(j - j0)] = detail;
    approx.swap(next_a);
  }
  decomp.approx = std::move(approx);
  return decomp;
}

std::vector<double> idwt1d(const Decomposition1D& decomp, const WaveletFilter& filter) {
  if (decomp.finest_level < decomp.coarsest_level) {
    throw InvalidShape("empty decomposition");
  }
  std::vector<double> approx = decomp.approx;
  if (approx.size() != (std::size_t{1} << decomp.coarsest_level)) {
    throw InvalidShape("approximation length does not match coarsest level");
  }
  std::vector<double> next(approx.size() * 2);
  for (int j = decomp.coarsest_level; j <= decomp.finest_level; ++j) {
    const auto& detail = decomp.level(j);
    if (detail.size() != approx.size()) {
      throw InvalidShape("detail length mismatch at level " + std::to_string(j));
    }
    next.assign(approx.size() * 2, 0.0);
    synthesis_step(approx.data(), detail.data(), next.size(), filter.lowpass,
                   filter.highpass, next.data());
    approx.swap(next);
  }
  return approx;
}

namespace {

// One 2-D analysis stage on an n x n block: filter along axis 1, then axis 0.
void stage2d(const std::vector<double>& x, std::size_t n, const WaveletFilter& filter,
             std::vector<double>& ll, Subband2D& out) {
  const std::size_t half = n / 2;
  // Along axis 1 (within rows): L and H, each n x half.
  std::vector<double> low(n * half), high(n * half);
  for (std::size_t r = 0; r < n; ++r) {
    analysis_step(&x[r * n], n, filter.lowpass, filter.highpass, &low[r * half],
                  &high[r * half]);
  }
  // Along axis 0 (within columns).
  ll.assign(half * half, 0.0);
  out.side = half;
  out.h.assign(half * half, 0.0);
  out.v.assign(half * half, 0.0);
  out.d.assign(half * half, 0.0);
  std::vector<double> col(n), ca(half), cd(half);
  for (std::size_t c = 0; c < half; ++c) {
    for (std::size_t r = 0; r < n; ++r) col[r] = low[r * half + c];
    analysis_step(col.data(), n, filter.lowpass, filter.highpass, ca.data(), cd.data());
    for (std::size_t r = 0; r < half; ++r) {
      ll[r * half + c] = ca[r];       // phi(t1) phi(t2)
      out.v[r * half + c] = cd[r];    // psi(t1) phi(t2)
    }
    for (std::size_t r = 0; r < n; ++r) col[r] = high[r * half + c];
    analysis_step(col.data(), n, filter.lowpass, filter.highpass, ca.data(), cd.data());
    for (std::size_t r = 0; r < half; ++r) {
      out.h[r * half + c] = ca[r];    // phi(t1) psi(t2)
      out.d[r * half + c] = cd[r];    // psi(t1) psi(t2)
    }
  }
}

void inverse_stage2d(const std::vector<double>& ll, const Subband2D& sub,
                     const WaveletFilter& filter, std::vector<double>& out) {
  const std::size_t half = sub.side;
  const std::size_t n = half * 2;
  // Invert along axis 0 first: rebuild the row-filtered L and H planes.
  std::vector<double> low(n * half), high(n * half);
  std::vector<double> ca(half), cd(half), col(n);
  for (std::size_t c = 0; c < half; ++c) {
    for (std::size_t r = 0; r < half; ++r) {
      ca[r] = ll[r * half + c];
      cd[r] = sub.v[r * half + c];
    }
    synthesis_step(ca.data(), cd.data(), n, filter.lowpass, filter.highpass, col.data());
    for (std::size_t r = 0; r < n; ++r) low[r * half + c] = col[r];
    for (std::size_t r = 0; r < half; ++r) {
      ca[r] = sub.h[r * half + c];
      cd[r] = sub.d[r * half + c];
    }
    synthesis_step(ca.data(), cd.data(), n, filter.lowpass, filter.highpass, col.data());
    for (std::size_t r = 0; r < n; ++r) high[r * half + c] = col[r];
  }
  // Then along axis 1 within each row.
  out.assign(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    synthesis_step(&low[r * half], &high[r * half], n, filter.lowpass, filter.highpass,
                   &out[r * n]);
  }
}

}  // namespace

Decomposition2D dwt2d(const Grid2D& grid, const WaveletFilter& filter, int j0) {
  validate_grid(grid);
  int j_top = 0;
  check_levels(grid.side, j0, j_top);

  Decomposition2D decomp;
  decomp.coarsest_level = j0;
  decomp.finest_level = j_top - 1;
  decomp.levels.resize(static_cast<std::size_t>(j_top - j0));

  std::vector<double> approx = grid.samples;
  std::size_t n = grid.side;
  std::vector<double> ll;
  for (int j = j_top - 1; j >= j0; --j) {
    stage2d(approx, n, filter, ll, decomp.level(j));
    approx.swap(ll);
    n /= 2;
  }
  decomp.approx = std::move(approx);
  decomp.approx_side = n;
  return decomp;
}

Grid2D idwt2d(const Decomposition2D& decomp, const WaveletFilter& filter) {
  if (decomp.finest_level < decomp.coarsest_level) {
    throw InvalidShape("empty decomposition");
  }
  const std::size_t j0_side = std::size_t{1} << decomp.coarsest_level;
  if (decomp.approx_side != j0_side || decomp.approx.size() != j0_side * j0_side) {
    throw InvalidShape("approximation shape does not match coarsest level");
  }
  std::vector<double> approx = decomp.approx;
  std::vector<double> next;
  std::size_t n = j0_side;
  for (int j = decomp.coarsest_level; j <= decomp.finest_level; ++j) {
    const Subband2D& sub = decomp.level(j);
    if (sub.side != n || sub.h.size() != n * n || sub.v.size() != n * n ||
        sub.d.size() != n * n) {
      throw InvalidShape("subband shape mismatch at level " + std::to_string(j));
    }
    inverse_stage2d(approx, sub, filter, next);
    approx.swap(next);
    n *= 2;
  }
  Grid2D out(n);
  out.samples = std::move(approx);
  return out;
}

}  // namespace wavescale
