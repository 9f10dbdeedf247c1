#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "wavescale/errors.hpp"
#include "wavescale/rng.hpp"
#include "wavescale/stats.hpp"
#include "wavescale/synthesis.hpp"

using namespace wavescale;

namespace {

struct MomentAcc {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double var() const { return sum_sq / static_cast<double>(n) - mean() * mean(); }
};

// Standard error of a sample second moment of products, used for the
// 3-sigma Monte-Carlo covariance checks.
struct ProductAcc {
  double sum = 0.0, sum_sq = 0.0;
  std::size_t n = 0;
  void add(double product) {
    sum += product;
    sum_sq += product * product;
    ++n;
  }
  double mean() const { return sum / static_cast<double>(n); }
  double se() const {
    const double m = mean();
    const double var = sum_sq / static_cast<double>(n) - m * m;
    return std::sqrt(var / static_cast<double>(n));
  }
};

}  // namespace

TEST_CASE("philox known-answer vectors") {
  // Reference vectors for Philox4x32-10 (counter, key) -> block.
  auto block = CounterRng::block;
  {
    const auto out = block(0, 0, 0);
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }
  {
    const auto out = block(0xFFFFFFFFFFFFFFFFull, 0xFFFFFFFFFFFFFFFFull,
                           0xFFFFFFFFFFFFFFFFull);
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);
  }
  {
    const auto out = block(0x299f31d0a4093822ull, 0x0370734413198a2eull,
                           0x85a308d3243f6a88ull);
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
  }
}

TEST_CASE("rng moments and stream separation") {
  CounterRng rng(42, 0);
  MomentAcc acc;
  for (int i = 0; i < 20000; ++i) acc.add(rng.normal());
  CHECK(std::abs(acc.mean()) < 0.03);
  CHECK(std::abs(acc.var() - 1.0) < 0.05);

  CounterRng a(42, make_stream(StreamPurpose::synthesis, 1));
  CounterRng b(42, make_stream(StreamPurpose::contamination, 1));
  bool all_equal = true;
  for (int i = 0; i < 16; ++i) {
    if (a.next_u32() != b.next_u32()) all_equal = false;
  }
  CHECK_FALSE(all_equal);
}

TEST_CASE("fbm_cov closed-form examples") {
  // B_H(0) = 0.
  CHECK(fbm_cov1(0.0, 0.0, 0.3) == 0.0);
  // Variance at unit radius is sigma^2 for any H.
  const std::array<double, 2> unit{0.6, 0.8};
  for (double h : {0.2, 0.5, 0.9}) {
    CHECK(fbm_cov(unit, unit, h) == doctest::Approx(1.0).epsilon(1e-14));
  }
  // H = 1/2 in 1-D is Brownian motion: cov(t, s) = min(t, s).
  CHECK(fbm_cov1(0.25, 0.75, 0.5) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(fbm_cov1(0.1, 0.2, 1.5), InvalidHurst);
  CHECK_THROWS_AS(fbm_cov1(0.1, 0.2, 0.0), InvalidHurst);
}

TEST_CASE("1-D synthesis is deterministic in the seed") {
  const SynthesisSpec spec{0.7, 1, 256, 1.0, 987};
  const auto a = synth_fbm_1d(spec);
  const auto b = synth_fbm_1d(spec);
  REQUIRE(a.size() == 256);
  CHECK(a == b);  // bitwise

  SynthesisSpec other = spec;
  other.seed = 988;
  CHECK(synth_fbm_1d(other) != a);
}

TEST_CASE("H=1/2 increments look like white noise") {
  const std::size_t n = 16384;
  FbmGenerator1D gen(0.5, n);
  const auto series = gen.generate(2024);
  std::vector<double> increments(n);
  increments[0] = series[0];
  for (std::size_t i = 1; i < n; ++i) increments[i] = series[i] - series[i - 1];
  const double rho = lag1_autocorrelation(increments);
  CHECK(std::abs(rho) < 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("1-D variance law Var X(t) = sigma^2 t^{2H}") {
  const std::size_t n = 64;
  const int reps = 10000;
  for (double hurst : {0.5, 0.7}) {
    CAPTURE(hurst);
    FbmGenerator1D gen(hurst, n);
    // t = 1/4, 1/2, 1 are exact sample points (indices n/4-1, n/2-1, n-1).
    ProductAcc quarter, half, one;
    for (int r = 0; r < reps; ++r) {
      const auto x = gen.generate(5000, static_cast<std::uint64_t>(r));
      quarter.add(x[n / 4 - 1] * x[n / 4 - 1]);
      half.add(x[n / 2 - 1] * x[n / 2 - 1]);
      one.add(x[n - 1] * x[n - 1]);
    }
    const double h2 = 2.0 * hurst;
    CHECK(std::abs(quarter.mean() - std::pow(0.25, h2)) < 3.0 * quarter.se());
    CHECK(std::abs(half.mean() - std::pow(0.5, h2)) < 3.0 * half.se());
    CHECK(std::abs(one.mean() - 1.0) < 3.0 * one.se());
    // Self-similarity at the variance level: Var X(2t) / Var X(t) = 2^{2H}.
    const double ratio = half.mean() / quarter.mean();
    const double ratio_se =
        ratio * (half.se() / half.mean() + quarter.se() / quarter.mean());
    CHECK(std::abs(ratio - std::pow(2.0, h2)) < 3.0 * ratio_se);
  }
}

TEST_CASE("sigma scales the 1-D law") {
  const std::size_t n = 32;
  FbmGenerator1D gen(0.6, n, 2.0);
  ProductAcc one;
  for (int r = 0; r < 4000; ++r) {
    const auto x = gen.generate(77, static_cast<std::uint64_t>(r));
    one.add(x[n - 1] * x[n - 1]);
  }
  CHECK(std::abs(one.mean() - 4.0) < 3.0 * one.se());
}

TEST_CASE("2-D circulant synthesis matches the exact covariance") {
  const std::size_t side = 32;
  const int reps = 3000;
  for (double hurst : {0.3, 0.5, 0.8}) {
    CAPTURE(hurst);
    FbfGenerator2D gen(hurst, side);
    // Grid point (k1, k2) lives at coordinates (k1/side, k2/side), k >= 1.
    auto value_at = [&](const Grid2D& g, std::size_t k1, std::size_t k2) {
      return g.at(k1 - 1, k2 - 1);
    };
    const std::array<double, 2> t11{1.0, 1.0};
    const std::array<double, 2> t55{0.5, 0.5};
    const std::array<double, 2> tx{1.0, 0.5};
    const std::array<double, 2> ty{0.5, 1.0};
    const std::array<double, 2> tq{0.25, 0.25};
    ProductAcc var11, var55, cov_11_55, cov_xy, cov_q55;
    MomentAcc iso_x, iso_y;
    for (int r = 0; r < reps; ++r) {
      const Grid2D f = gen.generate(31337, static_cast<std::uint64_t>(r));
      const double v11 = value_at(f, side, side);
      const double v55 = value_at(f, side / 2, side / 2);
      const double vx = value_at(f, side, side / 2);
      const double vy = value_at(f, side / 2, side);
      const double vq = value_at(f, side / 4, side / 4);
      var11.add(v11 * v11);
      var55.add(v55 * v55);
      cov_11_55.add(v11 * v55);
      cov_xy.add(vx * vy);
      cov_q55.add(vq * v55);
      iso_x.add(vx);
      iso_y.add(vy);
    }
    CHECK(std::abs(var11.mean() - fbm_cov(t11, t11, hurst)) < 3.0 * var11.se());
    CHECK(std::abs(var55.mean() - fbm_cov(t55, t55, hurst)) < 3.0 * var55.se());
    CHECK(std::abs(cov_11_55.mean() - fbm_cov(t11, t55, hurst)) < 3.0 * cov_11_55.se());
    CHECK(std::abs(cov_xy.mean() - fbm_cov(tx, ty, hurst)) < 3.0 * cov_xy.se());
    CHECK(std::abs(cov_q55.mean() - fbm_cov(tq, t55, hurst)) < 3.0 * cov_q55.se());
    // Isotropy: (1, 1/2) and (1/2, 1) have the same norms.
    const double se_iso = std::sqrt(iso_x.var() / reps + iso_y.var() / reps);
    CHECK(std::abs(iso_x.var() - iso_y.var()) <
          3.0 * std::sqrt(2.0) * (iso_x.var() + iso_y.var()) /
              std::sqrt(static_cast<double>(reps)));
    CHECK(std::abs(iso_x.mean() - iso_y.mean()) < 5.0 * se_iso);
  }
}

TEST_CASE("2-D synthesis is deterministic and seed-sensitive") {
  const SynthesisSpec spec{0.4, 2, 16, 1.0, 5};
  const Grid2D a = synth_fbf_2d(spec);
  const Grid2D b = synth_fbf_2d(spec);
  CHECK(a.samples == b.samples);
  SynthesisSpec other = spec;
  other.seed = 6;
  CHECK(synth_fbf_2d(other).samples != a.samples);
}

TEST_CASE("cholesky fallback obeys the same covariance law") {
  const std::size_t side = 16;
  const int reps = 3000;
  const double hurst = 0.6;
  ProductAcc var11, cov_xy;
  const std::array<double, 2> t11{1.0, 1.0};
  const std::array<double, 2> tx{1.0, 0.5};
  const std::array<double, 2> ty{0.5, 1.0};
  FbfCholeskyGenerator2D gen(hurst, side);
  for (int r = 0; r < reps; ++r) {
    const Grid2D f = gen.generate(900, static_cast<std::uint64_t>(r));
    var11.add(f.at(side - 1, side - 1) * f.at(side - 1, side - 1));
    cov_xy.add(f.at(side - 1, side / 2 - 1) * f.at(side / 2 - 1, side - 1));
  }
  CHECK(std::abs(var11.mean() - fbm_cov(t11, t11, hurst)) < 3.0 * var11.se());
  CHECK(std::abs(cov_xy.mean() - fbm_cov(tx, ty, hurst)) < 3.0 * cov_xy.se());

  SynthesisSpec big{0.5, 2, 256, 1.0, 1};
  CHECK_THROWS_AS(synth_fbf_2d_cholesky(big), Error);
}

TEST_CASE("whitened field samples pass a normality batch test") {
  // Whitening by the exact covariance factor makes the samples iid N(0,1)
  // under the claimed law, so the 1% chi^2_2 level of Jarque-Bera applies.
  const std::size_t side = 16;
  const double hurst = 0.5;
  const std::size_t dim = side * side;
  std::vector<double> cov(dim * dim);
  auto coord = [&](std::size_t i) {
    return std::array<double, 2>{static_cast<double>(i / side + 1) / side,
                                 static_cast<double>(i % side + 1) / side};
  };
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b <= a; ++b) {
      const auto ca = coord(a), cb = coord(b);
      cov[a * dim + b] = cov[b * dim + a] = fbm_cov(ca, cb, hurst);
    }
  }
  // Test-side Cholesky factor.
  std::vector<double> chol(cov);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = chol[i * dim + j];
      for (std::size_t k = 0; k < j; ++k) sum -= chol[i * dim + k] * chol[j * dim + k];
      chol[i * dim + j] = (i == j) ? std::sqrt(sum) : sum / chol[j * dim + j];
    }
  }

  FbfGenerator2D gen(hurst, side);
  int passes = 0;
  const int seeds = 100;
  std::vector<double> z(dim);
  for (int s = 0; s < seeds; ++s) {
    const Grid2D f = gen.generate(123, static_cast<std::uint64_t>(s));
    // Forward substitution L z = x.
    for (std::size_t i = 0; i < dim; ++i) {
      double sum = f.samples[i];
      for (std::size_t k = 0; k < i; ++k) sum -= chol[i * dim + k] * z[k];
      z[i] = sum / chol[i * dim + i];
    }
    if (jarque_bera(z) < 9.21034) ++passes;  // chi^2_2 at the 1% level
  }
  CHECK(passes >= 95);
}

TEST_CASE("invalid synthesis specs are rejected") {
  CHECK_THROWS_AS(synth_fbm_1d({1.2, 1, 64, 1.0, 0}), InvalidHurst);
  CHECK_THROWS_AS(synth_fbm_1d({0.5, 1, 63, 1.0, 0}), InvalidShape);
  CHECK_THROWS_AS(synth_fbm_1d({0.5, 2, 64, 1.0, 0}), Error);
  CHECK_THROWS_AS(synth_fbf_2d({0.5, 1, 64, 1.0, 0}), Error);
  SynthesisSpec bad_sigma{0.5, 1, 64, -1.0, 0};
  CHECK_THROWS_AS(synth_fbm_1d(bad_sigma), Error);
}

TEST_CASE("contamination with explicit zero variance is the identity") {
  FbmGenerator1D gen(0.5, 64);
  const auto series = gen.generate(4);
  const auto decomp = dwt1d(series, make_filter(FilterName::haar), 2);
  ContaminationSpec spec;
  spec.target_level = 3;
  spec.scale_rule = ScaleRule::explicit_variance;
  spec.variance = 0.0;
  const auto out = contaminate(decomp, spec);
  CHECK(out.level(3) == decomp.level(3));
  CHECK(out.approx == decomp.approx);
}

TEST_CASE("contamination touches only the targeted subbands") {
  FbfGenerator2D gen(0.5, 32);
  const Grid2D field = gen.generate(9);
  const auto decomp = dwt2d(field, make_filter(FilterName::daub6), 2);
  ContaminationSpec spec;
  spec.target_level = 3;
  spec.directions = {Direction::diagonal};
  spec.seed = 17;
  const auto out = contaminate(decomp, spec);
  // Untouched subbands are bit-identical.
  CHECK(out.approx == decomp.approx);
  for (int j = decomp.coarsest_level; j <= decomp.finest_level; ++j) {
    CHECK(out.level(j).h == decomp.level(j).h);
    CHECK(out.level(j).v == decomp.level(j).v);
    if (j != 3) CHECK(out.level(j).d == decomp.level(j).d);
  }
  CHECK(out.level(3).d != decomp.level(3).d);

  // Determinism.
  const auto out2 = contaminate(decomp, spec);
  CHECK(out2.level(3).d == out.level(3).d);

  ContaminationSpec bad = spec;
  bad.target_level = 9;
  CHECK_THROWS_AS(contaminate(decomp, bad), InvalidLevelRange);
}

TEST_CASE("match-average-energy doubles the expected subband energy") {
  FbmGenerator1D gen(0.5, 128);
  const auto series = gen.generate(55);
  const auto decomp = dwt1d(series, make_filter(FilterName::haar), 3);
  const auto& band = decomp.level(4);
  double base_energy = 0.0;
  for (double c : band) base_energy += c * c;
  base_energy /= static_cast<double>(band.size());

  double total = 0.0;
  const int draws = 1000;
  for (int i = 0; i < draws; ++i) {
    ContaminationSpec spec;
    spec.target_level = 4;
    spec.seed = 1000;
    spec.stream_index = static_cast<std::uint64_t>(i);
    const auto out = contaminate(decomp, spec);
    double energy = 0.0;
    for (double c : out.level(4)) energy += c * c;
    total += energy / static_cast<double>(band.size());
  }
  const double mean_energy = total / draws;
  // E[(d + eps)^2] = E[d^2] + sigma^2 with sigma^2 = E[d^2].
  CHECK(std::abs(mean_energy - 2.0 * base_energy) / (2.0 * base_energy) < 0.05);
}
