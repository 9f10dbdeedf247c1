#include "wavescale/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "wavescale/errors.hpp"
#include "wavescale/stats.hpp"

namespace wavescale {

namespace {

const double kLn2 = std::numbers::ln2;

void check_range(int coarsest, int finest, LevelRange range) {
  if (range.first > range.last) {
    throw InvalidLevelRange("empty level range [" + std::to_string(range.first) + "," +
                            std::to_string(range.last) + "]");
  }
  if (range.first < coarsest || range.last > finest) {
    throw InvalidLevelRange(
        "level range [" + std::to_string(range.first) + "," +
        std::to_string(range.last) + "] not contained in decomposition [" +
        std::to_string(coarsest) + "," + std::to_string(finest) + "]");
  }
}

SpectrumPoint make_point(int level, const std::vector<double>& coeffs) {
  double energy = 0.0;
  for (double c : coeffs) energy += c * c;
  const double mu = energy / static_cast<double>(coeffs.size());
  if (mu <= 0.0) {
    throw DegenerateLevel("zero mean energy at level " + std::to_string(level));
  }
  return {level, coeffs.size(), mu, std::log2(mu)};
}

}  // namespace

std::string bias_mode_token(BiasMode mode) {
  switch (mode) {
    case BiasMode::none: return "none";
    case BiasMode::second_order: return "av";
    case BiasMode::exact_digamma: return "digamma";
  }
  return "?";
}

BiasMode parse_bias_mode(std::string_view token) {
  if (token == "none") return BiasMode::none;
  if (token == "av") return BiasMode::second_order;
  if (token == "digamma") return BiasMode::exact_digamma;
  throw Error(Error::Kind::invalid_input, "unknown bias mode: " + std::string(token));
}

LevelRange default_level_range(std::size_t size) {
  if (!is_power_of_two(size) || size < 16) {
    throw InvalidLevelRange("no default level range for size " + std::to_string(size));
  }
  const int j_top = log2_exact(size);
  const int last = j_top - 2;
  const int first = std::max(1, j_top - 6);
  if (first > last) {
    throw InvalidLevelRange("input too small for a default level range");
  }
  return {first, last};
}

WaveletSpectrum level_energies(const Decomposition1D& decomp, LevelRange range) {
  check_range(decomp.coarsest_level, decomp.finest_level, range);
  WaveletSpectrum spectrum;
  spectrum.direction = Direction::signal;
  spectrum.dimension = 1;
  for (int j = range.first; j <= range.last; ++j) {
    spectrum.points.push_back(make_point(j, decomp.level(j)));
  }
  return spectrum;
}

WaveletSpectrum level_energies(const Decomposition2D& decomp, Direction direction,
                               LevelRange range) {
  if (direction == Direction::signal) {
    throw Error(Error::Kind::invalid_input, "2-D spectrum needs direction h, v or d");
  }
  check_range(decomp.coarsest_level, decomp.finest_level, range);
  WaveletSpectrum spectrum;
  spectrum.direction = direction;
  spectrum.dimension = 2;
  for (int j = range.first; j <= range.last; ++j) {
    spectrum.points.push_back(make_point(j, decomp.level(j).band(direction)));
  }
  return spectrum;
}

double av_variance(std::size_t n) {
  return 2.0 / (static_cast<double>(n) * kLn2 * kLn2);
}

double av_weight(std::size_t n) {
  return static_cast<double>(n) * kLn2 * kLn2 / 2.0;
}

double exact_log2_bias(std::size_t n) {
  const double half_n = static_cast<double>(n) / 2.0;
  return (digamma(half_n) - std::log(half_n)) / kLn2;
}

WaveletSpectrum apply_bias_correction(const WaveletSpectrum& spectrum, BiasMode mode) {
  if (spectrum.bias_mode != BiasMode::none) {
    throw AlreadyCorrected("spectrum already bias-corrected");
  }
  WaveletSpectrum out = spectrum;
  out.bias_mode = mode;
  switch (mode) {
    case BiasMode::none:
      break;
    case BiasMode::second_order:
      for (auto& p : out.points) {
        p.log_energy += 1.0 / (static_cast<double>(p.count) * kLn2);
      }
      break;
    case BiasMode::exact_digamma:
      for (auto& p : out.points) {
        p.log_energy -= exact_log2_bias(p.count);
      }
      break;
  }
  return out;
}

}  // namespace wavescale
