#include "wavescale/simulation.hpp"

#include <cmath>
#include <iostream>
#include <memory>
#include <string>

#include "wavescale/errors.hpp"
#include "wavescale/parallel.hpp"

namespace wavescale {

void validate_experiment_config(const ExperimentConfig& config) {
  if (config.dimension != 1 && config.dimension != 2) {
    throw Error(Error::Kind::invalid_input, "dimension must be 1 or 2");
  }
  if (config.replicates < 1) {
    throw Error(Error::Kind::invalid_input, "replicates must be >= 1");
  }
  if (config.hurst_targets.empty() || config.filters.empty() || config.methods.empty()) {
    throw Error(Error::Kind::invalid_input,
                "need at least one Hurst target, filter and method");
  }
  for (double h : config.hurst_targets) {
    if (!(h > 0.0 && h < 1.0)) {
      throw InvalidHurst("Hurst target outside (0,1): " + std::to_string(h));
    }
  }
  if (!is_power_of_two(config.size) || config.size < 16) {
    throw InvalidShape("size must be a power of two >= 16");
  }
}

const ReportCell& ExperimentReport::cell(double hurst, FilterName filter,
                                         EstimatorMethod method,
                                         Direction direction) const {
  for (const auto& c : cells) {
    if (c.hurst_target == hurst && c.filter == filter && c.method == method &&
        c.direction == direction) {
      return c;
    }
  }
  throw Error(Error::Kind::invalid_input, "no such report cell");
}

namespace {

std::vector<Direction> directions_for(int dimension) {
  if (dimension == 1) return {Direction::signal};
  return {Direction::diagonal, Direction::horizontal, Direction::vertical};
}

struct CellAccumulator {
  std::vector<double> estimates;  // slot per replicate, deterministic reduction
};

}  // namespace

ExperimentReport run_simulation(const ExperimentConfig& config) {
  validate_experiment_config(config);

  const LevelRange levels = (config.levels.first > config.levels.last)
                                ? default_level_range(config.size)
                                : config.levels;
  const int contamination_level =
      (config.contamination && config.contamination->level >= 0)
          ? config.contamination->level
          : levels.first;

  const std::vector<Direction> directions = directions_for(config.dimension);
  const std::size_t reps = static_cast<std::size_t>(config.replicates);

  std::vector<WaveletFilter> filters;
  for (FilterName name : config.filters) filters.push_back(make_filter(name));

  ExperimentReport report;
  report.config = config;

  for (std::size_t h_idx = 0; h_idx < config.hurst_targets.size(); ++h_idx) {
    const double hurst = config.hurst_targets[h_idx];
    // One synthesis stream per (hurst, replicate): stream index packs both,
    // so arms/filters of the same replicate reuse the identical realization.
    auto stream_of = [&](std::size_t rep) {
      return h_idx * reps + rep;
    };

    std::unique_ptr<FbmGenerator1D> gen1;
    std::unique_ptr<FbfGenerator2D> gen2;
    if (config.dimension == 1) {
      gen1 = std::make_unique<FbmGenerator1D>(hurst, config.size);
    } else {
      gen2 = std::make_unique<FbfGenerator2D>(hurst, config.size);
    }

    // Optional ensemble pre-pass: average subband energy per (filter, direction).
    std::vector<std::vector<double>> ensemble_variance;  // [filter][direction]
    const bool ensemble_mode =
        config.contamination && config.contamination->ensemble_variance;
    if (ensemble_mode) {
      ensemble_variance.assign(filters.size(),
                               std::vector<double>(directions.size(), 0.0));
      std::vector<std::vector<std::vector<double>>> partial(
          reps, std::vector<std::vector<double>>(
                    filters.size(), std::vector<double>(directions.size(), 0.0)));
      parallel_for(reps, config.threads, [&](std::size_t rep) {
        if (config.dimension == 1) {
          const auto series = gen1->generate(config.base_seed, stream_of(rep));
          for (std::size_t f = 0; f < filters.size(); ++f) {
            const auto decomp = dwt1d(series, filters[f], contamination_level);
            const auto& band = decomp.level(contamination_level);
            double energy = 0.0;
            for (double c : band) energy += c * c;
            partial[rep][f][0] = energy / static_cast<double>(band.size());
          }
        } else {
          const Grid2D field = gen2->generate(config.base_seed, stream_of(rep));
          for (std::size_t f = 0; f < filters.size(); ++f) {
            const auto decomp = dwt2d(field, filters[f], contamination_level);
            for (std::size_t d = 0; d < directions.size(); ++d) {
              const auto& band = decomp.level(contamination_level).band(directions[d]);
              double energy = 0.0;
              for (double c : band) energy += c * c;
              partial[rep][f][d] = energy / static_cast<double>(band.size());
            }
          }
        }
      });
      for (std::size_t rep = 0; rep < reps; ++rep) {
        for (std::size_t f = 0; f < filters.size(); ++f) {
          for (std::size_t d = 0; d < directions.size(); ++d) {
            ensemble_variance[f][d] += partial[rep][f][d] / static_cast<double>(reps);
          }
        }
      }
    }

    // estimates[filter][method][direction][replicate]
    std::vector<std::vector<std::vector<CellAccumulator>>> acc(filters.size());
    for (auto& per_filter : acc) {
      per_filter.resize(config.methods.size());
      for (auto& per_method : per_filter) {
        per_method.resize(directions.size());
        for (auto& cell : per_method) cell.estimates.assign(reps, 0.0);
      }
    }

    parallel_for(reps, config.threads, [&](std::size_t rep) {
      try {
        std::vector<double> series;
        Grid2D field;
        if (config.dimension == 1) {
          series = gen1->generate(config.base_seed, stream_of(rep));
        } else {
          field = gen2->generate(config.base_seed, stream_of(rep));
        }
        for (std::size_t f = 0; f < filters.size(); ++f) {
          auto run_estimators = [&](const auto& decomp) {
            for (std::size_t d = 0; d < directions.size(); ++d) {
              WaveletSpectrum spectrum;
              if constexpr (std::is_same_v<std::decay_t<decltype(decomp)>,
                                           Decomposition1D>) {
                spectrum = level_energies(decomp, levels);
              } else {
                spectrum = level_energies(decomp, directions[d], levels);
              }
              for (std::size_t mth = 0; mth < config.methods.size(); ++mth) {
                const HurstEstimate est = estimate(config.methods[mth], spectrum,
                                                   config.dimension,
                                                   config.estimator_options);
                acc[f][mth][d].estimates[rep] = est.hurst;
              }
            }
          };

          ContaminationSpec cspec;
          if (config.contamination) {
            cspec.target_level = contamination_level;
            cspec.directions = config.contamination->directions;
            cspec.scale_rule = config.contamination->scale_rule;
            cspec.variance = config.contamination->variance;
            cspec.seed = config.base_seed;
            // Distinct noise stream per (hurst, replicate, filter).
            cspec.stream_index = (stream_of(rep) * filters.size()) + f;
          }

          if (config.dimension == 1) {
            auto decomp = dwt1d(series, filters[f], std::min(levels.first,
                                                             contamination_level));
            if (config.contamination) {
              if (ensemble_mode) {
                cspec.scale_rule = ScaleRule::explicit_variance;
                cspec.variance = ensemble_variance[f][0];
              }
              decomp = contaminate(decomp, cspec);
            }
            run_estimators(decomp);
          } else {
            auto decomp = dwt2d(field, filters[f], std::min(levels.first,
                                                            contamination_level));
            if (config.contamination) {
              if (ensemble_mode) {
                // Per-direction ensemble variances need one call per targeted
                // direction.
                for (Direction target : config.contamination->directions) {
                  std::size_t d = 0;
                  while (d < directions.size() && directions[d] != target) ++d;
                  ContaminationSpec one = cspec;
                  one.scale_rule = ScaleRule::explicit_variance;
                  one.variance = ensemble_variance[f][d];
                  one.directions = {target};
                  one.stream_index = cspec.stream_index * directions.size() + d;
                  decomp = contaminate(decomp, one);
                }
              } else {
                decomp = contaminate(decomp, cspec);
              }
            }
            run_estimators(decomp);
          }
        }
      } catch (const std::exception& err) {
        // Fail fast, but leave the offending replicate in the log.
        std::cerr << "replicate " << rep << " (stream " << stream_of(rep)
                  << ", seed " << config.base_seed << ") failed: " << err.what()
                  << "\n";
        throw;
      }
    });

    for (std::size_t f = 0; f < filters.size(); ++f) {
      for (std::size_t mth = 0; mth < config.methods.size(); ++mth) {
        for (std::size_t d = 0; d < directions.size(); ++d) {
          const auto& values = acc[f][mth][d].estimates;
          double mean = 0.0;
          for (double v : values) mean += v;
          mean /= static_cast<double>(values.size());
          double variance = 0.0, mse = 0.0;
          for (double v : values) {
            variance += (v - mean) * (v - mean);
            mse += (v - hurst) * (v - hurst);
          }
          variance /= static_cast<double>(values.size());
          mse /= static_cast<double>(values.size());

          ReportCell cell;
          cell.hurst_target = hurst;
          cell.filter = config.filters[f];
          cell.method = config.methods[mth];
          cell.direction = directions[d];
          cell.replicates = config.replicates;
          cell.mean_h = mean;
          cell.bias = mean - hurst;
          cell.variance = variance;
          cell.mse = mse;
          report.cells.push_back(cell);
        }
      }
    }
  }
  return report;
}

}  // namespace wavescale
