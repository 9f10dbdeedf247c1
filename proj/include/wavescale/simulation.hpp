#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wavescale/estimators.hpp"
#include "wavescale/synthesis.hpp"

namespace wavescale {

struct ContaminationConfig {
  // Level to contaminate; -1 means the coarsest level of the spectrum range.
  int level = -1;
  std::vector<Direction> directions = {Direction::diagonal, Direction::horizontal,
                                       Direction::vertical};
  ScaleRule scale_rule = ScaleRule::match_average_energy;
  double variance = 0.0;
  // When set, the noise variance is the ensemble average of the subband mean
  // energies over all replicates instead of the per-realization value.
  bool ensemble_variance = false;
};

struct ExperimentConfig {
  int dimension = 1;
  std::vector<double> hurst_targets = {0.5};
  std::size_t size = 512;
  std::vector<FilterName> filters = {FilterName::haar};
  std::vector<EstimatorMethod> methods = {EstimatorMethod::ols, EstimatorMethod::av,
                                          EstimatorMethod::tt};
  // first > last means "use default_level_range(size)".
  LevelRange levels{1, 0};
  std::optional<ContaminationConfig> contamination;
  int replicates = 100;
  std::uint64_t base_seed = 0;
  unsigned threads = 0;
  EstimatorOptions estimator_options{};
};

void validate_experiment_config(const ExperimentConfig& config);

struct ReportCell {
  double hurst_target = 0.0;
  FilterName filter = FilterName::haar;
  EstimatorMethod method = EstimatorMethod::ols;
  Direction direction = Direction::signal;
  int replicates = 0;
  double mean_h = 0.0;
  double bias = 0.0;
  double variance = 0.0;  // population variance, so mse = bias^2 + variance
  double mse = 0.0;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::vector<ReportCell> cells;

  const ReportCell& cell(double hurst, FilterName filter, EstimatorMethod method,
                         Direction direction) const;
};

// Monte-Carlo benchmark: per replicate synthesize, transform, optionally
// contaminate, compute spectra and run each estimator; aggregate to
// mean/bias/variance/MSE per (hurst, filter, method, direction) cell.
// Per-replicate seeds are derived from base_seed by counter splitting, so
// the clean and contaminated arms of two runs with the same base_seed see
// identical realizations, and results do not depend on the thread count.
ExperimentReport run_simulation(const ExperimentConfig& config);

}  // namespace wavescale
