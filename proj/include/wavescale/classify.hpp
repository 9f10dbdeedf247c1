#pragma once

#include <cstdint>
#include <span>

#include "wavescale/logistic.hpp"

namespace wavescale {

struct CvOptions {
  int folds = 4;
  int repetitions = 30;  // paper protocol uses 300
  std::uint64_t seed = 0;
  // Youden threshold is chosen per training fold by default; the global
  // variant picks it once on the full data before the folds run.
  bool global_threshold = false;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct CvReport {
  double total = 0.0;        // classification accuracy
  double specificity = 0.0;  // true negative rate (normal)
  double sensitivity = 0.0;  // true positive rate (cancer)
  double auc = 0.0;
  int folds = 0;
  int repetitions = 0;
  int subjects = 0;
};

// Repeated stratified k-fold CV of a logistic classifier on subject-level
// features (per-subject patch means, i.e. the fitted status+patient effects
// of the nested layout). Folds are split at the subject level: a subject's
// patches never straddle folds.
CvReport classify_cv(std::span<const SampleRecord> records,
                     std::span<const Feature> features, const CvOptions& options);

}  // namespace wavescale
