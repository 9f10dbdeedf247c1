#pragma once

#include <span>
#include <vector>

#include "wavescale/anova.hpp"

namespace wavescale {

struct RocPoint {
  double threshold = 0.0;  // classify positive when score >= threshold
  double fpr = 0.0;
  double tpr = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // swept from high to low threshold
  double auc = 0.0;
  double youden_threshold = 0.0;
  double youden_index = 0.0;  // max(tpr - fpr)
};

// Threshold sweep over the distinct score values (ties grouped); AUC by the
// trapezoid rule, which then equals the concordant-pair statistic exactly.
// labels are 0/1 with 1 the positive class; both must be present.
RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

struct LogisticModel {
  double intercept = 0.0;
  std::vector<double> coefficients;
  std::vector<double> fitted;  // fitted probabilities, input order
  RocCurve roc;                // ROC of fitted probabilities vs labels
  bool separation_flag = false;
  int iterations = 0;
  double log_likelihood = 0.0;

  double predict(std::span<const double> x) const;
};

// Maximum-likelihood fit by iteratively reweighted least squares; converged
// when the log-likelihood change drops below 1e-10, capped at 100
// iterations. Perfect separation leaves diverging coefficients: the fit is
// stopped, capped and flagged instead of failing.
LogisticModel fit_logistic(const std::vector<std::vector<double>>& x,
                           const std::vector<int>& y);

LogisticModel fit_logistic(std::span<const SampleRecord> records,
                           std::span<const Feature> features);

}  // namespace wavescale
