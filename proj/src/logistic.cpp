#include "wavescale/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "wavescale/errors.hpp"

namespace wavescale {

namespace {

void check_two_classes(std::span<const int> labels) {
  bool has_pos = false, has_neg = false;
  for (int l : labels) {
    if (l == 1) has_pos = true;
    else if (l == 0) has_neg = true;
    else throw Error(Error::Kind::invalid_input, "labels must be 0 or 1");
  }
  if (!has_pos || !has_neg) {
    throw InsufficientGroups("both classes must be present");
  }
}

// Solves the symmetric system a x = b in place (Gaussian elimination with
// partial pivoting); a is k x k row-major.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const std::size_t k = b.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r) {
      if (std::abs(a[r * k + col]) > std::abs(a[pivot * k + col])) pivot = r;
    }
    if (std::abs(a[pivot * k + col]) < 1e-300) {
      throw Error(Error::Kind::numeric_failure, "singular system in IRLS step");
    }
    if (pivot != col) {
      for (std::size_t c = 0; c < k; ++c) std::swap(a[col * k + c], a[pivot * k + c]);
      std::swap(b[col], b[pivot]);
    }
    const double inv = 1.0 / a[col * k + col];
    for (std::size_t r = col + 1; r < k; ++r) {
      const double factor = a[r * k + col] * inv;
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < k; ++c) a[r * k + c] -= factor * a[col * k + c];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(k, 0.0);
  for (std::size_t ri = k; ri-- > 0;) {
    double sum = b[ri];
    for (std::size_t c = ri + 1; c < k; ++c) sum -= a[ri * k + c] * x[c];
    x[ri] = sum / a[ri * k + ri];
  }
  return x;
}

}  // namespace

RocCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw Error(Error::Kind::invalid_input, "scores and labels must match and be nonempty");
  }
  check_two_classes(labels);

  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  double n_pos = 0.0, n_neg = 0.0;
  for (int l : labels) (l == 1 ? n_pos : n_neg) += 1.0;

  RocCurve curve;
  curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
  double tp = 0.0, fp = 0.0;
  double auc = 0.0;
  double best_j = -1.0, best_threshold = 0.0;
  std::size_t i = 0;
  while (i < n) {
    const double value = scores[order[i]];
    // Group tied scores so the trapezoid AUC equals the pair-counting
    // statistic with ties counted as 1/2.
    double d_tp = 0.0, d_fp = 0.0;
    while (i < n && scores[order[i]] == value) {
      (labels[order[i]] == 1 ? d_tp : d_fp) += 1.0;
      ++i;
    }
    const double prev_tpr = tp / n_pos;
    const double prev_fpr = fp / n_neg;
    tp += d_tp;
    fp += d_fp;
    const double tpr = tp / n_pos;
    const double fpr = fp / n_neg;
    auc += (fpr - prev_fpr) * (tpr + prev_tpr) / 2.0;
    curve.points.push_back({value, fpr, tpr});
    const double youden = tpr - fpr;
    if (youden > best_j + 1e-15) {
      best_j = youden;
      best_threshold = value;
    }
  }
  curve.auc = auc;
  curve.youden_index = best_j;
  curve.youden_threshold = best_threshold;
  return curve;
}

double LogisticModel::predict(std::span<const double> x) const {
  double eta = intercept;
  for (std::size_t i = 0; i < coefficients.size() && i < x.size(); ++i) {
    eta += coefficients[i] * x[i];
  }
  return 1.0 / (1.0 + std::exp(-eta));
}

LogisticModel fit_logistic(const std::vector<std::vector<double>>& x,
                           const std::vector<int>& y) {
  const std::size_t n = y.size();
  if (x.size() != n || n == 0) {
    throw Error(Error::Kind::invalid_input, "design matrix and labels must match");
  }
  check_two_classes(y);
  const std::size_t n_features = x[0].size();
  for (const auto& row : x) {
    if (row.size() != n_features) {
      throw Error(Error::Kind::invalid_input, "ragged design matrix");
    }
  }
  const std::size_t k = n_features + 1;  // intercept first
  if (k > 16) {
    throw Error(Error::Kind::invalid_input, "at most 15 features supported");
  }

  std::vector<double> beta(k, 0.0);
  auto eta_of = [&](std::size_t i) {
    double eta = beta[0];
    for (std::size_t f = 0; f < n_features; ++f) eta += beta[f + 1] * x[i][f];
    return eta;
  };
  auto log_likelihood = [&]() {
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double eta = eta_of(i);
      // log p(y) = y*eta - log(1 + e^eta), computed stably.
      ll += y[i] * eta - (eta > 0.0 ? eta + std::log1p(std::exp(-eta))
                                    : std::log1p(std::exp(eta)));
    }
    return ll;
  };

  constexpr int kMaxIter = 100;
  constexpr double kTol = 1e-10;
  constexpr double kBetaCap = 1e4;
  constexpr double kSaturation = 1e-8;
  LogisticModel model;
  double ll_prev = log_likelihood();
  int iter = 0;
  for (; iter < kMaxIter; ++iter) {
    // Newton step: (X'WX) delta = X'(y - p).
    std::vector<double> xtwx(k * k, 0.0);
    std::vector<double> grad(k, 0.0);
    bool saturated = true;
    for (std::size_t i = 0; i < n; ++i) {
      const double eta = eta_of(i);
      const double p = 1.0 / (1.0 + std::exp(-eta));
      if (y[i] == 1 ? (p < 1.0 - kSaturation) : (p > kSaturation)) saturated = false;
      const double w = std::max(p * (1.0 - p), 1e-12);
      const double resid = y[i] - p;
      double row[16];  // k is tiny (<= 4 in practice)
      row[0] = 1.0;
      for (std::size_t f = 0; f < n_features; ++f) row[f + 1] = x[i][f];
      for (std::size_t a = 0; a < k; ++a) {
        grad[a] += row[a] * resid;
        for (std::size_t b = 0; b <= a; ++b) xtwx[a * k + b] += w * row[a] * row[b];
      }
    }
    if (saturated) {
      // Every fitted probability has hit its label: (quasi-)separated data.
      // The MLE diverges; stop at the current finite iterate and flag it.
      model.separation_flag = true;
      break;
    }
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) xtwx[a * k + b] = xtwx[b * k + a];
      xtwx[a * k + a] *= 1.0 + 1e-12;  // scale-relative guard, keeps Newton equivariant
    }
    const std::vector<double> delta = solve_dense(std::move(xtwx), grad);
    for (std::size_t a = 0; a < k; ++a) beta[a] += delta[a];

    double max_beta = 0.0;
    for (double b : beta) max_beta = std::max(max_beta, std::abs(b));
    if (max_beta > kBetaCap) {
      model.separation_flag = true;
      const double shrink = kBetaCap / max_beta;
      for (double& b : beta) b *= shrink;
      ++iter;
      break;
    }
    const double ll = log_likelihood();
    if (std::abs(ll - ll_prev) < kTol) {
      ll_prev = ll;
      ++iter;
      break;
    }
    ll_prev = ll;
  }
  ll_prev = log_likelihood();

  model.intercept = beta[0];
  model.coefficients.assign(beta.begin() + 1, beta.end());
  model.iterations = iter;
  model.log_likelihood = ll_prev;
  model.fitted.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.fitted[i] = 1.0 / (1.0 + std::exp(-eta_of(i)));
  }
  model.roc = roc_curve(model.fitted, y);
  return model;
}

LogisticModel fit_logistic(std::span<const SampleRecord> records,
                           std::span<const Feature> features) {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  x.reserve(records.size());
  y.reserve(records.size());
  for (const auto& r : records) {
    std::vector<double> row;
    row.reserve(features.size());
    for (Feature f : features) row.push_back(feature_value(r, f));
    x.push_back(std::move(row));
    y.push_back(r.status == Status::cancer ? 1 : 0);
  }
  return fit_logistic(x, y);
}

}  // namespace wavescale
