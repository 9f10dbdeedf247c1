#include "wavescale/classify.hpp"

#include <algorithm>
#include <map>
#include <vector>

#include "wavescale/errors.hpp"
#include "wavescale/parallel.hpp"
#include "wavescale/rng.hpp"

namespace wavescale {

namespace {

struct Subject {
  std::string id;
  Status status = Status::normal;
  std::vector<double> features;  // patch means per requested feature
};

std::vector<Subject> aggregate_subjects(std::span<const SampleRecord> records,
                                        std::span<const Feature> features) {
  std::map<std::string, Subject> by_id;
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) {
    auto [it, inserted] = by_id.try_emplace(r.subject_id);
    Subject& s = it->second;
    if (inserted) {
      s.id = r.subject_id;
      s.status = r.status;
      s.features.assign(features.size(), 0.0);
    } else if (s.status != r.status) {
      throw Error(Error::Kind::invalid_input,
                  "subject " + r.subject_id + " has inconsistent status");
    }
    for (std::size_t f = 0; f < features.size(); ++f) {
      s.features[f] += feature_value(r, features[f]);
    }
    counts[r.subject_id] += 1;
  }
  std::vector<Subject> subjects;
  subjects.reserve(by_id.size());
  for (auto& [id, s] : by_id) {
    const double n = static_cast<double>(counts[id]);
    for (double& v : s.features) v /= n;
    subjects.push_back(std::move(s));
  }
  return subjects;
}

struct RepetitionResult {
  double total = 0.0, specificity = 0.0, sensitivity = 0.0, auc = 0.0;
};

}  // namespace

CvReport classify_cv(std::span<const SampleRecord> records,
                     std::span<const Feature> features, const CvOptions& options) {
  if (features.empty()) {
    throw Error(Error::Kind::invalid_input, "at least one feature required");
  }
  if (options.folds < 2) {
    throw Error(Error::Kind::invalid_input, "folds must be >= 2");
  }
  if (options.repetitions < 1) {
    throw Error(Error::Kind::invalid_input, "repetitions must be >= 1");
  }
  const std::vector<Subject> subjects = aggregate_subjects(records, features);

  std::vector<std::size_t> cancer_ids, normal_ids;
  for (std::size_t i = 0; i < subjects.size(); ++i) {
    (subjects[i].status == Status::cancer ? cancer_ids : normal_ids).push_back(i);
  }
  const std::size_t folds = static_cast<std::size_t>(options.folds);
  if (cancer_ids.size() < folds || normal_ids.size() < folds) {
    throw InsufficientGroups("each class needs at least `folds` subjects");
  }

  double global_threshold = 0.5;
  if (options.global_threshold) {
    std::vector<std::vector<double>> x;
    std::vector<int> y;
    for (const auto& s : subjects) {
      x.push_back(s.features);
      y.push_back(s.status == Status::cancer ? 1 : 0);
    }
    global_threshold = fit_logistic(x, y).roc.youden_threshold;
  }

  std::vector<RepetitionResult> reps(static_cast<std::size_t>(options.repetitions));
  parallel_for(reps.size(), options.threads, [&](std::size_t rep) {
    CounterRng rng(options.seed, make_stream(StreamPurpose::shuffle, rep));
    // Stratified fold assignment at the subject level.
    std::vector<int> fold_of(subjects.size(), 0);
    for (auto* ids : {&cancer_ids, &normal_ids}) {
      std::vector<std::size_t> shuffled = *ids;
      for (std::size_t i = shuffled.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(shuffled[i - 1], shuffled[j]);
      }
      for (std::size_t i = 0; i < shuffled.size(); ++i) {
        fold_of[shuffled[i]] = static_cast<int>(i % folds);
      }
    }

    std::vector<double> test_scores(subjects.size(), 0.0);
    std::vector<int> test_labels(subjects.size(), 0);
    std::vector<int> test_predictions(subjects.size(), 0);
    for (std::size_t fold = 0; fold < folds; ++fold) {
      std::vector<std::vector<double>> train_x;
      std::vector<int> train_y;
      for (std::size_t i = 0; i < subjects.size(); ++i) {
        if (fold_of[i] != static_cast<int>(fold)) {
          train_x.push_back(subjects[i].features);
          train_y.push_back(subjects[i].status == Status::cancer ? 1 : 0);
        }
      }
      const LogisticModel model = fit_logistic(train_x, train_y);
      const double threshold = options.global_threshold
                                   ? global_threshold
                                   : model.roc.youden_threshold;
      for (std::size_t i = 0; i < subjects.size(); ++i) {
        if (fold_of[i] != static_cast<int>(fold)) continue;
        const double p = model.predict(subjects[i].features);
        test_scores[i] = p;
        test_labels[i] = subjects[i].status == Status::cancer ? 1 : 0;
        test_predictions[i] = p >= threshold ? 1 : 0;
      }
    }

    double tp = 0.0, tn = 0.0, fp = 0.0, fn = 0.0;
    for (std::size_t i = 0; i < subjects.size(); ++i) {
      if (test_labels[i] == 1) {
        (test_predictions[i] == 1 ? tp : fn) += 1.0;
      } else {
        (test_predictions[i] == 0 ? tn : fp) += 1.0;
      }
    }
    RepetitionResult& out = reps[rep];
    out.total = (tp + tn) / static_cast<double>(subjects.size());
    out.sensitivity = tp / (tp + fn);
    out.specificity = tn / (tn + fp);
    out.auc = roc_curve(test_scores, test_labels).auc;
  });

  CvReport report;
  report.folds = options.folds;
  report.repetitions = options.repetitions;
  report.subjects = static_cast<int>(subjects.size());
  for (const auto& r : reps) {
    report.total += r.total;
    report.specificity += r.specificity;
    report.sensitivity += r.sensitivity;
    report.auc += r.auc;
  }
  const double n_reps = static_cast<double>(reps.size());
  report.total /= n_reps;
  report.specificity /= n_reps;
  report.sensitivity /= n_reps;
  report.auc /= n_reps;
  return report;
}

}  // namespace wavescale
