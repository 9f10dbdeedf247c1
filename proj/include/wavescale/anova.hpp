#pragma once

#include <span>
#include <string>
#include <vector>

namespace wavescale {

enum class Status { cancer, normal };

std::string status_token(Status status);
Status parse_status(std::string_view token);

struct SampleRecord {
  std::string subject_id;
  Status status = Status::normal;
  int patch_index = 1;  // 1..5
  double h_d = 0.0;
  double h_h = 0.0;
  double h_v = 0.0;
};

enum class Feature { h_d, h_h, h_v };

std::string feature_token(Feature feature);  // "hd" | "hh" | "hv"
Feature parse_feature(std::string_view token);
double feature_value(const SampleRecord& record, Feature feature);

struct AnovaRow {
  std::string source;
  double sum_sq = 0.0;
  double df = 0.0;
  double mean_sq = 0.0;
  double f = 0.0;
  double p = 0.0;
};

// Two-level nested layout: Status fixed, Patients(Status) random. The
// Status F statistic is tested against the Patients(Status) mean square.
struct AnovaTable {
  AnovaRow status;
  AnovaRow patients;  // Patients(Status)
  AnovaRow error;
  AnovaRow total;     // sum_sq and df only
};

AnovaTable nested_anova(std::span<const SampleRecord> records, Feature feature);

}  // namespace wavescale
