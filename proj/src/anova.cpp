#include "wavescale/anova.hpp"

#include <map>
#include <string>

#include "wavescale/errors.hpp"
#include "wavescale/stats.hpp"

namespace wavescale {

std::string status_token(Status status) {
  return status == Status::cancer ? "cancer" : "normal";
}

Status parse_status(std::string_view token) {
  if (token == "cancer") return Status::cancer;
  if (token == "normal") return Status::normal;
  throw Error(Error::Kind::invalid_input, "unknown status: " + std::string(token));
}

std::string feature_token(Feature feature) {
  switch (feature) {
    case Feature::h_d: return "hd";
    case Feature::h_h: return "hh";
    case Feature::h_v: return "hv";
  }
  return "?";
}

Feature parse_feature(std::string_view token) {
  if (token == "hd") return Feature::h_d;
  if (token == "hh") return Feature::h_h;
  if (token == "hv") return Feature::h_v;
  throw Error(Error::Kind::invalid_input, "unknown feature: " + std::string(token));
}

double feature_value(const SampleRecord& record, Feature feature) {
  switch (feature) {
    case Feature::h_d: return record.h_d;
    case Feature::h_h: return record.h_h;
    case Feature::h_v: return record.h_v;
  }
  return 0.0;
}

AnovaTable nested_anova(std::span<const SampleRecord> records, Feature feature) {
  struct SubjectAcc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  // status -> subject -> accumulator (map keeps the layout deterministic).
  std::map<Status, std::map<std::string, SubjectAcc>> groups;
  double grand_sum = 0.0;
  for (const auto& r : records) {
    auto& acc = groups[r.status][r.subject_id];
    const double v = feature_value(r, feature);
    acc.sum += v;
    acc.n += 1;
    grand_sum += v;
  }
  if (groups.size() < 2) {
    throw InsufficientGroups("nested ANOVA needs both status groups");
  }
  for (const auto& [status, subjects] : groups) {
    if (subjects.size() < 2) {
      throw InsufficientGroups("status group '" + status_token(status) +
                               "' has fewer than 2 subjects");
    }
  }

  const double n_total = static_cast<double>(records.size());
  const double grand_mean = grand_sum / n_total;

  double ss_status = 0.0, ss_patients = 0.0, ss_error = 0.0, ss_total = 0.0;
  double df_patients = 0.0, df_error = 0.0;
  for (const auto& [status, subjects] : groups) {
    double group_sum = 0.0;
    double group_n = 0.0;
    for (const auto& [id, acc] : subjects) {
      group_sum += acc.sum;
      group_n += static_cast<double>(acc.n);
    }
    const double group_mean = group_sum / group_n;
    ss_status += group_n * (group_mean - grand_mean) * (group_mean - grand_mean);
    df_patients += static_cast<double>(subjects.size()) - 1.0;
    for (const auto& [id, acc] : subjects) {
      const double subject_mean = acc.sum / static_cast<double>(acc.n);
      ss_patients += static_cast<double>(acc.n) * (subject_mean - group_mean) *
                     (subject_mean - group_mean);
      df_error += static_cast<double>(acc.n) - 1.0;
    }
  }
  for (const auto& r : records) {
    const double d = feature_value(r, feature) - grand_mean;
    ss_total += d * d;
    const auto& acc = groups[r.status][r.subject_id];
    const double subject_mean = acc.sum / static_cast<double>(acc.n);
    const double e = feature_value(r, feature) - subject_mean;
    ss_error += e * e;
  }

  const double df_status = static_cast<double>(groups.size()) - 1.0;
  const double df_total = n_total - 1.0;

  AnovaTable table;
  table.status.source = "Status";
  table.status.sum_sq = ss_status;
  table.status.df = df_status;
  table.status.mean_sq = ss_status / df_status;

  table.patients.source = "Patients(Status)";
  table.patients.sum_sq = ss_patients;
  table.patients.df = df_patients;
  table.patients.mean_sq = df_patients > 0.0 ? ss_patients / df_patients : 0.0;

  table.error.source = "Error";
  table.error.sum_sq = ss_error;
  table.error.df = df_error;
  table.error.mean_sq = df_error > 0.0 ? ss_error / df_error : 0.0;

  table.total.source = "Total";
  table.total.sum_sq = ss_total;
  table.total.df = df_total;

  // Status is tested against the random Patients(Status) mean square. When a
  // denominator mean square is exactly zero the test is undefined; report
  // F = 0, p = 1 rather than claiming significance.
  table.status.p = 1.0;
  table.patients.p = 1.0;
  if (table.patients.mean_sq > 0.0) {
    table.status.f = table.status.mean_sq / table.patients.mean_sq;
    table.status.p = f_sf(table.status.f, df_status, df_patients);
  }
  if (table.error.mean_sq > 0.0 && df_error > 0.0) {
    table.patients.f = table.patients.mean_sq / table.error.mean_sq;
    table.patients.p = f_sf(table.patients.f, df_patients, df_error);
  }
  return table;
}

}  // namespace wavescale
