#pragma once

#include <map>
#include <string>
#include <vector>

namespace frontlab {

struct Criterion {
  std::string name;
  std::string metric;
  std::string op;  // "<", "<=", ">", ">=", "=="
  double threshold = 0.0;
  double value = 0.0;
  bool pass = false;
};

struct Series {
  std::vector<double> t;
  std::vector<double> v;
};

/// Named metrics, series and pass flags of one experiment.
struct ExperimentReport {
  std::string name;
  std::map<std::string, double> parameters;
  std::map<std::string, std::string> labels;
  std::map<std::string, double> metrics;
  std::map<std::string, Series> series;
  std::map<std::string, std::string> scheme_of;
  std::vector<Criterion> criteria;
  std::vector<std::string> artifacts;
  std::vector<std::string> notes;
  bool skipped = false;
  std::string skip_reason;
  std::string error;

  double& metric(const std::string& key) { return metrics[key]; }
  double metric_or(const std::string& key, double fallback) const;
  /// Adds a pass flag comparing a recorded metric against a threshold.
  bool check(const std::string& criterion, const std::string& metric_name, const std::string& op, double threshold);
  /// Adds a boolean flag backed by a 0/1 metric.
  bool require(const std::string& criterion, bool ok);

  bool pass() const;
  std::string to_json(int indent = 2) const;
  void write(const std::string& directory) const;
};

}  // namespace frontlab
