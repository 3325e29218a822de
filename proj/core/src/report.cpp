#include "frontlab/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "frontlab/error.hpp"

namespace frontlab {

double ExperimentReport::metric_or(const std::string& key, double fallback) const {
  auto it = metrics.find(key);
  return it == metrics.end() ? fallback : it->second;
}

bool ExperimentReport::check(const std::string& criterion, const std::string& metric_name, const std::string& op,
                             double threshold) {
  auto it = metrics.find(metric_name);
  if (it == metrics.end()) fail(ErrorKind::invalid_argument, "criterion '" + criterion + "' names unknown metric " + metric_name);
  const double v = it->second;
  bool ok = false;
  if (op == "<") ok = v < threshold;
  else if (op == "<=") ok = v <= threshold;
  else if (op == ">") ok = v > threshold;
  else if (op == ">=") ok = v >= threshold;
  else if (op == "==") ok = v == threshold;
  else fail(ErrorKind::invalid_argument, "unknown comparison " + op);
  if (std::isnan(v)) ok = false;
  criteria.push_back({criterion, metric_name, op, threshold, v, ok});
  return ok;
}

bool ExperimentReport::require(const std::string& criterion, bool ok) {
  metrics[criterion] = ok ? 1.0 : 0.0;
  return check(criterion, criterion, "==", 1.0);
}

bool ExperimentReport::pass() const {
  if (!error.empty() || skipped) return false;
  for (const auto& c : criteria)
    if (!c.pass) return false;
  return true;
}

namespace {
nlohmann::ordered_json real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}
}  // namespace

std::string ExperimentReport::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["name"] = name;
  j["pass"] = pass();
  if (skipped) j["skipped"] = skip_reason;
  if (!error.empty()) j["error"] = error;
  auto& p = j["parameters"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : parameters) p[k] = real(v);
  for (const auto& [k, v] : labels) p[k] = v;
  auto& m = j["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : metrics) m[k] = real(v);
  auto& c = j["criteria"] = nlohmann::ordered_json::array();
  for (const auto& cr : criteria)
    c.push_back({{"name", cr.name}, {"metric", cr.metric}, {"op", cr.op}, {"threshold", real(cr.threshold)},
                 {"value", real(cr.value)}, {"pass", cr.pass}});
  auto& sc = j["scheme"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : scheme_of) sc[k] = v;
  auto& s = j["series"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : series) {
    nlohmann::ordered_json t = nlohmann::ordered_json::array(), vals = nlohmann::ordered_json::array();
    for (double x : v.t) t.push_back(real(x));
    for (double x : v.v) vals.push_back(real(x));
    s[k] = {{"t", t}, {"v", vals}};
  }
  j["artifacts"] = artifacts;
  j["notes"] = notes;
  return j.dump(indent);
}

void ExperimentReport::write(const std::string& directory) const {
  std::filesystem::create_directories(directory);
  std::ofstream os(directory + "/report.json");
  if (!os) fail(ErrorKind::invalid_argument, "cannot write report to " + directory);
  os << to_json() << '\n';
}

}  // namespace frontlab
