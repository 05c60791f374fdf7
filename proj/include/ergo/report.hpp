#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ergo {

struct SeriesPoint {
  double x = 0.0;
  double y = 0.0;
  std::string label;
};

/// y ~ constant * x^exponent; residual is the RMS of the log-log misfit.
struct Fit {
  std::string name;
  double exponent = 0.0;
  double constant = 0.0;
  double residual = 0.0;
};

struct Verdict {
  std::string criterion;  // acceptance criterion number, as a string
  bool pass = false;
  double tolerance = 0.0;
  double observed = 0.0;
};

struct ExperimentReport {
  std::string experiment;
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();
  std::vector<SeriesPoint> series;
  std::vector<Fit> fits;
  std::vector<Verdict> verdicts;
  double duration_seconds = 0.0;

  bool all_pass() const;
  /// Points carrying `label`, in insertion order.
  std::vector<SeriesPoint> labelled(const std::string& label) const;
};

void to_json(nlohmann::json& j, const SeriesPoint& p);
void from_json(const nlohmann::json& j, SeriesPoint& p);
void to_json(nlohmann::json& j, const Fit& f);
void from_json(const nlohmann::json& j, Fit& f);
void to_json(nlohmann::json& j, const Verdict& v);
void from_json(const nlohmann::json& j, Verdict& v);
void to_json(nlohmann::json& j, const ExperimentReport& r);
void from_json(const nlohmann::json& j, ExperimentReport& r);

/// Flat export: experiment,x,y,label with one row per series point.
std::string to_csv(const ExperimentReport& report);

/// Least squares on (log x, log y); points with x <= 0 or y <= 0 are skipped.
/// Throws ParameterError with fewer than two usable points.
Fit fit_power_law(const std::string& name, const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ergo
