#include "ergo/report.hpp"

#include "ergo/core.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace ergo {

bool ExperimentReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::vector<SeriesPoint> ExperimentReport::labelled(const std::string& label) const {
  std::vector<SeriesPoint> out;
  for (const auto& p : series)
    if (p.label == label) out.push_back(p);
  return out;
}

void to_json(nlohmann::json& j, const SeriesPoint& p) { j = {{"x", p.x}, {"y", p.y}, {"label", p.label}}; }
void from_json(const nlohmann::json& j, SeriesPoint& p) {
  j.at("x").get_to(p.x);
  j.at("y").get_to(p.y);
  p.label = j.value("label", std::string{});
}

void to_json(nlohmann::json& j, const Fit& f) {
  j = {{"name", f.name}, {"exponent", f.exponent}, {"constant", f.constant}, {"residual", f.residual}};
}
void from_json(const nlohmann::json& j, Fit& f) {
  j.at("name").get_to(f.name);
  j.at("exponent").get_to(f.exponent);
  j.at("constant").get_to(f.constant);
  j.at("residual").get_to(f.residual);
}

void to_json(nlohmann::json& j, const Verdict& v) {
  j = {{"criterion", v.criterion}, {"pass", v.pass}, {"tolerance", v.tolerance}, {"observed", v.observed}};
}
void from_json(const nlohmann::json& j, Verdict& v) {
  j.at("criterion").get_to(v.criterion);
  j.at("pass").get_to(v.pass);
  j.at("tolerance").get_to(v.tolerance);
  j.at("observed").get_to(v.observed);
}

void to_json(nlohmann::json& j, const ExperimentReport& r) {
  j = {{"experiment", r.experiment}, {"seed", r.seed},         {"params", r.params},
       {"series", r.series},         {"fits", r.fits},         {"verdicts", r.verdicts},
       {"duration_seconds", r.duration_seconds}};
}

void from_json(const nlohmann::json& j, ExperimentReport& r) {
  j.at("experiment").get_to(r.experiment);
  j.at("seed").get_to(r.seed);
  r.params = j.at("params");
  j.at("series").get_to(r.series);
  j.at("fits").get_to(r.fits);
  j.at("verdicts").get_to(r.verdicts);
  j.at("duration_seconds").get_to(r.duration_seconds);
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << "experiment,x,y,label\n" << std::setprecision(17);
  for (const auto& p : report.series) out << report.experiment << ',' << p.x << ',' << p.y << ',' << p.label << '\n';
  return out.str();
}

Fit fit_power_law(const std::string& name, const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ParameterError("fit: x and y differ in length");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  if (lx.size() < 2) throw ParameterError("fit: fewer than two positive points");
  Eigen::MatrixXd design(lx.size(), 2);
  Eigen::VectorXd rhs(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) {
    design(static_cast<Eigen::Index>(i), 0) = lx[i];
    design(static_cast<Eigen::Index>(i), 1) = 1.0;
    rhs[static_cast<Eigen::Index>(i)] = ly[i];
  }
  Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  Fit f;
  f.name = name;
  f.exponent = coef[0];
  f.constant = std::exp(coef[1]);
  f.residual = std::sqrt((design * coef - rhs).squaredNorm() / static_cast<double>(lx.size()));
  return f;
}

}  // namespace ergo
