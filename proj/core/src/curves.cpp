#include "pgw/curves.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "pgw/errors.hpp"

namespace pgw {

namespace {

std::string group_label(const PairedData& data, const std::vector<double>& row) {
  if (data.covariate_names.empty()) return "all";
  std::ostringstream os;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) os << ';';
    os << data.covariate_names[i] << '=' << row[i];
  }
  return os.str();
}

}  // namespace

std::vector<CurvePoint> export_fitted_curves(const FitResult& fit, const PairedData& data,
                                             const std::vector<double>& grid) {
  if (data.empty()) throw InputError("export_fitted_curves: no data");
  for (double t : grid)
    if (!(t >= 0.0)) throw DomainError("export_fitted_curves: grid times must be >= 0");

  std::vector<std::vector<double>> levels;
  for (const PairedRecord& r : data.records) {
    if (std::find(levels.begin(), levels.end(), r.covariates) == levels.end())
      levels.push_back(r.covariates);
  }
  std::sort(levels.begin(), levels.end());

  const ParamLayout layout(fit.spec, data.covariate_names);
  std::vector<CurvePoint> out;
  for (const auto& level : levels) {
    const std::string group = group_label(data, level);
    const BivariateModel model = layout.model_at(fit.theta, level);
    for (int arm = 1; arm <= 2; ++arm) {
      out.push_back({"model", arm, group, 0.0, 1.0});
      for (double t : grid) {
        if (t == 0.0) continue;
        out.push_back({"model", arm, group, t, margin_survival(t, model, arm)});
      }
      std::vector<double> times;
      std::vector<bool> events;
      for (const PairedRecord& r : data.records) {
        if (r.covariates != level) continue;
        times.push_back(arm == 1 ? r.t1 : r.t2);
        events.push_back(arm == 1 ? r.d1 : r.d2);
      }
      const KmCurve km = kaplan_meier(times, events);
      out.push_back({"km", arm, group, 0.0, 1.0});
      for (std::size_t i = 0; i < km.times.size(); ++i)
        out.push_back({"km", arm, group, km.times[i], km.survival[i]});
    }
  }
  return out;
}

void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& points) {
  out << "source,arm,group,time,survival\n";
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const CurvePoint& p : points)
    out << p.source << ',' << p.arm << ',' << p.group << ',' << p.time << ',' << p.survival << '\n';
}

}  // namespace pgw
