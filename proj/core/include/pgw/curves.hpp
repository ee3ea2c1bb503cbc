#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pgw/data.hpp"
#include "pgw/inference.hpp"

namespace pgw {

/// One point of a plot-ready survival curve.
struct CurvePoint {
  std::string source;  // "model" or "km"
  int arm = 1;         // 1 treated, 2 control
  std::string group;   // covariate level, e.g. "D=1", or "all"
  double time = 0.0;
  double survival = 1.0;
};

/// Marginal model survival on `grid` for each arm and each distinct covariate
/// row of the data, plus Kaplan-Meier steps of the matching subjects. Every
/// curve includes a time-0 point at survival 1.
std::vector<CurvePoint> export_fitted_curves(const FitResult& fit, const PairedData& data,
                                             const std::vector<double>& grid);

void write_curves_csv(std::ostream& out, const std::vector<CurvePoint>& points);

}  // namespace pgw
