#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include <pgw/inference.hpp>

namespace pgw::app {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportFormat = "pgw-fit-report/1";

/// Spec object of a fit report. fixed_tau is a number, "inf" or null.
Json spec_to_json(const ModelSpec& spec);
/// Inverse of spec_to_json; missing keys take ModelSpec defaults.
ModelSpec spec_from_json(const Json& j);

/// Natural-scale value of each named coordinate. Coefficients are reported as is.
Json natural_parameters(const FitResult& fit);

Json fit_report(const FitResult& fit, HessianRule rule);
/// Rebuilds the parts of a FitResult a warm start or a delta-method call needs.
FitResult fit_from_report(const Json& report);
FitResult load_fit_report(const std::string& path);

Json comparison_json(const std::vector<ComparisonRow>& rows);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

Json profile_json(const ProfileResult& profile, HessianRule rule = HessianRule::kForwardNlm);
void write_profile_csv(std::ostream& out, const ProfileResult& profile);

/// JSON number, with non-finite values written as null (or "inf" for +inf).
Json number_or_null(double x);

}  // namespace pgw::app
