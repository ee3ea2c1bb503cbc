#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <pgw/model_spec.hpp>

namespace pgw::app {

/// Named model structures for the retinopathy analysis.
///
/// model1 .. model8: APGW models without covariates; the constraints are
///   1 none, 2 phi, 3 gamma, 4 tau, 5 phi+gamma, 6 phi+tau, 7 gamma+tau, 8 all three.
/// model7a .. model7d: model7 with the diabetes indicator D acting on
///   a gamma and both phi separately, b both phi separately,
///   c gamma and one shared phi coefficient, d one shared phi coefficient.
/// model7b-copula: model7b plus D terms on lambda and omega.
ModelSpec preset_spec(std::string_view name);
std::vector<std::string> preset_names();

/// model1 .. model8 in order.
std::vector<std::string> treatment_presets();
/// model7a .. model7d in order.
std::vector<std::string> diabetes_presets();

}  // namespace pgw::app
