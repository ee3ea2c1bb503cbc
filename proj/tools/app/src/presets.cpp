#include "pgw_app/presets.hpp"

#include <pgw/errors.hpp>

namespace pgw::app {

namespace {

ModelSpec constrained(bool phi, bool gamma, bool tau) {
  ModelSpec s;
  s.common_phi = phi;
  s.common_gamma = gamma;
  s.common_tau = tau;
  return s;
}

ModelSpec model7_with(std::vector<CovariateTerm> terms) {
  ModelSpec s = constrained(false, true, true);
  s.covariate_terms = std::move(terms);
  return s;
}

}  // namespace

std::vector<std::string> treatment_presets() {
  return {"model1", "model2", "model3", "model4", "model5", "model6", "model7", "model8"};
}

std::vector<std::string> diabetes_presets() {
  return {"model7a", "model7b", "model7c", "model7d"};
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names = treatment_presets();
  for (auto& n : diabetes_presets()) names.push_back(n);
  names.push_back("model7b-copula");
  return names;
}

ModelSpec preset_spec(std::string_view name) {
  if (name == "model1") return constrained(false, false, false);
  if (name == "model2") return constrained(true, false, false);
  if (name == "model3") return constrained(false, true, false);
  if (name == "model4") return constrained(false, false, true);
  if (name == "model5") return constrained(true, true, false);
  if (name == "model6") return constrained(true, false, true);
  if (name == "model7") return constrained(false, true, true);
  if (name == "model8") return constrained(true, true, true);
  if (name == "model7a")
    return model7_with({{Target::kGamma, "D"}, {Target::kPhi1, "D"}, {Target::kPhi2, "D"}});
  if (name == "model7b") return model7_with({{Target::kPhi1, "D"}, {Target::kPhi2, "D"}});
  if (name == "model7c") return model7_with({{Target::kGamma, "D"}, {Target::kPhi, "D"}});
  if (name == "model7d") return model7_with({{Target::kPhi, "D"}});
  if (name == "model7b-copula")
    return model7_with({{Target::kLambda, "D"},
                        {Target::kOmega, "D"},
                        {Target::kPhi1, "D"},
                        {Target::kPhi2, "D"}});
  throw InputError("unknown preset '" + std::string(name) + "'");
}

}  // namespace pgw::app
