#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "aniso/quadrature.hpp"

namespace aniso {

enum class MethodTag { closed_form, quadrature, interpolation_model };

std::string_view to_string(MethodTag tag);

struct BranchContribution {
  std::string label;
  double gamma = 0.0;
};

/// Emission rate normalized to the vacuum rate, Gamma = gamma / gamma_vac.
/// The two branch contributions add up to gamma_normalized.
struct RateResult {
  double gamma_normalized = 0.0;
  std::array<BranchContribution, 2> branches;
  std::optional<QuadratureResult> quadrature;  // set for quadrature-backed results
  MethodTag method = MethodTag::closed_form;
};

}  // namespace aniso
