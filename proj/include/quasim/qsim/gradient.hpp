#pragma once

#include <map>
#include <string>
#include <vector>

#include "quasim/qsim/observable.hpp"

namespace quasim::qsim {

/// Rewrites every controlled-RY as RY(theta/2), CNOT, RY(-theta/2), CNOT on
/// the target so each parameterized gate is a single-qubit rotation. Other
/// gates pass through unchanged.
Circuit lower_for_shift_rule(const Circuit& circuit);

struct ValueAndGradient {
  double value = 0.0;
  std::vector<double> gradient;  // slot-id order
};

/// Expectation value and its gradient w.r.t. every slot via the two-term
/// shift rule dE/da = (E(a + pi/2) - E(a - pi/2)) / 2, applied per
/// rotation occurrence and chained through the angle coefficients. Throws
/// InvalidArgument when a parameterized gate has no shift rule (controlled
/// phase).
ValueAndGradient expectation_and_gradient(const Circuit& circuit, std::span<const double> slot_values,
                                          const Observable& obs, const Statevector& initial);

/// Slot name -> dE/dslot.
std::map<std::string, double> parameter_shift_grad(const Circuit& circuit, const Bindings& bindings,
                                                   const Observable& obs, const Statevector& initial);

}  // namespace quasim::qsim
