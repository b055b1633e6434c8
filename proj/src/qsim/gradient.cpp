#include "quasim/qsim/gradient.hpp"

#include <numbers>

namespace quasim::qsim {

Circuit lower_for_shift_rule(const Circuit& circuit) {
  Circuit out(circuit.n_qubits());
  for (const std::string& name : circuit.slots()) out.declare_slot(name);
  for (const Gate& g : circuit.gates()) {
    if (g.kind() != GateKind::ControlledRY) {
      out.add(g);
      continue;
    }
    const int c = g.controls()[0];
    const int t = g.targets()[0];
    out.ry(t, g.angle().scaled(0.5));
    out.cnot(c, t);
    out.ry(t, g.angle().scaled(-0.5));
    out.cnot(c, t);
  }
  return out;
}

ValueAndGradient expectation_and_gradient(const Circuit& circuit, std::span<const double> slot_values,
                                          const Observable& obs, const Statevector& initial) {
  if (initial.n_qubits() != circuit.n_qubits())
    throw InvalidArgument("initial state does not match circuit width");
  if (slot_values.size() < circuit.slots().size())
    throw InvalidArgument("not every parameter slot has a value");

  const Circuit lowered = lower_for_shift_rule(circuit);
  const auto gates = lowered.gates();
  for (const Gate& g : gates)
    if (g.parameterized() && !g.is_rotation())
      throw InvalidArgument("gate " + std::string(gate_name(g.kind())) +
                            " is parameterized but has no parameter-shift rule");

  ValueAndGradient out;
  out.gradient.assign(circuit.slots().size(), 0.0);
  constexpr double kShift = std::numbers::pi / 2.0;

  // `prefix` holds the state before gate k; the shifted runs reuse it.
  Statevector prefix = initial;
  for (std::size_t k = 0; k < gates.size(); ++k) {
    const Gate& g = gates[k];
    if (g.parameterized()) {
      double shifted[2];
      for (int side = 0; side < 2; ++side) {
        Statevector s = prefix;
        s.apply(g.with_angle(g.angle().shifted(side == 0 ? kShift : -kShift)), slot_values);
        for (std::size_t j = k + 1; j < gates.size(); ++j) s.apply(gates[j], slot_values);
        shifted[side] = expectation(s, obs);
      }
      const double d_angle = 0.5 * (shifted[0] - shifted[1]);
      for (const SlotTerm& t : g.angle().terms()) out.gradient[t.slot] += t.coefficient * d_angle;
    }
    prefix.apply(g, slot_values);
  }
  out.value = expectation(prefix, obs);
  return out;
}

std::map<std::string, double> parameter_shift_grad(const Circuit& circuit, const Bindings& bindings,
                                                   const Observable& obs, const Statevector& initial) {
  const std::vector<double> values = circuit.resolve(bindings);
  const ValueAndGradient vg = expectation_and_gradient(circuit, values, obs, initial);
  std::map<std::string, double> grad;
  for (SlotId i = 0; i < circuit.slots().size(); ++i) grad[circuit.slots()[i]] = vg.gradient[i];
  return grad;
}

}  // namespace quasim::qsim
