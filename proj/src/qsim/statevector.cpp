#include "quasim/qsim/statevector.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "quasim/qsim/kernels.hpp"

namespace quasim::qsim {
namespace {

using kernels::Mat2;

Mat2 rotation(GateKind kind, double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  switch (kind) {
    case GateKind::RX:
      return {Complex{c, 0}, Complex{0, -s}, Complex{0, -s}, Complex{c, 0}};
    case GateKind::RY:
    case GateKind::ControlledRY:
      return {Complex{c, 0}, Complex{-s, 0}, Complex{s, 0}, Complex{c, 0}};
    case GateKind::RZ:
      return {Complex{c, -s}, Complex{0, 0}, Complex{0, 0}, Complex{c, s}};
    default:
      throw InvalidArgument("not a rotation gate");
  }
}

std::uint64_t mask_of(std::span<const int> qubits) {
  std::uint64_t m = 0;
  for (int q : qubits) m |= std::uint64_t{1} << q;
  return m;
}

}  // namespace

Statevector Statevector::basis(int n_qubits, std::uint64_t basis_index) {
  if (n_qubits < 0) throw InvalidArgument("negative qubit count");
  if (n_qubits > kMaxQubits)
    throw CapacityError("qubit cap exceeded: " + std::to_string(n_qubits) + " > " +
                        std::to_string(kMaxQubits));
  const std::uint64_t dim = std::uint64_t{1} << n_qubits;
  if (basis_index >= dim)
    throw InvalidArgument("basis index " + std::to_string(basis_index) + " out of range for " +
                          std::to_string(n_qubits) + " qubits");
  std::vector<Complex> amps(dim);
  amps[basis_index] = 1.0;
  return Statevector(n_qubits, std::move(amps));
}

Statevector Statevector::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::uint64_t dim = amplitudes.size();
  if (dim == 0 || !std::has_single_bit(dim))
    throw InvalidArgument("amplitude count " + std::to_string(dim) + " is not a power of two");
  const int n = std::countr_zero(dim);
  if (n > kMaxQubits)
    throw CapacityError("qubit cap exceeded: " + std::to_string(n) + " > " + std::to_string(kMaxQubits));
  const double norm = std::sqrt(kernels::parallel::norm_squared(amplitudes));
  if (!(std::abs(norm - 1.0) <= 1e-10))
    throw InvalidArgument("amplitudes are not normalized (norm " + std::to_string(norm) + ")");
  return Statevector(n, std::move(amplitudes));
}

double Statevector::norm() const { return std::sqrt(kernels::parallel::norm_squared(amps_)); }

std::vector<double> Statevector::probabilities() const {
  std::vector<double> p(amps_.size());
  kernels::parallel::probabilities(amps_, p);
  return p;
}

void Statevector::apply(const Gate& gate, std::span<const double> slot_values) {
  if (gate.max_qubit() >= n_qubits_)
    throw InvalidArgument("gate " + std::string(gate_name(gate.kind())) + " touches qubit " +
                          std::to_string(gate.max_qubit()) + " of a " + std::to_string(n_qubits_) +
                          "-qubit state");
  const std::uint64_t controls = mask_of(gate.controls());
  const int target = gate.targets().empty() ? 0 : gate.targets()[0];
  static const double r = 1.0 / std::numbers::sqrt2;

  switch (gate.kind()) {
    case GateKind::Hadamard:
      kernels::parallel::apply_1q(amps_, target, controls, {Complex{r}, Complex{r}, Complex{r}, Complex{-r}});
      break;
    case GateKind::PauliX:
    case GateKind::CNOT:
      kernels::parallel::apply_1q(amps_, target, controls, {Complex{0}, Complex{1}, Complex{1}, Complex{0}});
      break;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::ControlledRY:
      kernels::parallel::apply_1q(amps_, target, controls,
                                  rotation(gate.kind(), gate.angle().evaluate(slot_values)));
      break;
    case GateKind::ControlledPhase: {
      const double phi = gate.angle().evaluate(slot_values);
      kernels::parallel::apply_1q(amps_, target, controls,
                                  {Complex{1}, Complex{0}, Complex{0}, std::polar(1.0, phi)});
      break;
    }
    case GateKind::DenseUnitary:
      kernels::parallel::apply_dense(amps_, gate.targets(), controls, gate.matrix());
      break;
  }
}

Statevector apply_gate(Statevector state, const Gate& gate) {
  if (gate.parameterized())
    throw InvalidArgument("apply_gate needs a gate with a concrete angle; use run_circuit for slots");
  state.apply(gate);
  return state;
}

Statevector run_circuit(const Circuit& circuit, std::span<const double> slot_values, Statevector initial) {
  if (initial.n_qubits() != circuit.n_qubits())
    throw InvalidArgument("circuit has " + std::to_string(circuit.n_qubits()) + " qubits, state has " +
                          std::to_string(initial.n_qubits()));
  if (slot_values.size() < circuit.slots().size())
    throw InvalidArgument("not every parameter slot has a value");
  for (const Gate& g : circuit.gates()) initial.apply(g, slot_values);
  return initial;
}

Statevector run_circuit(const Circuit& circuit, const Bindings& bindings, Statevector initial) {
  const std::vector<double> values = circuit.resolve(bindings);
  return run_circuit(circuit, std::span<const double>(values), std::move(initial));
}

}  // namespace quasim::qsim
