#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quasim/qsim/circuit.hpp"

namespace quasim::qsim {

/// Desk-scale register cap.
inline constexpr int kMaxQubits = 24;

/// Dense double-precision amplitude vector of length 2^n_qubits. Qubit 0 is
/// the least-significant bit of the basis index.
class Statevector {
 public:
  /// |basis_index>. Throws InvalidArgument for an out-of-range index and
  /// CapacityError above kMaxQubits.
  static Statevector basis(int n_qubits, std::uint64_t basis_index);

  /// Wraps given amplitudes; their length must be a power of two and their
  /// norm 1 within 1e-10.
  static Statevector from_amplitudes(std::vector<Complex> amplitudes);

  int n_qubits() const noexcept { return n_qubits_; }
  std::uint64_t dimension() const noexcept { return amps_.size(); }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](std::uint64_t i) const { return amps_[i]; }

  double norm() const;
  std::vector<double> probabilities() const;

  /// In-place gate application. `slot_values` resolves parameterized angles.
  void apply(const Gate& gate, std::span<const double> slot_values = {});

 private:
  Statevector(int n_qubits, std::vector<Complex> amps) : n_qubits_(n_qubits), amps_(std::move(amps)) {}

  int n_qubits_;
  std::vector<Complex> amps_;
};

inline Statevector init_state(int n_qubits, std::uint64_t basis_index) {
  return Statevector::basis(n_qubits, basis_index);
}

/// Pure gate application; the gate must not reference parameter slots.
Statevector apply_gate(Statevector state, const Gate& gate);

/// Runs the gates in order with slot values substituted.
Statevector run_circuit(const Circuit& circuit, const Bindings& bindings, Statevector initial);

/// Same with slot values already resolved to slot-id order.
Statevector run_circuit(const Circuit& circuit, std::span<const double> slot_values,
                        Statevector initial);

}  // namespace quasim::qsim
