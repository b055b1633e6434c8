#pragma once

#include "quasim/qsim/circuit.hpp"

namespace quasim::qsim {

/// QFT|x> = 2^{-n/2} sum_k exp(2 pi i x k / 2^n) |k>, with the final qubit
/// reversal included.
Circuit qft_circuit(int n_qubits);

/// Adjoint of qft_circuit. For n = 1 this is a single Hadamard.
Circuit inverse_qft_circuit(int n_qubits);

}  // namespace quasim::qsim
