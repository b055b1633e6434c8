#pragma once

#include <string>
#include <vector>

#include "quasim/qsim/statevector.hpp"

namespace quasim::qsim {

/// Real linear combination of Pauli strings. In `paulis`, character q is the
/// factor acting on qubit q (so "ZI" is Z on qubit 0), letters from {I,X,Y,Z}.
class Observable {
 public:
  struct Term {
    double coefficient;
    std::string paulis;
  };

  explicit Observable(int n_qubits) : n_qubits_(n_qubits) {}

  /// Single Z on `qubit`.
  static Observable z(int qubit, int n_qubits);

  Observable& add_term(double coefficient, std::string paulis);

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

 private:
  int n_qubits_;
  std::vector<Term> terms_;
};

/// <psi|O|psi>. The imaginary residue (zero up to rounding) is discarded.
double expectation(const Statevector& state, const Observable& obs);

}  // namespace quasim::qsim
