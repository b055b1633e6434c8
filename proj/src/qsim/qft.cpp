#include "quasim/qsim/qft.hpp"

#include <cmath>
#include <numbers>

namespace quasim::qsim {

Circuit qft_circuit(int n_qubits) {
  if (n_qubits < 1) throw InvalidArgument("QFT needs at least one qubit");
  Circuit c(n_qubits);
  // Qubit j ends up holding output bit n-1-j; the swaps undo that.
  for (int j = n_qubits - 1; j >= 0; --j) {
    c.h(j);
    for (int k = j - 1; k >= 0; --k) c.cphase(k, j, std::numbers::pi / std::ldexp(1.0, j - k));
  }
  for (int q = 0; q < n_qubits / 2; ++q) c.swap(q, n_qubits - 1 - q);
  return c;
}

Circuit inverse_qft_circuit(int n_qubits) { return qft_circuit(n_qubits).adjoint(); }

}  // namespace quasim::qsim
