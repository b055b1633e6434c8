#include "quasim/qsim/observable.hpp"

#include "quasim/qsim/kernels.hpp"

namespace quasim::qsim {

Observable Observable::z(int qubit, int n_qubits) {
  if (qubit < 0 || qubit >= n_qubits) throw InvalidArgument("observable qubit out of range");
  std::string s(static_cast<std::size_t>(n_qubits), 'I');
  s[static_cast<std::size_t>(qubit)] = 'Z';
  Observable o(n_qubits);
  o.add_term(1.0, std::move(s));
  return o;
}

Observable& Observable::add_term(double coefficient, std::string paulis) {
  if (paulis.size() != static_cast<std::size_t>(n_qubits_))
    throw InvalidArgument("Pauli string '" + paulis + "' does not have " + std::to_string(n_qubits_) +
                          " letters");
  for (char c : paulis)
    if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z')
      throw InvalidArgument("invalid Pauli letter '" + std::string(1, c) + "'");
  terms_.push_back({coefficient, std::move(paulis)});
  return *this;
}

double expectation(const Statevector& state, const Observable& obs) {
  if (state.n_qubits() != obs.n_qubits())
    throw InvalidArgument("observable acts on " + std::to_string(obs.n_qubits()) + " qubits, state has " +
                          std::to_string(state.n_qubits()));
  double total = 0.0;
  for (const auto& term : obs.terms()) {
    std::uint64_t flip = 0, sign = 0;
    int n_y = 0;
    for (std::size_t q = 0; q < term.paulis.size(); ++q) {
      const std::uint64_t bit = std::uint64_t{1} << q;
      switch (term.paulis[q]) {
        case 'X': flip |= bit; break;
        case 'Y': flip |= bit; sign |= bit; ++n_y; break;
        case 'Z': sign |= bit; break;
        default: break;
      }
    }
    total += term.coefficient *
             kernels::parallel::pauli_expectation(state.amplitudes(), flip, sign, n_y).real();
  }
  return total;
}

}  // namespace quasim::qsim
