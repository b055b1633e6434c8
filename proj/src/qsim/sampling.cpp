#include "quasim/qsim/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "quasim/qsim/rng.hpp"

namespace quasim::qsim {

std::string to_bitstring(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int b = 0; b < width; ++b)
    if ((value >> b) & 1U) s[static_cast<std::size_t>(width - 1 - b)] = '1';
  return s;
}

std::uint64_t from_bitstring(const std::string& bits) {
  if (bits.empty() || bits.size() > 63) throw InvalidArgument("bad bitstring length");
  std::uint64_t v = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw InvalidArgument("bitstring '" + bits + "' has non-binary characters");
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return v;
}

std::vector<double> marginal_probabilities(const Statevector& state, std::span<const int> qubits) {
  for (int q : qubits)
    if (q < 0 || q >= state.n_qubits()) throw InvalidArgument("measured qubit out of range");
  const std::vector<double> p = state.probabilities();
  std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
  for (std::uint64_t i = 0; i < p.size(); ++i) {
    std::uint64_t k = 0;
    for (std::size_t b = 0; b < qubits.size(); ++b) k |= ((i >> qubits[b]) & 1U) << b;
    out[k] += p[i];
  }
  return out;
}

std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities, std::uint64_t shots,
                                         std::uint64_t seed) {
  if (shots < 1) throw InvalidArgument("shots must be at least 1");
  if (probabilities.empty()) throw InvalidArgument("empty distribution");
  std::vector<double> cumulative(probabilities.size());
  std::partial_sum(probabilities.begin(), probabilities.end(), cumulative.begin());
  const double total = cumulative.back();
  if (!(total > 0.0)) throw InvalidArgument("distribution has no mass");

  // Last outcome with nonzero mass: rounding in the cumulative sum must never
  // push a draw onto a zero-probability tail.
  std::size_t last = probabilities.size() - 1;
  while (last > 0 && probabilities[last] <= 0.0) --last;

  std::vector<std::uint64_t> counts(probabilities.size(), 0);
  Rng rng(seed);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform01() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t k = static_cast<std::size_t>(it - cumulative.begin());
    ++counts[std::min(k, last)];
  }
  return counts;
}

Histogram sample_qubits(const Statevector& state, std::span<const int> qubits, std::uint64_t shots,
                        std::uint64_t seed) {
  const std::vector<double> p = marginal_probabilities(state, qubits);
  const std::vector<std::uint64_t> counts = sample_counts(p, shots, seed);
  Histogram h;
  const int width = static_cast<int>(qubits.size());
  for (std::uint64_t k = 0; k < counts.size(); ++k)
    if (counts[k] > 0) h.emplace(to_bitstring(k, width), counts[k]);
  return h;
}

Histogram sample(const Statevector& state, std::uint64_t shots, std::uint64_t seed) {
  std::vector<int> all(static_cast<std::size_t>(state.n_qubits()));
  std::iota(all.begin(), all.end(), 0);
  return sample_qubits(state, all, shots, seed);
}

}  // namespace quasim::qsim
