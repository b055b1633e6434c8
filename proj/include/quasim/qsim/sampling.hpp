#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "quasim/qsim/statevector.hpp"

namespace quasim::qsim {

/// Bitstring -> count. Bitstrings print the most-significant qubit first, so
/// qubit 0 is the rightmost character.
using Histogram = std::map<std::string, std::uint64_t>;

std::string to_bitstring(std::uint64_t value, int width);
std::uint64_t from_bitstring(const std::string& bits);

/// Exact outcome distribution of the listed qubits; qubits[0] is the
/// least-significant bit of the outcome.
std::vector<double> marginal_probabilities(const Statevector& state, std::span<const int> qubits);

/// Draws `shots` outcomes from `probabilities` (need not be normalized) with a
/// seeded Rng: one uniform01 draw per shot, inverted through the cumulative sum.
std::vector<std::uint64_t> sample_counts(std::span<const double> probabilities, std::uint64_t shots,
                                         std::uint64_t seed);

/// Measures every qubit `shots` times.
Histogram sample(const Statevector& state, std::uint64_t shots, std::uint64_t seed);

/// Measures only `qubits` (qubits[0] is the rightmost bitstring character).
Histogram sample_qubits(const Statevector& state, std::span<const int> qubits, std::uint64_t shots,
                        std::uint64_t seed);

}  // namespace quasim::qsim
