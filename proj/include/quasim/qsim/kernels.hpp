#pragma once

// Statevector kernels. Every kernel exists twice with the same signature:
// `serial::` is the straightforward reference kept for testing, `parallel::`
// is the OpenMP version used by the simulator. Amplitudes use qubit 0 as the
// least-significant bit of the basis index.

#include <array>
#include <complex>
#include <cstdint>
#include <span>

#include "quasim/linalg/matrix.hpp"

namespace quasim::qsim::kernels {

using Complex = std::complex<double>;

/// 2x2 gate matrix, row-major: {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

/// Below this many amplitude pairs the parallel kernels run on one thread;
/// thread start-up costs more than the work for small registers.
inline constexpr std::uint64_t kParallelThreshold = std::uint64_t{1} << 13;

namespace serial {

/// Applies `m` to `target` on every basis index whose `control_mask` bits are set.
void apply_1q(std::span<Complex> amps, int target, std::uint64_t control_mask, const Mat2& m);

/// Applies the 2^k x 2^k matrix `u` to `targets` (targets[0] is the LSB of
/// the matrix index), conditioned on `control_mask`.
void apply_dense(std::span<Complex> amps, std::span<const int> targets,
                 std::uint64_t control_mask, const linalg::ComplexMatrix& u);

double norm_squared(std::span<const Complex> amps);

/// <psi| P |psi> for the Pauli string with X/Y bits in `flip_mask`, Z/Y bits
/// in `sign_mask` and `n_y` Y factors.
Complex pauli_expectation(std::span<const Complex> amps, std::uint64_t flip_mask,
                          std::uint64_t sign_mask, int n_y);

void probabilities(std::span<const Complex> amps, std::span<double> out);

}  // namespace serial

namespace parallel {

void apply_1q(std::span<Complex> amps, int target, std::uint64_t control_mask, const Mat2& m);
void apply_dense(std::span<Complex> amps, std::span<const int> targets,
                 std::uint64_t control_mask, const linalg::ComplexMatrix& u);
double norm_squared(std::span<const Complex> amps);
Complex pauli_expectation(std::span<const Complex> amps, std::uint64_t flip_mask,
                          std::uint64_t sign_mask, int n_y);
void probabilities(std::span<const Complex> amps, std::span<double> out);

}  // namespace parallel

}  // namespace quasim::qsim::kernels
