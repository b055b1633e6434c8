#include "quasim/qsim/kernels.hpp"

#include <algorithm>
#include <bit>
#include <vector>

#include <omp.h>

namespace quasim::qsim::kernels {
namespace {

inline std::uint64_t insert_zero_bit(std::uint64_t i, int bit) {
  const std::uint64_t low = i & ((std::uint64_t{1} << bit) - 1);
  return ((i >> bit) << (bit + 1)) | low;
}

// Spreads `i` over the positions that are not in `sorted_targets`.
inline std::uint64_t insert_zero_bits(std::uint64_t i, std::span<const int> sorted_targets) {
  for (int t : sorted_targets) i = insert_zero_bit(i, t);
  return i;
}

inline Complex sign_phase(int n_y) {
  switch (n_y & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

struct DenseLayout {
  std::vector<int> sorted;
  std::vector<std::uint64_t> offsets;  // local index -> global bit pattern
};

DenseLayout dense_layout(std::span<const int> targets) {
  DenseLayout layout;
  layout.sorted.assign(targets.begin(), targets.end());
  std::sort(layout.sorted.begin(), layout.sorted.end());
  const std::size_t dim = std::size_t{1} << targets.size();
  layout.offsets.resize(dim);
  for (std::size_t l = 0; l < dim; ++l) {
    std::uint64_t off = 0;
    for (std::size_t b = 0; b < targets.size(); ++b)
      if ((l >> b) & 1U) off |= std::uint64_t{1} << targets[b];
    layout.offsets[l] = off;
  }
  return layout;
}

inline void dense_block(std::span<Complex> amps, std::uint64_t base, const DenseLayout& layout,
                        const linalg::ComplexMatrix& u, std::vector<Complex>& in) {
  const std::size_t dim = layout.offsets.size();
  for (std::size_t l = 0; l < dim; ++l) in[l] = amps[base | layout.offsets[l]];
  for (std::size_t r = 0; r < dim; ++r) {
    Complex acc{};
    for (std::size_t c = 0; c < dim; ++c) acc += u(r, c) * in[c];
    amps[base | layout.offsets[r]] = acc;
  }
}

void check_dense(std::span<const int> targets, const linalg::ComplexMatrix& u) {
  const std::size_t dim = std::size_t{1} << targets.size();
  if (u.rows() != dim || u.cols() != dim)
    throw InvalidArgument("dense gate matrix does not match its target count");
}

// Small states and calls from inside a parallel region use the serial kernel.
inline bool run_serial(std::size_t work) { return work < kParallelThreshold || omp_in_parallel(); }

}  // namespace

namespace serial {

void apply_1q(std::span<Complex> amps, int target, std::uint64_t control_mask, const Mat2& m) {
  const std::uint64_t half = amps.size() / 2;
  const std::uint64_t bit = std::uint64_t{1} << target;
  for (std::uint64_t i = 0; i < half; ++i) {
    const std::uint64_t i0 = insert_zero_bit(i, target);
    if ((i0 & control_mask) != control_mask) continue;
    const std::uint64_t i1 = i0 | bit;
    const Complex a0 = amps[i0];
    const Complex a1 = amps[i1];
    amps[i0] = m[0] * a0 + m[1] * a1;
    amps[i1] = m[2] * a0 + m[3] * a1;
  }
}

void apply_dense(std::span<Complex> amps, std::span<const int> targets,
                 std::uint64_t control_mask, const linalg::ComplexMatrix& u) {
  check_dense(targets, u);
  const DenseLayout layout = dense_layout(targets);
  const std::uint64_t blocks = amps.size() >> targets.size();
  std::vector<Complex> scratch(layout.offsets.size());
  for (std::uint64_t i = 0; i < blocks; ++i) {
    const std::uint64_t base = insert_zero_bits(i, layout.sorted);
    if ((base & control_mask) != control_mask) continue;
    dense_block(amps, base, layout, u, scratch);
  }
}

double norm_squared(std::span<const Complex> amps) {
  double s = 0.0;
  for (const Complex& a : amps) s += std::norm(a);
  return s;
}

Complex pauli_expectation(std::span<const Complex> amps, std::uint64_t flip_mask,
                          std::uint64_t sign_mask, int n_y) {
  Complex acc{};
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    const double sign = (std::popcount(i & sign_mask) & 1) ? -1.0 : 1.0;
    acc += std::conj(amps[i ^ flip_mask]) * amps[i] * sign;
  }
  return acc * sign_phase(n_y);
}

void probabilities(std::span<const Complex> amps, std::span<double> out) {
  for (std::size_t i = 0; i < amps.size(); ++i) out[i] = std::norm(amps[i]);
}

}  // namespace serial

namespace parallel {

void apply_1q(std::span<Complex> amps, int target, std::uint64_t control_mask, const Mat2& m) {
  if (run_serial(amps.size() / 2)) return serial::apply_1q(amps, target, control_mask, m);
  const std::int64_t half = static_cast<std::int64_t>(amps.size() / 2);
  const std::uint64_t bit = std::uint64_t{1} << target;
  const Complex m0 = m[0], m1 = m[1], m2 = m[2], m3 = m[3];
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < half; ++i) {
    const std::uint64_t i0 = insert_zero_bit(static_cast<std::uint64_t>(i), target);
    if ((i0 & control_mask) != control_mask) continue;
    const std::uint64_t i1 = i0 | bit;
    const Complex a0 = amps[i0];
    const Complex a1 = amps[i1];
    amps[i0] = m0 * a0 + m1 * a1;
    amps[i1] = m2 * a0 + m3 * a1;
  }
}

void apply_dense(std::span<Complex> amps, std::span<const int> targets,
                 std::uint64_t control_mask, const linalg::ComplexMatrix& u) {
  if (run_serial(amps.size())) return serial::apply_dense(amps, targets, control_mask, u);
  check_dense(targets, u);
  const DenseLayout layout = dense_layout(targets);
  const std::int64_t blocks = static_cast<std::int64_t>(amps.size() >> targets.size());
#pragma omp parallel
  {
    std::vector<Complex> scratch(layout.offsets.size());
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < blocks; ++i) {
      const std::uint64_t base = insert_zero_bits(static_cast<std::uint64_t>(i), layout.sorted);
      if ((base & control_mask) != control_mask) continue;
      dense_block(amps, base, layout, u, scratch);
    }
  }
}

double norm_squared(std::span<const Complex> amps) {
  if (run_serial(amps.size())) return serial::norm_squared(amps);
  const std::int64_t n = static_cast<std::int64_t>(amps.size());
  double s = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : s)
  for (std::int64_t i = 0; i < n; ++i) s += std::norm(amps[i]);
  return s;
}

Complex pauli_expectation(std::span<const Complex> amps, std::uint64_t flip_mask,
                          std::uint64_t sign_mask, int n_y) {
  if (run_serial(amps.size())) return serial::pauli_expectation(amps, flip_mask, sign_mask, n_y);
  const std::int64_t n = static_cast<std::int64_t>(amps.size());
  double re = 0.0, im = 0.0;
#pragma omp parallel for schedule(static) reduction(+ : re, im)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::uint64_t u = static_cast<std::uint64_t>(i);
    const double sign = (std::popcount(u & sign_mask) & 1) ? -1.0 : 1.0;
    const Complex term = std::conj(amps[u ^ flip_mask]) * amps[u] * sign;
    re += term.real();
    im += term.imag();
  }
  return Complex{re, im} * sign_phase(n_y);
}

void probabilities(std::span<const Complex> amps, std::span<double> out) {
  if (run_serial(amps.size())) return serial::probabilities(amps, out);
  const std::int64_t n = static_cast<std::int64_t>(amps.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) out[i] = std::norm(amps[i]);
}

}  // namespace parallel
}  // namespace quasim::qsim::kernels
