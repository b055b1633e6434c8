#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "quasim/fem/modal.hpp"

namespace quasim::fem {

struct FrfConfig {
  /// One ratio per mode, or a single ratio applied to every mode. 0 <= zeta < 1.
  std::vector<double> damping_ratios;
  std::vector<double> omega_grid;  // rad/s
  std::size_t input_dof = 0;
  std::size_t output_dof = 0;
};

struct FrfPoint {
  double omega;
  std::complex<double> value;
  /// Undamped resonance hit exactly; `value` is NaN.
  bool singular = false;
};

/// Receptance H_pq(w) = sum_i phi_p,i phi_q,i / (w_i^2 - w^2 + 2 i zeta_i w_i w).
/// Rigid-body modes are skipped at w = 0, where their term has no finite value.
std::vector<FrfPoint> frf(const ModalResult& modal, const FrfConfig& cfg);

}  // namespace quasim::fem
