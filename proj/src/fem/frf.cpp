#include "quasim/fem/frf.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace quasim::fem {

std::vector<FrfPoint> frf(const ModalResult& modal, const FrfConfig& cfg) {
  const std::size_t n_modes = modal.omegas.size();
  const std::size_t n_dof = modal.mode_shapes.rows();
  if (cfg.input_dof >= n_dof || cfg.output_dof >= n_dof)
    throw InvalidArgument("FRF dof index out of range (model has " + std::to_string(n_dof) + " dofs)");
  if (cfg.damping_ratios.size() != 1 && cfg.damping_ratios.size() != n_modes)
    throw InvalidArgument("need one damping ratio or one per mode (" + std::to_string(n_modes) + ")");
  for (double z : cfg.damping_ratios)
    if (!(z >= 0.0 && z < 1.0)) throw InvalidArgument("damping ratio must lie in [0, 1)");
  for (double w : cfg.omega_grid)
    if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("FRF frequencies must be finite and non-negative");

  auto zeta = [&](std::size_t i) { return cfg.damping_ratios.size() == 1 ? cfg.damping_ratios[0] : cfg.damping_ratios[i]; };

  std::vector<FrfPoint> out;
  out.reserve(cfg.omega_grid.size());
  for (double w : cfg.omega_grid) {
    FrfPoint pt{w, {0.0, 0.0}, false};
    for (std::size_t i = 0; i < n_modes; ++i) {
      if (modal.rigid[i] && w == 0.0) continue;
      const double wi = modal.omegas[i];
      const std::complex<double> denom(modal.omega_squared[i] - w * w, 2.0 * zeta(i) * wi * w);
      if (denom == std::complex<double>(0.0, 0.0)) {
        pt.singular = true;
        break;
      }
      pt.value += modal.mode_shapes(cfg.output_dof, i) * modal.mode_shapes(cfg.input_dof, i) / denom;
    }
    if (pt.singular) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      pt.value = {nan, nan};
    }
    out.push_back(pt);
  }
  return out;
}

}  // namespace quasim::fem
