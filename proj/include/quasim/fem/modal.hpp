#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "quasim/fem/eigen.hpp"

namespace quasim::fem {

/// Mass and stiffness of an undamped structure, M x'' + K x = 0. Units are
/// whatever consistent SI the caller used; nothing is converted.
struct FemMatrices {
  Matrix mass;
  Matrix stiffness;

  std::size_t n_dof() const noexcept { return mass.rows(); }

  /// Checks shape and symmetry (1e-12 relative to the largest entry). Positive
  /// definiteness of M is left to the Cholesky factorisation that needs it.
  void validate() const;
};

/// Generalized eigensolution of (K - w^2 M) phi = 0.
struct ModalResult {
  std::vector<double> omegas;         // rad/s, ascending
  std::vector<double> omega_squared;  // eigenvalues
  Matrix mode_shapes;                 // column i is phi_i, Phi^T M Phi = I
  std::vector<bool> rigid;            // omega^2 numerically zero
};

/// Real symmetric operator handed to phase estimation.
struct HermitianOperator {
  Matrix matrix;

  std::size_t dim() const noexcept { return matrix.rows(); }
  void validate() const;
};

/// Axial bar with `n_elements` linear elements and consistent mass. DOF i is
/// node i (node 0 removed when `fixed_left`).
FemMatrices assemble_bar(std::size_t n_elements, double youngs_modulus, double area, double density,
                         double length, bool fixed_left);

/// nx-by-ny grid of lumped masses joined by springs along grid edges.
/// Node (x, y) is DOF y*nx + x before clamping; clamping removes the boundary
/// ring and keeps the interior in the same order.
FemMatrices assemble_membrane(std::size_t nx, std::size_t ny, double spacing, double mass_per_node,
                              double stiffness_per_edge, bool clamped_boundary);

/// H = L^-1 K L^-T with M = L L^T; shares its spectrum with the pencil (K, M).
HermitianOperator reduce_generalized(const FemMatrices& fem);

/// Full spectrum: Cholesky reduction, Jacobi, back-transform by L^-T,
/// M-normalisation. `tol` is the Jacobi off-diagonal tolerance.
ModalResult modal_analysis(const FemMatrices& fem, double tol = 1e-12);

/// max_i (H_ii + sum_{j != i} |H_ij|), an upper bound on the largest eigenvalue.
double gershgorin_bound(const HermitianOperator& h);

}  // namespace quasim::fem
