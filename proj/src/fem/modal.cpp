#include "quasim/fem/modal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace quasim::fem {
namespace {

void check_symmetric(const Matrix& a, const char* name) {
  if (!a.square()) throw InvalidArgument(std::string(name) + " matrix is not square");
  for (double v : a.data())
    if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " matrix has non-finite entries");
  if (linalg::asymmetry(a) > 1e-12 * std::max(1.0, linalg::max_abs(a)))
    throw InvalidArgument(std::string(name) + " matrix is not symmetric");
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
}

// Drops the DOFs where `keep` is false from a square matrix.
Matrix restrict(const Matrix& a, const std::vector<bool>& keep) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) idx.push_back(i);
  Matrix out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = a(idx[i], idx[j]);
  return out;
}

}  // namespace

void FemMatrices::validate() const {
  check_symmetric(mass, "mass");
  check_symmetric(stiffness, "stiffness");
  if (mass.rows() != stiffness.rows()) throw InvalidArgument("mass and stiffness sizes differ");
  if (mass.rows() == 0) throw InvalidArgument("model has no degrees of freedom");
}

void HermitianOperator::validate() const { check_symmetric(matrix, "operator"); }

FemMatrices assemble_bar(std::size_t n_elements, double youngs_modulus, double area, double density,
                         double length, bool fixed_left) {
  if (n_elements < 1) throw InvalidArgument("bar needs at least one element");
  require_positive(youngs_modulus, "Young's modulus");
  require_positive(area, "area");
  require_positive(density, "density");
  require_positive(length, "length");

  const std::size_t nodes = n_elements + 1;
  const double h = length / static_cast<double>(n_elements);
  const double ke = youngs_modulus * area / h;
  const double me = density * area * h / 6.0;
  Matrix k(nodes, nodes), m(nodes, nodes);
  for (std::size_t e = 0; e < n_elements; ++e) {
    const std::size_t a = e, b = e + 1;
    k(a, a) += ke;
    k(b, b) += ke;
    k(a, b) -= ke;
    k(b, a) -= ke;
    m(a, a) += 2.0 * me;
    m(b, b) += 2.0 * me;
    m(a, b) += me;
    m(b, a) += me;
  }
  if (!fixed_left) return {std::move(m), std::move(k)};
  std::vector<bool> keep(nodes, true);
  keep[0] = false;
  return {restrict(m, keep), restrict(k, keep)};
}

FemMatrices assemble_membrane(std::size_t nx, std::size_t ny, double spacing, double mass_per_node,
                              double stiffness_per_edge, bool clamped_boundary) {
  if (nx < 2 || ny < 2) throw InvalidArgument("membrane grid must be at least 2x2");
  if (clamped_boundary && (nx < 3 || ny < 3))
    throw InvalidArgument("clamped membrane grid must be at least 3x3 to keep an interior node");
  require_positive(spacing, "spacing");
  require_positive(mass_per_node, "mass per node");
  require_positive(stiffness_per_edge, "stiffness per edge");

  const std::size_t n = nx * ny;
  Matrix k(n, n), m(n, n);
  auto link = [&](std::size_t a, std::size_t b) {
    k(a, a) += stiffness_per_edge;
    k(b, b) += stiffness_per_edge;
    k(a, b) -= stiffness_per_edge;
    k(b, a) -= stiffness_per_edge;
  };
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t v = y * nx + x;
      m(v, v) = mass_per_node;
      if (x + 1 < nx) link(v, v + 1);
      if (y + 1 < ny) link(v, v + nx);
    }
  }
  if (!clamped_boundary) return {std::move(m), std::move(k)};
  std::vector<bool> keep(n, false);
  for (std::size_t y = 1; y + 1 < ny; ++y)
    for (std::size_t x = 1; x + 1 < nx; ++x) keep[y * nx + x] = true;
  return {restrict(m, keep), restrict(k, keep)};
}

HermitianOperator reduce_generalized(const FemMatrices& fem) {
  fem.validate();
  const Matrix l = cholesky(fem.mass);
  // H = L^-1 K L^-T: solve L Y = K, then L Z = Y^T (Y^T = K L^-T).
  const Matrix y = forward_substitute(l, fem.stiffness);
  Matrix h = forward_substitute(l, linalg::transpose(y));
  const std::size_t n = h.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) h(i, j) = h(j, i) = 0.5 * (h(i, j) + h(j, i));
  return {std::move(h)};
}

ModalResult modal_analysis(const FemMatrices& fem, double tol) {
  fem.validate();
  const Matrix l = cholesky(fem.mass);
  const HermitianOperator h = reduce_generalized(fem);
  const SymmetricEigen eig = jacobi_eigen(h.matrix, {.max_sweeps = 100, .tolerance = tol});
  Matrix phi = backward_substitute_transposed(l, eig.vectors);

  const std::size_t n = fem.n_dof();
  double lambda_max = 0.0;
  for (double v : eig.values) lambda_max = std::max(lambda_max, std::abs(v));

  ModalResult out;
  out.omega_squared = eig.values;
  out.omegas.resize(n);
  out.rigid.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.omegas[i] = std::sqrt(std::max(eig.values[i], 0.0));
    out.rigid[i] = std::abs(eig.values[i]) <= 1e-10 * std::max(lambda_max, 1e-300);
    // Re-normalise in the M inner product; removes the rounding left by the
    // triangular solve.
    std::vector<double> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = phi(r, i);
    const std::vector<double> mcol = linalg::multiply<double>(fem.mass, col);
    double mnorm = 0.0;
    for (std::size_t r = 0; r < n; ++r) mnorm += col[r] * mcol[r];
    const double inv = 1.0 / std::sqrt(mnorm);
    for (std::size_t r = 0; r < n; ++r) phi(r, i) *= inv;
  }
  out.mode_shapes = std::move(phi);
  return out;
}

double gershgorin_bound(const HermitianOperator& h) {
  double bound = -INFINITY;
  for (std::size_t i = 0; i < h.dim(); ++i) {
    double r = h.matrix(i, i);
    for (std::size_t j = 0; j < h.dim(); ++j)
      if (j != i) r += std::abs(h.matrix(i, j));
    bound = std::max(bound, r);
  }
  return bound;
}

}  // namespace quasim::fem
