#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "quasim/error.hpp"
#include "quasim/fem/eigen.hpp"
#include "quasim/fem/frf.hpp"
#include "quasim/fem/modal.hpp"
#include "support.hpp"

using namespace quasim;
using namespace quasim::fem;
using namespace quasim::testing;

namespace {

double max_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

FemMatrices random_pencil(std::size_t n, std::mt19937_64& rng) {
  return {random_spd(n, rng, 1.0), random_spd(n, rng, 0.1)};
}

}  // namespace

// ---------- Jacobi ----------

TEST(Jacobi, MatchesEigenOnRandomSymmetric) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n01;
  for (std::size_t n : {1u, 2u, 5u, 12u, 30u}) {
    Eigen::MatrixXd a(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = n01(rng);
    const SymmetricEigen eig = jacobi_eigen(from_eigen(a));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(eig.values[i], es.eigenvalues()(i), 1e-11) << "n=" << n;
    const Eigen::MatrixXd v = to_eigen(eig.vectors);
    EXPECT_LT(max_diff(v.transpose() * v, Eigen::MatrixXd::Identity(n, n)), 1e-12);
    EXPECT_LT(max_diff(a * v, v * Eigen::VectorXd::Map(eig.values.data(), n).asDiagonal()), 1e-11);
  }
}

TEST(Jacobi, SignConventionLargestComponentPositive) {
  const SymmetricEigen eig = jacobi_eigen(linalg::Matrix{{2, -1}, {-1, 2}});
  for (std::size_t c = 0; c < 2; ++c) {
    double best = 0;
    for (std::size_t r = 0; r < 2; ++r)
      if (std::abs(eig.vectors(r, c)) > std::abs(best)) best = eig.vectors(r, c);
    EXPECT_GT(best, 0.0);
  }
}

TEST(Jacobi, DiagonalInputNeedsNoSweeps) {
  const SymmetricEigen eig = jacobi_eigen(linalg::Matrix{{3, 0}, {0, 1}});
  EXPECT_EQ(eig.sweeps, 0);
  EXPECT_EQ(eig.values, (std::vector<double>{1, 3}));
}

TEST(Jacobi, RejectsNonSquare) { EXPECT_THROW(jacobi_eigen(linalg::Matrix(2, 3)), InvalidArgument); }

TEST(Cholesky, FactorsAndRejectsIndefinite) {
  std::mt19937_64 rng(4);
  const linalg::Matrix a = random_spd(6, rng);
  const Eigen::MatrixXd l = to_eigen(cholesky(a));
  EXPECT_LT(max_diff(l * l.transpose(), to_eigen(a)), 1e-12);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) EXPECT_EQ(l(i, j), 0.0);
  EXPECT_THROW(cholesky(linalg::Matrix{{1, 2}, {2, 1}}), NumericalError);
}

// ---------- modal analysis ----------

TEST(Modal, TwoDofFrequencies) {
  const ModalResult r = modal_analysis(two_dof());
  ASSERT_EQ(r.omegas.size(), 2u);
  EXPECT_NEAR(r.omegas[0], 1.0, 1e-12);
  EXPECT_NEAR(r.omegas[1], std::sqrt(3.0), 1e-12);
  EXPECT_FALSE(r.rigid[0]);
}

TEST(Modal, MatchesEigenGeneralizedSolver) {
  std::mt19937_64 rng(9);
  for (std::size_t n : {2u, 4u, 10u, 25u}) {
    const FemMatrices fem = random_pencil(n, rng);
    const ModalResult r = modal_analysis(fem);
    const auto ref = eigen_generalized_values(fem);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r.omega_squared[i], ref[i], 1e-9 * std::max(1.0, ref[i]));
  }
}

TEST(Modal, ResidualAndMassOrthonormality) {
  std::mt19937_64 rng(10);
  const FemMatrices fem = random_pencil(12, rng);
  const ModalResult r = modal_analysis(fem);
  const Eigen::MatrixXd k = to_eigen(fem.stiffness), m = to_eigen(fem.mass), phi = to_eigen(r.mode_shapes);
  EXPECT_LT(max_diff(phi.transpose() * m * phi, Eigen::MatrixXd::Identity(12, 12)), 1e-10);
  for (std::size_t i = 0; i < 12; ++i) {
    const Eigen::VectorXd res = k * phi.col(i) - r.omega_squared[i] * m * phi.col(i);
    EXPECT_LT(res.norm(), 1e-9 * std::max(1.0, r.omega_squared[i]));
    EXPECT_NEAR(r.omegas[i], std::sqrt(r.omega_squared[i]), 1e-12);
  }
  EXPECT_TRUE(std::is_sorted(r.omegas.begin(), r.omegas.end()));
}

TEST(Modal, ReducedOperatorSharesSpectrum) {
  std::mt19937_64 rng(12);
  const FemMatrices fem = random_pencil(7, rng);
  const HermitianOperator h = reduce_generalized(fem);
  EXPECT_LT(linalg::asymmetry(h.matrix), 1e-14);
  const auto ref = eigen_generalized_values(fem);
  const SymmetricEigen eig = jacobi_eigen(h.matrix);
  for (std::size_t i = 0; i < 7; ++i) EXPECT_NEAR(eig.values[i], ref[i], 1e-9 * std::max(1.0, ref[i]));
  EXPECT_GE(gershgorin_bound(h), eig.values.back());
}

TEST(Modal, FixedFreeBarApproachesAnalytic) {
  // w_k = (2k - 1) pi / (2L) sqrt(E / rho); consistent mass bounds from above.
  const double e = 2.0e11, rho = 7800, length = 2.0;
  const FemMatrices fem = assemble_bar(40, e, 1e-4, rho, length, true);
  const ModalResult r = modal_analysis(fem);
  const double c = std::sqrt(e / rho);
  for (int k = 1; k <= 3; ++k) {
    const double exact = (2 * k - 1) * kPi / (2 * length) * c;
    EXPECT_GE(r.omegas[k - 1], exact * (1 - 1e-12));
    EXPECT_LT(r.omegas[k - 1] / exact - 1, 0.005) << "mode " << k;
  }
}

TEST(Modal, BarConvergesWithRefinement) {
  double prev_err = 1e9;
  for (std::size_t ne : {5u, 10u, 20u, 40u}) {
    const ModalResult r = modal_analysis(assemble_bar(ne, 1, 1, 1, 1, true));
    const double err = r.omegas[0] - kPi / 2;
    EXPECT_LT(err, prev_err);
    prev_err = err;
  }
}

TEST(Modal, FreeBarHasOneRigidMode) {
  const ModalResult r = modal_analysis(assemble_bar(8, 1, 1, 1, 1, false));
  EXPECT_EQ(std::count(r.rigid.begin(), r.rigid.end(), true), 1);
  EXPECT_TRUE(r.rigid[0]);
  EXPECT_NEAR(r.omegas[0], 0.0, 1e-6);
}

TEST(Modal, ClampedMembraneMatchesDiscreteLaplacian) {
  const std::size_t nx = 6, ny = 5;
  const double m = 2.0, k = 3.0;
  const ModalResult r = modal_analysis(assemble_membrane(nx, ny, 0.1, m, k, true));
  std::vector<double> ref;
  for (std::size_t p = 1; p + 1 < nx; ++p)
    for (std::size_t q = 1; q + 1 < ny; ++q) {
      const double sp = std::sin(p * kPi / (2.0 * (nx - 1))), sq = std::sin(q * kPi / (2.0 * (ny - 1)));
      ref.push_back(k / m * 4 * (sp * sp + sq * sq));
    }
  std::sort(ref.begin(), ref.end());
  ASSERT_EQ(r.omega_squared.size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(r.omega_squared[i], ref[i], 1e-10);
}

TEST(Modal, FreeMembraneHasOneRigidMode) {
  const ModalResult r = modal_analysis(assemble_membrane(3, 3, 1, 1, 1, false));
  EXPECT_EQ(std::count(r.rigid.begin(), r.rigid.end(), true), 1);
}

TEST(Modal, InputValidation) {
  FemMatrices bad = two_dof();
  bad.stiffness(0, 1) = -0.5;
  EXPECT_THROW(modal_analysis(bad), InvalidArgument);
  FemMatrices shape{linalg::Matrix::identity(2), linalg::Matrix::identity(3)};
  EXPECT_THROW(modal_analysis(shape), InvalidArgument);
  FemMatrices indefinite{linalg::Matrix{{1, 0}, {0, -1}}, linalg::Matrix::identity(2)};
  EXPECT_THROW(modal_analysis(indefinite), NumericalError);
  EXPECT_THROW(assemble_bar(0, 1, 1, 1, 1, true), InvalidArgument);
  EXPECT_THROW(assemble_bar(4, -1, 1, 1, 1, true), InvalidArgument);
  EXPECT_THROW(assemble_membrane(2, 2, 1, 1, 1, true), InvalidArgument);
}

// ---------- FRF ----------

TEST(Frf, StaticReceptanceIsFlexibility) {
  const ModalResult r = modal_analysis(two_dof());
  const auto pts = frf(r, {{0.02}, {0.0}, 0, 0});
  EXPECT_NEAR(pts[0].value.real(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(pts[0].value.imag(), 0.0, 1e-15);
  const auto cross = frf(r, {{0.0}, {0.0}, 0, 1});
  EXPECT_NEAR(cross[0].value.real(), 1.0 / 3.0, 1e-12);
}

TEST(Frf, MatchesDirectDynamicStiffnessInverse) {
  // Proportional modal damping reproduces (K - w^2 M + i w C)^-1 with C = M Phi diag(2 zeta w) Phi^T M.
  std::mt19937_64 rng(3);
  const FemMatrices fem = random_pencil(5, rng);
  const ModalResult r = modal_analysis(fem);
  const double zeta = 0.05;
  const Eigen::MatrixXd m = to_eigen(fem.mass), k = to_eigen(fem.stiffness), phi = to_eigen(r.mode_shapes);
  Eigen::VectorXd d(5);
  for (int i = 0; i < 5; ++i) d(i) = 2 * zeta * r.omegas[i];
  const Eigen::MatrixXd c = m * phi * d.asDiagonal() * phi.transpose() * m;
  const std::vector<double> grid{0.1, 0.7, 1.3, r.omegas[2]};
  const auto pts = frf(r, {{zeta}, grid, 1, 3});
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double w = grid[g];
    const Eigen::MatrixXcd dyn = (k - w * w * m).cast<Cd>() + Cd(0, w) * c.cast<Cd>();
    const Cd ref = dyn.inverse()(3, 1);
    EXPECT_NEAR(std::abs(pts[g].value - ref), 0.0, 1e-9 * std::abs(ref));
  }
}

TEST(Frf, SingleModePeakIsOneOverTwoZeta) {
  const ModalResult r = modal_analysis({linalg::Matrix{{1}}, linalg::Matrix{{4}}});
  const auto pts = frf(r, {{0.1}, {2.0}, 0, 0});
  EXPECT_NEAR(std::abs(pts[0].value), 1.0 / (2 * 0.1 * 4), 1e-12);
}

TEST(Frf, UndampedResonanceFlaggedSingular) {
  const ModalResult r = modal_analysis(two_dof());
  const auto pts = frf(r, {{0.0}, {1.0, 0.5}, 0, 0});
  EXPECT_TRUE(pts[0].singular);
  EXPECT_TRUE(std::isnan(pts[0].value.real()));
  EXPECT_FALSE(pts[1].singular);
}

TEST(Frf, RigidModeSkippedAtZeroFrequency) {
  const ModalResult r = modal_analysis(assemble_bar(4, 1, 1, 1, 1, false));
  const auto pts = frf(r, {{0.01}, {0.0, 1.0}, 0, 0});
  EXPECT_TRUE(std::isfinite(pts[0].value.real()));
  EXPECT_TRUE(std::isfinite(pts[1].value.real()));
}

TEST(Frf, RejectsBadConfig) {
  const ModalResult r = modal_analysis(two_dof());
  EXPECT_THROW(frf(r, {{1.0}, {0.5}, 0, 0}), InvalidArgument);
  EXPECT_THROW(frf(r, {{0.1, 0.1, 0.1}, {0.5}, 0, 0}), InvalidArgument);
  EXPECT_THROW(frf(r, {{0.1}, {0.5}, 2, 0}), InvalidArgument);
  EXPECT_THROW(frf(r, {{0.1}, {-1.0}, 0, 0}), InvalidArgument);
}
