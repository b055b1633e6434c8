#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "quasim/error.hpp"
#include "quasim/fem/modal.hpp"
#include "quasim/qpe/qpe.hpp"
#include "quasim/qsim/sampling.hpp"
#include "support.hpp"

using namespace quasim;
using namespace quasim::qpe;
using namespace quasim::testing;

namespace {

HermitianOperator diag_op(std::vector<double> d) {
  linalg::Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return {m};
}

HermitianOperator random_op(std::size_t n, std::mt19937_64& rng) { return {random_spd(n, rng)}; }

/// Fejer mixture: sum_i w_i P(m | lambda_i t / 2pi).
std::vector<double> mixture(const std::vector<double>& lambdas, const std::vector<double>& weights, double t,
                            int n) {
  std::vector<double> p(std::size_t{1} << n, 0.0);
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    double phi = lambdas[i] * t / (2 * kPi);
    phi -= std::floor(phi);
    for (std::size_t m = 0; m < p.size(); ++m) p[m] += weights[i] * qpe_outcome_probability(phi, m, n);
  }
  return p;
}

}  // namespace

TEST(QpeTime, AliasFreeFormula) {
  EXPECT_DOUBLE_EQ(choose_evolution_time(3.0, 4), 2 * kPi * (1 - 1.0 / 16) / 3.0);
  // The upper bound itself lands just below phase 1.
  const double t = choose_evolution_time(7.5, 6);
  EXPECT_LT(7.5 * t / (2 * kPi), 1.0);
}

TEST(QpeUnitary, MatchesSpectralExponential) {
  std::mt19937_64 rng(2);
  const HermitianOperator h = random_op(4, rng);
  const double t = 0.37;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(h.matrix));
  const MatC ref = es.eigenvectors().cast<Cd>() *
                   es.eigenvalues().unaryExpr([&](double l) { return std::polar(1.0, l * t); }).asDiagonal() *
                   es.eigenvectors().transpose().cast<Cd>();
  const ComplexMatrix u = evolution_unitary(h, t);
  EXPECT_LT(linalg::unitarity_defect(u), 1e-12);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) EXPECT_LT(std::abs(u(i, j) - ref(i, j)), 1e-12);
}

TEST(QpeEmbed, PowerOfTwoNeedsNoPadding) {
  const EmbeddedOperator e = embed_operator(diag_op({1, 2}));
  EXPECT_EQ(e.op.dim(), 2u);
  EXPECT_FALSE(e.padding_value.has_value());
  EXPECT_EQ(e.n_system_qubits(), 1);
  EXPECT_DOUBLE_EQ(e.lambda_upper(), 2.0);
}

TEST(QpeEmbed, PadsAboveGershgorinBound) {
  const HermitianOperator h{linalg::Matrix{{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}}};
  const EmbeddedOperator e = embed_operator(h);
  ASSERT_EQ(e.op.dim(), 4u);
  EXPECT_EQ(e.physical_dim, 3u);
  EXPECT_DOUBLE_EQ(e.physical_bound, 4.0);
  ASSERT_TRUE(e.padding_value.has_value());
  EXPECT_DOUBLE_EQ(*e.padding_value, 4.4);
  EXPECT_DOUBLE_EQ(e.op.matrix(3, 3), 4.4);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(e.op.matrix(3, i), 0.0);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(e.op.matrix(i, j), h.matrix(i, j));
  }
}

TEST(QpeEmbed, ScalarAndZeroOperators) {
  const EmbeddedOperator one = embed_operator(diag_op({5}));
  EXPECT_EQ(one.op.dim(), 2u);
  EXPECT_DOUBLE_EQ(*one.padding_value, 5.5);
  const EmbeddedOperator zero = embed_operator(diag_op({0, 0, 0}));
  EXPECT_DOUBLE_EQ(*zero.padding_value, 1.0);
}

TEST(QpeDistribution, ExactPhaseGivesSingleBin) {
  // lambda t / 2pi = 5/16 exactly.
  const int n = 4;
  const double t = 2 * kPi / 16;
  const auto p = qpe_distribution(diag_op({5, 11}), 2, t, n, ExactEigenvector{0});
  EXPECT_GE(p[5], 1 - 1e-10);
  const auto q = qpe_distribution(diag_op({5, 11}), 2, t, n, ExactEigenvector{1});
  EXPECT_GE(q[11], 1 - 1e-10);
}

TEST(QpeDistribution, InexactPhaseMatchesFejerKernel) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const HermitianOperator h = random_op(4, rng);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(h.matrix));
    const int n = 3 + trial;
    const double t = 0.9 / es.eigenvalues()(3);
    for (std::size_t k = 0; k < 4; ++k) {
      const auto p = qpe_distribution(h, 4, t, n, ExactEigenvector{k});
      std::vector<double> w(4, 0.0);
      w[k] = 1.0;
      const auto ref = mixture({es.eigenvalues().data(), es.eigenvalues().data() + 4}, w, t, n);
      ASSERT_EQ(p.size(), ref.size());
      for (std::size_t m = 0; m < p.size(); ++m) EXPECT_NEAR(p[m], ref[m], 1e-10);
    }
  }
}

TEST(QpeDistribution, SuperpositionsAreOverlapWeightedMixtures) {
  std::mt19937_64 rng(6);
  const HermitianOperator h = random_op(3, rng);
  const EmbeddedOperator e = embed_operator(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(e.op.matrix));
  const double t = choose_evolution_time(e.lambda_upper(), 5);
  const std::vector<double> lambdas(es.eigenvalues().data(), es.eigenvalues().data() + 4);

  const std::vector<double> amps{0.3, -1.2, 0.5};
  Eigen::Vector4d psi(0.3, -1.2, 0.5, 0.0);
  psi.normalize();
  std::vector<double> w(4);
  for (int i = 0; i < 4; ++i) w[i] = std::pow(es.eigenvectors().col(i).dot(psi), 2);
  const auto p = qpe_distribution(e.op, 3, t, 5, CustomState{amps});
  const auto ref = mixture(lambdas, w, t, 5);
  for (std::size_t m = 0; m < p.size(); ++m) EXPECT_NEAR(p[m], ref[m], 1e-10);
  EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);

  // Uniform superposition of the physical eigenvectors never touches the padding row.
  const auto u = qpe_distribution(e.op, 3, t, 5, UniformSuperposition{});
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> phys(to_eigen(h.matrix));
  const auto uref = mixture({phys.eigenvalues().data(), phys.eigenvalues().data() + 3}, {1 / 3.0, 1 / 3.0, 1 / 3.0},
                            t, 5);
  for (std::size_t m = 0; m < u.size(); ++m) EXPECT_NEAR(u[m], uref[m], 1e-10);
}

TEST(QpeDistribution, PeakWithinOneBinAtFourOverPiSquared) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> lam(0.1, 3.9);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 7;
    const double l = lam(rng);
    const double t = choose_evolution_time(4.0, n);
    const auto p = qpe_distribution(diag_op({l, 4.0}), 2, t, n, ExactEigenvector{0});
    const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    const double phi = l * t / (2 * kPi);
    EXPECT_LE(std::abs(static_cast<double>(best) / std::ldexp(1.0, n) - phi), std::ldexp(1.0, -n) + 1e-12);
    EXPECT_GE(p[best], 4 / (kPi * kPi) - 1e-12);
  }
}

TEST(QpeCircuit, SimulatedAncillaMarginalMatchesDistribution) {
  std::mt19937_64 rng(8);
  const HermitianOperator h = random_op(2, rng);
  const int n = 4;
  const double t = choose_evolution_time(fem::gershgorin_bound(h), n);
  const qsim::Circuit c = build_qpe_circuit(evolution_unitary(h, t), n);
  ASSERT_EQ(c.n_qubits(), 1 + n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(h.matrix));
  const Eigen::Vector2d v = es.eigenvectors().col(1);
  std::vector<Cd> amps(std::size_t{1} << (1 + n), 0.0);
  amps[0] = v(0);
  amps[1] = v(1);
  const qsim::Statevector out = qsim::run_circuit(c, qsim::Bindings{}, qsim::Statevector::from_amplitudes(amps));
  std::vector<int> anc(n);
  std::iota(anc.begin(), anc.end(), 1);
  const auto marg = qsim::marginal_probabilities(out, anc);
  const auto p = qpe_distribution(h, 2, t, n, ExactEigenvector{1});
  for (std::size_t m = 0; m < p.size(); ++m) EXPECT_NEAR(marg[m], p[m], 1e-12);
}

TEST(QpeRun, SeededHistogramIsDeterministic) {
  QpeConfig cfg;
  cfg.n_ancilla = 5;
  cfg.shots = 400;
  cfg.seed = 17;
  cfg.input_state = UniformSuperposition{};
  const HermitianOperator h{linalg::Matrix{{2, -1}, {-1, 2}}};
  const PhaseHistogram a = run_qpe(h, cfg), b = run_qpe(h, cfg);
  EXPECT_EQ(a.entries, b.entries);
  std::uint64_t total = 0;
  for (const auto& [bits, count] : a.entries) {
    EXPECT_EQ(bits.size(), 5u);
    total += count;
  }
  EXPECT_EQ(total, 400u);
  cfg.seed = 18;
  EXPECT_NE(run_qpe(h, cfg).entries, a.entries);
}

TEST(QpeEstimates, BinsToFrequencies) {
  PhaseHistogram hist{3, 10, {{"010", 2}, {"100", 7}, {"111", 1}}};
  const double t = 2.0;
  const auto est = phases_to_frequencies(hist, t, 0.15);
  ASSERT_EQ(est.size(), 2u);
  EXPECT_EQ(est[0].bitstring, "100");
  EXPECT_DOUBLE_EQ(est[0].phase, 0.5);
  EXPECT_DOUBLE_EQ(est[0].lambda_estimate, 2 * kPi * 0.5 / t);
  EXPECT_DOUBLE_EQ(est[0].omega_estimate, std::sqrt(kPi / 2));
  EXPECT_DOUBLE_EQ(est[0].weight, 0.7);
  EXPECT_EQ(est[1].bitstring, "010");
}

TEST(QpeModal, TwoDofRecoversBothFrequencies) {
  QpeConfig cfg;
  cfg.n_ancilla = 8;
  cfg.shots = 2000;
  for (std::size_t k = 0; k < 2; ++k) {
    cfg.input_state = ExactEigenvector{k};
    const QpeReport r = qpe_modal(two_dof(), cfg);
    ASSERT_FALSE(r.estimates.empty());
    const ComparedEstimate& top = r.estimates[0];
    EXPECT_EQ(top.nearest_mode, k);
    EXPECT_GT(top.estimate.weight, 0.4);
    EXPECT_LE(std::abs(top.estimate.omega_estimate - r.classical_omegas[k]), top.grid_resolution);
    EXPECT_EQ(r.n_system_qubits, 1);
    EXPECT_DOUBLE_EQ(r.lambda_resolution, 2 * kPi / (r.evolution_time * 256));
  }
}

TEST(QpeModal, PaddedBinsAreDropped) {
  QpeConfig cfg;
  cfg.n_ancilla = 6;
  cfg.shots = 3000;
  cfg.input_state = UniformSuperposition{};
  const QpeReport r = qpe_modal(fem::assemble_bar(3, 1, 1, 1, 1, true), cfg);
  ASSERT_TRUE(r.padding_value.has_value());
  for (const auto& e : r.estimates) EXPECT_LT(e.estimate.lambda_estimate, *r.padding_value);
}

TEST(QpeConfig, Validation) {
  QpeConfig cfg;
  cfg.n_ancilla = kMaxAncillas + 1;
  try {
    cfg.validate();
    FAIL() << "expected CapacityError";
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("ancilla cap"), std::string::npos);
  }
  cfg.n_ancilla = 0;
  EXPECT_THROW(cfg.validate(), CapacityError);
  cfg.n_ancilla = 4;
  cfg.shots = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.shots = 10;
  cfg.evolution_time = -1.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg.evolution_time.reset();
  cfg.input_state = ExactEigenvector{2};
  EXPECT_THROW(qpe_modal(two_dof(), cfg), InvalidArgument);
  cfg.input_state = CustomState{{1.0}};
  EXPECT_THROW(qpe_modal(two_dof(), cfg), InvalidArgument);
  cfg.input_state = CustomState{{0.0, 0.0}};
  EXPECT_THROW(qpe_modal(two_dof(), cfg), InvalidArgument);
}

TEST(QpeConfig, ParseInputState) {
  EXPECT_EQ(std::get<ExactEigenvector>(parse_input_state("exact:3")).index, 3u);
  EXPECT_TRUE(std::holds_alternative<UniformSuperposition>(parse_input_state("uniform")));
  EXPECT_EQ(std::get<CustomState>(parse_input_state("custom", {1, 2})).amplitudes.size(), 2u);
  EXPECT_THROW(parse_input_state("exact:x"), InvalidArgument);
  EXPECT_THROW(parse_input_state("random"), InvalidArgument);
  EXPECT_EQ(describe(ExactEigenvector{1}), "exact:1");
}
