// Shared helpers for the unit and acceptance tests: random instances and
// independent reference implementations built on Eigen.
#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "quasim/fem/modal.hpp"
#include "quasim/heat/heat.hpp"
#include "quasim/qgnn/model.hpp"
#include "quasim/qsim/circuit.hpp"
#include "quasim/qsim/observable.hpp"
#include "quasim/qsim/statevector.hpp"

namespace quasim::testing {

using Cd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
inline constexpr double kPi = std::numbers::pi;

// ---------- gate matrices from the textbook definitions ----------

inline Eigen::Matrix2cd rotation_2x2(qsim::GateKind kind, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const Cd i{0, 1};
  Eigen::Matrix2cd m;
  switch (kind) {
    case qsim::GateKind::RX: m << c, -i * s, -i * s, c; break;
    case qsim::GateKind::RZ: m << std::exp(-i * (theta / 2)), 0, 0, std::exp(i * (theta / 2)); break;
    default: m << c, -s, s, c; break;  // RY
  }
  return m;
}

/// Full 2^n matrix of one gate, built column by column from the action on
/// basis states: controls all 1 -> the local block acts on the targets.
inline MatC full_gate_matrix(const qsim::Gate& g, int n, const std::vector<double>& slots = {}) {
  using qsim::GateKind;
  MatC local;
  switch (g.kind()) {
    case GateKind::Hadamard: local = MatC(2, 2); local << 1, 1, 1, -1; local /= std::sqrt(2.0); break;
    case GateKind::PauliX:
    case GateKind::CNOT: local = MatC(2, 2); local << 0, 1, 1, 0; break;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ: local = rotation_2x2(g.kind(), g.angle().evaluate(slots)); break;
    case GateKind::ControlledRY: local = rotation_2x2(GateKind::RY, g.angle().evaluate(slots)); break;
    case GateKind::ControlledPhase:
      local = MatC::Identity(2, 2);
      local(1, 1) = std::polar(1.0, g.angle().evaluate(slots));
      break;
    case GateKind::DenseUnitary: {
      const auto& m = g.matrix();
      local = MatC(m.rows(), m.cols());
      for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) local(r, c) = m(r, c);
      break;
    }
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  const auto targets = g.targets();
  const auto controls = g.controls();
  MatC full = MatC::Zero(dim, dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    bool active = true;
    for (int c : controls) active = active && ((col >> c) & 1U);
    if (!active) {
      full(col, col) = 1.0;
      continue;
    }
    std::uint64_t local_in = 0;
    for (std::size_t b = 0; b < targets.size(); ++b) local_in |= ((col >> targets[b]) & 1U) << b;
    for (Eigen::Index local_out = 0; local_out < local.rows(); ++local_out) {
      std::uint64_t row = col;
      for (std::size_t b = 0; b < targets.size(); ++b) {
        row &= ~(std::uint64_t{1} << targets[b]);
        row |= ((local_out >> b) & 1U) << targets[b];
      }
      full(row, col) += local(local_out, local_in);
    }
  }
  return full;
}

inline MatC full_circuit_matrix(const qsim::Circuit& c, const std::vector<double>& slots = {}) {
  const std::uint64_t dim = std::uint64_t{1} << c.n_qubits();
  MatC u = MatC::Identity(dim, dim);
  for (const qsim::Gate& g : c.gates()) u = full_gate_matrix(g, c.n_qubits(), slots) * u;
  return u;
}

inline VecC to_eigen(const qsim::Statevector& s) {
  VecC v(s.dimension());
  for (std::uint64_t i = 0; i < s.dimension(); ++i) v(i) = s[i];
  return v;
}

/// Unitary matrix of the circuit obtained by running the simulator on each
/// basis state.
inline MatC simulated_unitary(const qsim::Circuit& c, const std::vector<double>& slots = {}) {
  const std::uint64_t dim = std::uint64_t{1} << c.n_qubits();
  MatC u(dim, dim);
  for (std::uint64_t k = 0; k < dim; ++k)
    u.col(k) = to_eigen(qsim::run_circuit(c, std::span<const double>(slots), qsim::Statevector::basis(c.n_qubits(), k)));
  return u;
}

inline linalg::ComplexMatrix random_unitary(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  MatC a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) a(i, j) = Cd(n01(rng), n01(rng));
  const Eigen::HouseholderQR<MatC> qr(a);
  const MatC q = qr.householderQ();
  linalg::ComplexMatrix u(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) u(i, j) = q(i, j);
  return u;
}

inline qsim::Statevector random_state(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  std::vector<Cd> a(std::size_t{1} << n);
  double norm = 0;
  for (Cd& x : a) {
    x = Cd(n01(rng), n01(rng));
    norm += std::norm(x);
  }
  for (Cd& x : a) x /= std::sqrt(norm);
  return qsim::Statevector::from_amplitudes(std::move(a));
}

/// Random circuit over every gate kind. With `n_slots` > 0, rotation angles
/// are random affine functions of the slots and controlled phases stay
/// constant (they have no shift rule).
inline qsim::Circuit random_circuit(int n, int n_gates, std::mt19937_64& rng, int n_slots = 0,
                                    bool with_dense = true) {
  qsim::Circuit c(n);
  std::vector<qsim::SlotId> ids;
  for (int s = 0; s < n_slots; ++s) ids.push_back(c.declare_slot("p" + std::to_string(s)));
  std::uniform_int_distribution<int> qubit(0, n - 1);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> coef(-1.5, 1.5);
  auto make_angle = [&]() -> qsim::Angle {
    if (ids.empty()) return angle(rng);
    qsim::Angle a(angle(rng));
    std::uniform_int_distribution<int> pick(0, static_cast<int>(ids.size()) - 1);
    a.add_term(ids[pick(rng)], coef(rng));
    if (rng() % 2) a.add_term(ids[pick(rng)], coef(rng));
    return a;
  };
  auto two = [&]() {
    const int a = qubit(rng);
    int b = qubit(rng);
    while (b == a) b = qubit(rng);
    return std::pair{a, b};
  };
  const int kinds = n >= 2 ? (with_dense ? 9 : 8) : 5;
  for (int k = 0; k < n_gates; ++k) {
    const int kind = std::uniform_int_distribution<int>(0, kinds - 1)(rng);
    switch (kind) {
      case 0: c.h(qubit(rng)); break;
      case 1: c.x(qubit(rng)); break;
      case 2: c.rx(qubit(rng), make_angle()); break;
      case 3: c.ry(qubit(rng), make_angle()); break;
      case 4: c.rz(qubit(rng), make_angle()); break;
      case 5: { auto [a, b] = two(); c.cnot(a, b); break; }
      case 6: { auto [a, b] = two(); c.cry(a, b, make_angle()); break; }
      case 7: { auto [a, b] = two(); c.cphase(a, b, angle(rng)); break; }
      default: {
        auto [a, b] = two();
        c.add(qsim::Gate::dense({a, b}, random_unitary(4, rng)));
        break;
      }
    }
  }
  return c;
}

inline qsim::Observable random_observable(int n, std::mt19937_64& rng, int n_terms = 3) {
  qsim::Observable obs(n);
  std::uniform_real_distribution<double> coef(-1, 1);
  const char letters[] = {'I', 'X', 'Y', 'Z'};
  for (int t = 0; t < n_terms; ++t) {
    std::string p(n, 'I');
    for (char& ch : p) ch = letters[rng() % 4];
    obs.add_term(coef(rng), p);
  }
  return obs;
}

/// <psi|O|psi> from explicit Kronecker products of Pauli matrices.
inline double dense_expectation(const VecC& psi, const qsim::Observable& obs) {
  const int n = obs.n_qubits();
  double e = 0;
  for (const auto& term : obs.terms()) {
    MatC op = MatC::Identity(1, 1);
    for (int q = n - 1; q >= 0; --q) {
      Eigen::Matrix2cd p;
      switch (term.paulis[static_cast<std::size_t>(q)]) {
        case 'X': p << 0, 1, 1, 0; break;
        case 'Y': p << 0, Cd(0, -1), Cd(0, 1), 0; break;
        case 'Z': p << 1, 0, 0, -1; break;
        default: p = Eigen::Matrix2cd::Identity();
      }
      op = Eigen::kroneckerProduct(op, p).eval();
    }
    e += term.coefficient * (psi.adjoint() * op * psi)(0, 0).real();
  }
  return e;
}

// ---------- linear algebra ----------

inline Eigen::MatrixXd to_eigen(const linalg::Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline linalg::Matrix from_eigen(const Eigen::MatrixXd& e) {
  linalg::Matrix m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    for (Eigen::Index j = 0; j < e.cols(); ++j) m(i, j) = e(i, j);
  return m;
}

/// SPD matrix A^T A + shift*I with normal entries.
inline linalg::Matrix random_spd(std::size_t n, std::mt19937_64& rng, double shift = 0.5) {
  std::normal_distribution<double> n01;
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = n01(rng);
  return from_eigen(a.transpose() * a + shift * Eigen::MatrixXd::Identity(n, n));
}

inline fem::FemMatrices two_dof() {
  return {linalg::Matrix{{1, 0}, {0, 1}}, linalg::Matrix{{2, -1}, {-1, 2}}};
}

/// Ascending generalized eigenvalues of (K, M) from Eigen.
inline std::vector<double> eigen_generalized_values(const fem::FemMatrices& fem) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(fem.stiffness), to_eigen(fem.mass));
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return v;
}

// ---------- QPE ----------

/// Probability of ancilla outcome m for an eigenphase phi with n ancillas:
/// |sum_k exp(2 pi i k (phi - m/2^n))|^2 / 4^n.
inline double qpe_outcome_probability(double phi, std::uint64_t m, int n) {
  const double big_n = std::ldexp(1.0, n);
  Cd s = 0;
  for (std::uint64_t k = 0; k < static_cast<std::uint64_t>(big_n); ++k)
    s += std::polar(1.0, 2 * kPi * static_cast<double>(k) * (phi - static_cast<double>(m) / big_n));
  return std::norm(s) / (big_n * big_n);
}

// ---------- QGNN ----------

/// <Z_0> of the star circuit in closed form. Neighbor k stays in
/// cos(a_k/2)|0> + sin(a_k/2)|1>, a_k = pi x_k + theta_n, and the controlled
/// rotations all act about Y on the root, so
///   <Z_0> = Re[e^{i pi x_root} prod_k (1 - p_k + p_k e^{i phi_k})],
/// p_k = sin^2(a_k/2), phi_k = theta_e + gamma eps_k.
inline double star_expectation(const qgnn::DegreeParameters& p, double x_root, const std::vector<double>& x_rel,
                               const std::vector<double>& eps) {
  Cd acc = std::polar(1.0, kPi * x_root);
  for (std::size_t k = 0; k < x_rel.size(); ++k) {
    const double a = kPi * x_rel[k] + p.theta_n;
    const double pk = std::sin(a / 2) * std::sin(a / 2);
    acc *= (1.0 - pk) + pk * std::polar(1.0, p.theta_e + p.gamma * eps[k]);
  }
  return acc.real();
}

inline double oracle_predict(const qgnn::QgnnModel& m, double f_root, const std::vector<double>& f_nb,
                             const std::vector<double>& eps) {
  const auto& p = m.parameters.at(f_nb.size());
  std::vector<double> x_rel;
  for (double f : f_nb) x_rel.push_back(0.5 * (std::clamp((f - f_root) / m.scaler.range(), -1.0, 1.0) + 1.0));
  const double z = star_expectation(p, m.scaler.scale(f_root), x_rel, eps);
  return m.scaler.invert(0.5 * (1.0 - (p.decode_gain * z + p.decode_bias)));
}

inline qgnn::QgnnModel random_model(std::mt19937_64& rng, std::size_t max_degree = 8) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  qgnn::QgnnModel m;
  m.scaler = {-1.0, 2.0};
  for (std::size_t d = 0; d <= max_degree; ++d)
    m.parameters[d] = {u(rng), u(rng), u(rng), 1.0 + 0.3 * u(rng), 0.2 * u(rng)};
  return m;
}

// ---------- heat ----------

/// One explicit step as a dense matrix product: f' = (I - alpha L) f + s.
inline std::vector<double> dense_heat_step(const qgnn::MeshGraph& g, const std::vector<double>& f, double alpha,
                                           std::int64_t source, double power) {
  const auto n = static_cast<Eigen::Index>(g.n_vertices());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    const auto a = static_cast<Eigen::Index>(e.a), b = static_cast<Eigen::Index>(e.b);
    lap(a, a) += 1;
    lap(b, b) += 1;
    lap(a, b) -= 1;
    lap(b, a) -= 1;
  }
  const Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(f.data(), n);
  Eigen::VectorXd y = (Eigen::MatrixXd::Identity(n, n) - alpha * lap) * x;
  if (source >= 0) y(source) += power;
  return {y.data(), y.data() + n};
}

// ---------- files ----------

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path fresh_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("quasim-test-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace quasim::testing
