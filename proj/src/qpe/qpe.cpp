#include "quasim/qpe/qpe.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>

#include "quasim/fem/eigen.hpp"
#include "quasim/qsim/qft.hpp"
#include "quasim/qsim/statevector.hpp"

namespace quasim::qpe {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> embed_vector(const std::vector<double>& v, std::size_t dim) {
  std::vector<double> out(dim, 0.0);
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

std::vector<double> simulate(const EmbeddedOperator& emb, double t, int n_ancilla,
                             const std::vector<double>& physical_input) {
  const ComplexMatrix u = evolution_unitary(emb.op, t);
  const qsim::Circuit circuit = build_qpe_circuit(u, n_ancilla);
  const int q = emb.n_system_qubits();

  std::vector<Complex> amps(std::size_t{1} << circuit.n_qubits());
  const std::vector<double> input = embed_vector(physical_input, emb.op.dim());
  for (std::size_t i = 0; i < input.size(); ++i) amps[i] = input[i];
  const qsim::Statevector out =
      qsim::run_circuit(circuit, std::span<const double>{}, qsim::Statevector::from_amplitudes(std::move(amps)));

  std::vector<int> ancillas(static_cast<std::size_t>(n_ancilla));
  std::iota(ancillas.begin(), ancillas.end(), q);
  return qsim::marginal_probabilities(out, ancillas);
}

}  // namespace

void QpeConfig::validate() const {
  if (n_ancilla < 1 || n_ancilla > kMaxAncillas)
    throw CapacityError("ancilla cap: n_ancilla must lie in [1, " + std::to_string(kMaxAncillas) + "], got " +
                        std::to_string(n_ancilla));
  if (shots < 1) throw InvalidArgument("shots must be at least 1");
  if (evolution_time && !(*evolution_time > 0.0 && std::isfinite(*evolution_time)))
    throw InvalidArgument("evolution time must be positive");
  if (const auto* c = std::get_if<CustomState>(&input_state); c && c->amplitudes.empty())
    throw InvalidArgument("custom input state needs amplitudes");
}

std::string describe(const InputState& s) {
  if (const auto* e = std::get_if<ExactEigenvector>(&s)) return "exact:" + std::to_string(e->index);
  if (std::holds_alternative<UniformSuperposition>(s)) return "uniform";
  return "custom";
}

InputState parse_input_state(const std::string& text, std::vector<double> custom) {
  if (text == "uniform") return UniformSuperposition{};
  if (text == "custom") return CustomState{std::move(custom)};
  const std::string prefix = "exact:";
  if (text.rfind(prefix, 0) == 0 && text.size() > prefix.size()) {
    const std::string digits = text.substr(prefix.size());
    if (std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); }))
      return ExactEigenvector{static_cast<std::size_t>(std::stoull(digits))};
  }
  throw InvalidArgument("input state must be 'exact:<index>', 'uniform' or 'custom', got '" + text + "'");
}

int EmbeddedOperator::n_system_qubits() const { return std::countr_zero(op.dim()); }

ComplexMatrix evolution_unitary(const HermitianOperator& h, double t) {
  h.validate();
  if (h.dim() > kMaxOperatorDim) throw CapacityError("operator dimension exceeds 4096");
  const fem::SymmetricEigen eig = fem::jacobi_eigen(h.matrix);
  const std::size_t n = h.dim();
  std::vector<Complex> phases(n);
  for (std::size_t k = 0; k < n; ++k) phases[k] = std::polar(1.0, eig.values[k] * t);
  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{};
      for (std::size_t k = 0; k < n; ++k) acc += eig.vectors(i, k) * phases[k] * eig.vectors(j, k);
      u(i, j) = acc;
    }
  }
  return u;
}

EmbeddedOperator embed_operator(const HermitianOperator& h) {
  h.validate();
  if (h.dim() == 0) throw InvalidArgument("cannot embed an empty operator");
  if (h.dim() > kMaxOperatorDim) throw CapacityError("operator dimension exceeds 4096");
  EmbeddedOperator emb;
  emb.physical_dim = h.dim();
  emb.physical_bound = fem::gershgorin_bound(h);
  const std::size_t dim = std::max<std::size_t>(2, std::bit_ceil(h.dim()));
  if (dim == h.dim()) {
    emb.op = h;
    return emb;
  }
  const double b = emb.physical_bound;
  const double pad = b == 0.0 ? 1.0 : b + 0.1 * std::abs(b);
  emb.padding_value = pad;
  emb.op.matrix = linalg::Matrix(dim, dim);
  for (std::size_t i = 0; i < h.dim(); ++i)
    for (std::size_t j = 0; j < h.dim(); ++j) emb.op.matrix(i, j) = h.matrix(i, j);
  for (std::size_t i = h.dim(); i < dim; ++i) emb.op.matrix(i, i) = pad;
  return emb;
}

qsim::Circuit build_qpe_circuit(const ComplexMatrix& u, int n_ancilla) {
  if (n_ancilla < 1 || n_ancilla > kMaxAncillas)
    throw CapacityError("ancilla cap: n_ancilla must lie in [1, " + std::to_string(kMaxAncillas) + "]");
  if (!u.square() || u.rows() < 2 || !std::has_single_bit(u.rows()))
    throw InvalidArgument("QPE unitary must be square with a power-of-two dimension >= 2");
  const int q = std::countr_zero(u.rows());
  if (q + n_ancilla > qsim::kMaxQubits)
    throw CapacityError("qubit cap exceeded: " + std::to_string(q + n_ancilla) + " > " +
                        std::to_string(qsim::kMaxQubits));

  qsim::Circuit c(q + n_ancilla);
  for (int j = 0; j < n_ancilla; ++j) c.h(q + j);

  std::vector<int> system(static_cast<std::size_t>(q));
  std::iota(system.begin(), system.end(), 0);
  auto power = std::make_shared<const ComplexMatrix>(u);
  for (int j = 0; j < n_ancilla; ++j) {
    if (j > 0) power = std::make_shared<const ComplexMatrix>(linalg::multiply(*power, *power));
    c.add(qsim::Gate::dense(system, power, {q + j}));
  }
  c.append(qsim::inverse_qft_circuit(n_ancilla), q);
  return c;
}

double choose_evolution_time(double lambda_upper, int n_ancilla) {
  if (!(lambda_upper > 0.0) || !std::isfinite(lambda_upper))
    throw InvalidArgument("eigenvalue upper bound must be positive");
  if (n_ancilla < 1) throw InvalidArgument("need at least one ancilla");
  return kTwoPi * (1.0 - std::ldexp(1.0, -n_ancilla)) / lambda_upper;
}

std::vector<double> resolve_input_state(const HermitianOperator& physical, const InputState& state) {
  const std::size_t n = physical.dim();
  std::vector<double> v(n, 0.0);
  if (const auto* c = std::get_if<CustomState>(&state)) {
    if (c->amplitudes.size() != n)
      throw InvalidArgument("custom input has " + std::to_string(c->amplitudes.size()) + " amplitudes, operator has " +
                            std::to_string(n) + " rows");
    v = c->amplitudes;
  } else {
    const fem::SymmetricEigen eig = fem::jacobi_eigen(physical.matrix);
    if (const auto* e = std::get_if<ExactEigenvector>(&state)) {
      if (e->index >= n)
        throw InvalidArgument("unknown eigenvector index " + std::to_string(e->index) + " (operator has " +
                              std::to_string(n) + ")");
      for (std::size_t r = 0; r < n; ++r) v[r] = eig.vectors(r, e->index);
    } else {
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t r = 0; r < n; ++r) v[r] += eig.vectors(r, k);
    }
  }
  const double norm = linalg::norm2(v);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw InvalidArgument("input state has zero norm");
  for (double& x : v) x /= norm;
  return v;
}

std::vector<double> qpe_distribution(const HermitianOperator& h, std::size_t physical_dim, double t,
                                     int n_ancilla, const InputState& input) {
  if (!std::has_single_bit(h.dim()) || h.dim() < 2)
    throw InvalidArgument("qpe_distribution needs an embedded (power-of-two) operator");
  if (physical_dim == 0 || physical_dim > h.dim()) throw InvalidArgument("bad physical dimension");
  EmbeddedOperator emb;
  emb.op = h;
  emb.physical_dim = physical_dim;
  HermitianOperator physical{linalg::Matrix(physical_dim, physical_dim)};
  for (std::size_t i = 0; i < physical_dim; ++i)
    for (std::size_t j = 0; j < physical_dim; ++j) physical.matrix(i, j) = h.matrix(i, j);
  return simulate(emb, t, n_ancilla, resolve_input_state(physical, input));
}

PhaseHistogram run_qpe(const HermitianOperator& h, const QpeConfig& cfg) {
  cfg.validate();
  const EmbeddedOperator emb = embed_operator(h);
  if (emb.n_system_qubits() + cfg.n_ancilla > qsim::kMaxQubits)
    throw CapacityError("qubit cap exceeded: " + std::to_string(emb.n_system_qubits() + cfg.n_ancilla) + " > " +
                        std::to_string(qsim::kMaxQubits));
  const double t = cfg.evolution_time ? *cfg.evolution_time : choose_evolution_time(emb.lambda_upper(), cfg.n_ancilla);
  const std::vector<double> p = simulate(emb, t, cfg.n_ancilla, resolve_input_state(h, cfg.input_state));
  const std::vector<std::uint64_t> counts = qsim::sample_counts(p, cfg.shots, cfg.seed);

  PhaseHistogram hist;
  hist.n_ancilla = cfg.n_ancilla;
  hist.shots = cfg.shots;
  for (std::uint64_t k = 0; k < counts.size(); ++k)
    if (counts[k] > 0) hist.entries.emplace(qsim::to_bitstring(k, cfg.n_ancilla), counts[k]);
  return hist;
}

std::vector<EigenEstimate> phases_to_frequencies(const PhaseHistogram& hist, double t, double min_weight) {
  if (!(t > 0.0)) throw InvalidArgument("evolution time must be positive");
  if (!(min_weight >= 0.0 && min_weight < 1.0)) throw InvalidArgument("min_weight must lie in [0, 1)");
  if (hist.shots == 0) throw InvalidArgument("histogram has no shots");
  const double grid = std::ldexp(1.0, hist.n_ancilla);
  std::vector<EigenEstimate> out;
  for (const auto& [bits, count] : hist.entries) {
    const double weight = static_cast<double>(count) / static_cast<double>(hist.shots);
    if (weight < min_weight) continue;
    EigenEstimate e;
    e.bitstring = bits;
    e.phase = static_cast<double>(qsim::from_bitstring(bits)) / grid;
    e.lambda_estimate = kTwoPi * e.phase / t;
    e.omega_estimate = std::sqrt(std::max(e.lambda_estimate, 0.0));
    e.weight = weight;
    out.push_back(std::move(e));
  }
  // Histogram iteration is bitstring-ascending, so a stable sort keeps ties in that order.
  std::stable_sort(out.begin(), out.end(), [](const EigenEstimate& a, const EigenEstimate& b) { return a.weight > b.weight; });
  return out;
}

QpeReport qpe_modal(const fem::FemMatrices& fem, const QpeConfig& cfg, double min_weight) {
  cfg.validate();
  const fem::ModalResult modal = fem::modal_analysis(fem);
  const HermitianOperator h = fem::reduce_generalized(fem);
  const EmbeddedOperator emb = embed_operator(h);

  QpeReport report;
  report.n_dof = fem.n_dof();
  report.n_ancilla = cfg.n_ancilla;
  report.n_system_qubits = emb.n_system_qubits();
  report.padding_value = emb.padding_value;
  report.input_state = describe(cfg.input_state);
  report.shots = cfg.shots;
  report.seed = cfg.seed;
  report.classical_omegas = modal.omegas;
  report.evolution_time =
      cfg.evolution_time ? *cfg.evolution_time : choose_evolution_time(emb.lambda_upper(), cfg.n_ancilla);

  QpeConfig resolved = cfg;
  resolved.evolution_time = report.evolution_time;
  report.histogram = run_qpe(h, resolved);

  const double t = report.evolution_time;
  const double dlambda = kTwoPi / (t * std::ldexp(1.0, cfg.n_ancilla));
  report.lambda_resolution = dlambda;
  const double padded_cut =
      emb.padding_value ? 0.5 * (emb.physical_bound + *emb.padding_value) : INFINITY;

  for (const EigenEstimate& e : phases_to_frequencies(report.histogram, t, min_weight)) {
    if (e.lambda_estimate > padded_cut) continue;
    ComparedEstimate c;
    c.estimate = e;
    double best = INFINITY;
    for (std::size_t i = 0; i < modal.omegas.size(); ++i) {
      const double d = std::abs(modal.omegas[i] - e.omega_estimate);
      if (d < best) {
        best = d;
        c.nearest_mode = i;
      }
    }
    c.nearest_classical_omega = modal.omegas[c.nearest_mode];
    const double lam = e.lambda_estimate;
    c.grid_resolution = std::max(std::sqrt(lam + dlambda) - e.omega_estimate,
                                 e.omega_estimate - std::sqrt(std::max(lam - dlambda, 0.0)));
    report.estimates.push_back(std::move(c));
  }
  return report;
}

}  // namespace quasim::qpe
