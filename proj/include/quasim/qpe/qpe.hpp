#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "quasim/fem/modal.hpp"
#include "quasim/qsim/circuit.hpp"
#include "quasim/qsim/sampling.hpp"

namespace quasim::qpe {

using fem::HermitianOperator;
using linalg::Complex;
using linalg::ComplexMatrix;

inline constexpr int kMaxAncillas = 12;
inline constexpr std::size_t kMaxOperatorDim = std::size_t{1} << 12;

/// Start from eigenvector `index` (ascending eigenvalue order) of the operator.
struct ExactEigenvector {
  std::size_t index = 0;
};
/// Equal-weight superposition of all physical eigenvectors.
struct UniformSuperposition {};
/// Caller-supplied amplitudes over the physical dimension; normalised on use.
struct CustomState {
  std::vector<double> amplitudes;
};
using InputState = std::variant<ExactEigenvector, UniformSuperposition, CustomState>;

struct QpeConfig {
  int n_ancilla = 8;
  /// t in U = exp(+iHt). Unset: chosen alias-free by choose_evolution_time.
  std::optional<double> evolution_time;
  std::uint64_t shots = 1000;
  std::uint64_t seed = 0;
  InputState input_state = ExactEigenvector{0};

  /// Throws CapacityError for an ancilla count outside [1, 12] and
  /// InvalidArgument for other bad values.
  void validate() const;
};

std::string describe(const InputState& s);
/// Parses "exact:<i>", "uniform" or "custom" (amplitudes supplied separately).
InputState parse_input_state(const std::string& text, std::vector<double> custom = {});

struct PhaseHistogram {
  int n_ancilla = 0;
  std::uint64_t shots = 0;
  qsim::Histogram entries;  // ancilla bitstring, most significant first
};

struct EigenEstimate {
  std::string bitstring;
  double phase = 0.0;            // [0, 1)
  double lambda_estimate = 0.0;  // omega^2
  double omega_estimate = 0.0;   // sqrt(max(lambda, 0))
  double weight = 0.0;           // fraction of shots
};

/// Operator padded to a power-of-two dimension (at least 2).
struct EmbeddedOperator {
  HermitianOperator op;
  std::size_t physical_dim = 0;
  double physical_bound = 0.0;          // Gershgorin bound of the unpadded operator
  std::optional<double> padding_value;  // set when rows were added

  int n_system_qubits() const;
  /// Upper bound on every eigenvalue, padding included.
  double lambda_upper() const { return padding_value.value_or(physical_bound); }
};

/// U = exp(+iHt) = V diag(exp(i lambda t)) V^T from the Jacobi eigensolution,
/// so eigenvalue lambda maps to phase lambda t / 2pi.
ComplexMatrix evolution_unitary(const HermitianOperator& h, double t);

/// Pads with diagonal entries at gershgorin_bound + 10% of its magnitude (1
/// when the bound is zero), strictly above every physical eigenvalue.
EmbeddedOperator embed_operator(const HermitianOperator& h);

/// Ancilla j (qubit n_system + j) controls U^(2^j); inverse QFT on the
/// ancillas. The system register holds qubits [0, n_system).
qsim::Circuit build_qpe_circuit(const ComplexMatrix& u, int n_ancilla);

/// t = 2 pi (1 - 2^-n) / lambda_upper: every lambda <= lambda_upper lands on
/// a phase below 1.
double choose_evolution_time(double lambda_upper, int n_ancilla);

/// Physical-dimension input vector for `cfg.input_state`, normalised.
std::vector<double> resolve_input_state(const HermitianOperator& physical, const InputState& state);

/// Exact pre-sampling distribution over ancilla outcomes (index = integer
/// value of the ancilla register). `h` must be embedded already; `physical_dim`
/// tells which leading rows the input state lives on.
std::vector<double> qpe_distribution(const HermitianOperator& h, std::size_t physical_dim, double t,
                                     int n_ancilla, const InputState& input);

/// Simulates the QPE circuit and samples the ancilla register. Uses
/// cfg.evolution_time when set, otherwise choose_evolution_time on the
/// embedded bound.
PhaseHistogram run_qpe(const HermitianOperator& h, const QpeConfig& cfg);

/// Bins with weight >= min_weight turned into eigenvalue estimates, sorted by
/// weight descending (bitstring ascending on ties).
std::vector<EigenEstimate> phases_to_frequencies(const PhaseHistogram& hist, double t, double min_weight);

struct ComparedEstimate {
  EigenEstimate estimate;
  double nearest_classical_omega = 0.0;
  std::size_t nearest_mode = 0;
  /// Largest |omega error| compatible with a one-step phase error.
  double grid_resolution = 0.0;
};

struct QpeReport {
  std::size_t n_dof = 0;
  int n_ancilla = 0;
  int n_system_qubits = 0;
  double evolution_time = 0.0;
  double lambda_resolution = 0.0;  // 2 pi / (t 2^n)
  std::optional<double> padding_value;
  std::string input_state;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  PhaseHistogram histogram;
  std::vector<double> classical_omegas;
  std::vector<ComparedEstimate> estimates;
};

/// reduce_generalized -> embed_operator -> (choose_evolution_time) -> run_qpe
/// -> phases_to_frequencies, each estimate paired with the nearest classical
/// frequency. Bins that can only come from padding rows are dropped.
QpeReport qpe_modal(const fem::FemMatrices& fem, const QpeConfig& cfg, double min_weight = 0.0);

}  // namespace quasim::qpe
