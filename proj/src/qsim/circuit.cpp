#include "quasim/qsim/circuit.hpp"

#include <algorithm>
#include <string>

namespace quasim::qsim {

double Angle::evaluate(std::span<const double> slot_values) const {
  double v = constant_;
  for (const SlotTerm& t : terms_) {
    if (t.slot >= slot_values.size())
      throw InvalidArgument("angle references slot " + std::to_string(t.slot) + " with no value");
    v += t.coefficient * slot_values[t.slot];
  }
  return v;
}

Angle Angle::scaled(double factor) const {
  Angle a(constant_ * factor);
  for (const SlotTerm& t : terms_) a.terms_.push_back({t.slot, t.coefficient * factor});
  return a;
}

std::string_view gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::Hadamard: return "H";
    case GateKind::PauliX: return "X";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    case GateKind::ControlledRY: return "CRY";
    case GateKind::ControlledPhase: return "CPHASE";
    case GateKind::DenseUnitary: return "DENSE";
  }
  return "?";
}

Gate::Gate(GateKind kind, std::vector<int> targets, std::vector<int> controls, Angle angle)
    : kind_(kind), targets_(std::move(targets)), controls_(std::move(controls)), angle_(std::move(angle)) {
  std::vector<int> all = targets_;
  all.insert(all.end(), controls_.begin(), controls_.end());
  for (int q : all)
    if (q < 0) throw InvalidArgument("negative qubit index in " + std::string(gate_name(kind_)));
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end())
    throw InvalidArgument("targets and controls of " + std::string(gate_name(kind_)) +
                          " must be distinct qubits");
}

Gate Gate::hadamard(int q) { return Gate(GateKind::Hadamard, {q}, {}, 0.0); }
Gate Gate::pauli_x(int q) { return Gate(GateKind::PauliX, {q}, {}, 0.0); }
Gate Gate::rx(int q, Angle a) { return Gate(GateKind::RX, {q}, {}, std::move(a)); }
Gate Gate::ry(int q, Angle a) { return Gate(GateKind::RY, {q}, {}, std::move(a)); }
Gate Gate::rz(int q, Angle a) { return Gate(GateKind::RZ, {q}, {}, std::move(a)); }
Gate Gate::cnot(int c, int t) { return Gate(GateKind::CNOT, {t}, {c}, 0.0); }
Gate Gate::controlled_ry(int c, int t, Angle a) {
  return Gate(GateKind::ControlledRY, {t}, {c}, std::move(a));
}
Gate Gate::controlled_phase(int c, int t, Angle a) {
  return Gate(GateKind::ControlledPhase, {t}, {c}, std::move(a));
}

Gate Gate::dense(std::vector<int> targets, ComplexMatrix matrix, std::vector<int> controls) {
  return dense(std::move(targets), std::make_shared<const ComplexMatrix>(std::move(matrix)),
               std::move(controls));
}

Gate Gate::dense(std::vector<int> targets, std::shared_ptr<const ComplexMatrix> matrix,
                 std::vector<int> controls) {
  if (!matrix) throw InvalidArgument("dense gate without matrix");
  if (targets.size() >= 30) throw CapacityError("dense gate acts on too many qubits");
  const std::size_t dim = std::size_t{1} << targets.size();
  if (matrix->rows() != dim || matrix->cols() != dim)
    throw InvalidArgument("dense gate matrix is " + std::to_string(matrix->rows()) + "x" +
                          std::to_string(matrix->cols()) + ", expected " + std::to_string(dim));
  const double defect = linalg::unitarity_defect(*matrix);
  if (!(defect <= 1e-10))
    throw InvalidArgument("dense gate matrix is not unitary (max |U^dagger U - I| = " +
                          std::to_string(defect) + ")");
  Gate g(GateKind::DenseUnitary, std::move(targets), std::move(controls), 0.0);
  g.matrix_ = std::move(matrix);
  return g;
}

const ComplexMatrix& Gate::matrix() const {
  if (!matrix_) throw InvalidArgument("gate " + std::string(gate_name(kind_)) + " has no dense matrix");
  return *matrix_;
}

int Gate::max_qubit() const {
  int m = -1;
  for (int q : targets_) m = std::max(m, q);
  for (int q : controls_) m = std::max(m, q);
  return m;
}

Gate Gate::adjoint() const {
  Gate g = *this;
  switch (kind_) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::ControlledRY:
    case GateKind::ControlledPhase:
      g.angle_ = angle_.scaled(-1.0);
      break;
    case GateKind::DenseUnitary:
      g.matrix_ = std::make_shared<const ComplexMatrix>(linalg::adjoint(*matrix_));
      break;
    default:
      break;  // H, X, CNOT are involutions
  }
  return g;
}

Gate Gate::with_angle(Angle angle) const {
  Gate g = *this;
  g.angle_ = std::move(angle);
  return g;
}

Gate Gate::offset_qubits(int offset) const {
  Gate g = *this;
  for (int& q : g.targets_) q += offset;
  for (int& q : g.controls_) q += offset;
  return g;
}

Gate Gate::remap_slots(std::span<const SlotId> mapping) const {
  if (!angle_.parameterized()) return *this;
  Angle a(angle_.constant());
  for (const SlotTerm& t : angle_.terms()) a.add_term(mapping[t.slot], t.coefficient);
  return with_angle(std::move(a));
}

Circuit::Circuit(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 0) throw InvalidArgument("negative qubit count");
}

SlotId Circuit::declare_slot(std::string_view name) {
  if (auto id = find_slot(name)) return *id;
  slots_.emplace_back(name);
  return slots_.size() - 1;
}

std::optional<SlotId> Circuit::find_slot(std::string_view name) const {
  for (SlotId i = 0; i < slots_.size(); ++i)
    if (slots_[i] == name) return i;
  return std::nullopt;
}

Circuit& Circuit::add(Gate gate) {
  if (gate.max_qubit() >= n_qubits_)
    throw InvalidArgument("gate " + std::string(gate_name(gate.kind())) + " touches qubit " +
                          std::to_string(gate.max_qubit()) + " of a " + std::to_string(n_qubits_) +
                          "-qubit circuit");
  for (const SlotTerm& t : gate.angle().terms())
    if (t.slot >= slots_.size())
      throw InvalidArgument("gate references undeclared parameter slot " + std::to_string(t.slot));
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit& Circuit::swap(int a, int b) {
  cnot(a, b);
  cnot(b, a);
  return cnot(a, b);
}

Circuit& Circuit::append(const Circuit& other, int qubit_offset) {
  if (qubit_offset < 0 || other.n_qubits_ + qubit_offset > n_qubits_)
    throw InvalidArgument("appended circuit on " + std::to_string(other.n_qubits_) + " qubits at offset " +
                          std::to_string(qubit_offset) + " does not fit in " + std::to_string(n_qubits_));
  std::vector<SlotId> mapping;
  mapping.reserve(other.slots_.size());
  for (const std::string& name : other.slots_) mapping.push_back(declare_slot(name));
  for (const Gate& g : other.gates_) add(g.offset_qubits(qubit_offset).remap_slots(mapping));
  return *this;
}

Circuit Circuit::adjoint() const {
  Circuit c(n_qubits_);
  c.slots_ = slots_;
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) c.gates_.push_back(it->adjoint());
  return c;
}

std::vector<double> Circuit::resolve(const Bindings& bindings) const {
  std::vector<double> values;
  values.reserve(slots_.size());
  for (const std::string& name : slots_) {
    auto it = bindings.find(name);
    if (it == bindings.end()) throw InvalidArgument("parameter slot '" + name + "' is unbound");
    values.push_back(it->second);
  }
  return values;
}

}  // namespace quasim::qsim
