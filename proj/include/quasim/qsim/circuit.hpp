#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quasim/linalg/matrix.hpp"

namespace quasim::qsim {

using linalg::Complex;
using linalg::ComplexMatrix;

/// Index of a named parameter slot inside one Circuit.
using SlotId = std::size_t;

/// Slot name -> value.
using Bindings = std::map<std::string, double, std::less<>>;

struct SlotTerm {
  SlotId slot;
  double coefficient;
};

/// Rotation angle `constant + sum(coefficient * slot)`. A plain number is an
/// Angle with no terms.
class Angle {
 public:
  Angle(double constant = 0.0) : constant_(constant) {}  // NOLINT(google-explicit-constructor)

  static Angle slot(SlotId id, double coefficient = 1.0, double constant = 0.0) {
    Angle a(constant);
    a.terms_.push_back({id, coefficient});
    return a;
  }

  Angle& add_term(SlotId id, double coefficient) {
    terms_.push_back({id, coefficient});
    return *this;
  }

  double constant() const noexcept { return constant_; }
  std::span<const SlotTerm> terms() const noexcept { return terms_; }
  bool parameterized() const noexcept { return !terms_.empty(); }

  double evaluate(std::span<const double> slot_values) const;

  Angle scaled(double factor) const;
  Angle shifted(double delta) const {
    Angle a = *this;
    a.constant_ += delta;
    return a;
  }

 private:
  double constant_;
  std::vector<SlotTerm> terms_;
};

enum class GateKind {
  Hadamard,
  PauliX,
  RX,
  RY,
  RZ,
  CNOT,
  ControlledRY,
  ControlledPhase,
  DenseUnitary,
};

std::string_view gate_name(GateKind kind);

/// One gate of a circuit. Built through the named factories, which enforce
/// that targets and controls are disjoint and that dense matrices are unitary.
/// Rotations follow R_P(theta) = exp(-i theta P / 2); the controlled phase
/// applies diag(1, e^{i phi}) to the target.
class Gate {
 public:
  static Gate hadamard(int q);
  static Gate pauli_x(int q);
  static Gate rx(int q, Angle angle);
  static Gate ry(int q, Angle angle);
  static Gate rz(int q, Angle angle);
  static Gate cnot(int control, int target);
  static Gate controlled_ry(int control, int target, Angle angle);
  static Gate controlled_phase(int control, int target, Angle angle);
  /// `targets[0]` is the least-significant bit of the matrix index.
  static Gate dense(std::vector<int> targets, ComplexMatrix matrix, std::vector<int> controls = {});
  /// Same, sharing an already validated matrix.
  static Gate dense(std::vector<int> targets, std::shared_ptr<const ComplexMatrix> matrix,
                    std::vector<int> controls = {});

  GateKind kind() const noexcept { return kind_; }
  std::span<const int> targets() const noexcept { return targets_; }
  std::span<const int> controls() const noexcept { return controls_; }
  const Angle& angle() const noexcept { return angle_; }
  const ComplexMatrix& matrix() const;
  bool parameterized() const noexcept { return angle_.parameterized(); }
  bool is_rotation() const noexcept {
    return kind_ == GateKind::RX || kind_ == GateKind::RY || kind_ == GateKind::RZ;
  }

  /// Largest qubit index touched.
  int max_qubit() const;

  Gate adjoint() const;
  Gate with_angle(Angle angle) const;
  Gate offset_qubits(int offset) const;
  Gate remap_slots(std::span<const SlotId> mapping) const;

 private:
  Gate(GateKind kind, std::vector<int> targets, std::vector<int> controls, Angle angle);

  GateKind kind_;
  std::vector<int> targets_;
  std::vector<int> controls_;
  Angle angle_;
  std::shared_ptr<const ComplexMatrix> matrix_;
};

/// Ordered gate program over `n_qubits` with named parameter slots. One slot
/// may feed any number of gates.
class Circuit {
 public:
  explicit Circuit(int n_qubits);

  int n_qubits() const noexcept { return n_qubits_; }
  std::span<const Gate> gates() const noexcept { return gates_; }
  const std::vector<std::string>& slots() const noexcept { return slots_; }

  /// Returns the id of `name`, declaring it on first use.
  SlotId declare_slot(std::string_view name);
  std::optional<SlotId> find_slot(std::string_view name) const;

  Circuit& add(Gate gate);
  Circuit& h(int q) { return add(Gate::hadamard(q)); }
  Circuit& x(int q) { return add(Gate::pauli_x(q)); }
  Circuit& rx(int q, Angle a) { return add(Gate::rx(q, std::move(a))); }
  Circuit& ry(int q, Angle a) { return add(Gate::ry(q, std::move(a))); }
  Circuit& rz(int q, Angle a) { return add(Gate::rz(q, std::move(a))); }
  Circuit& cnot(int c, int t) { return add(Gate::cnot(c, t)); }
  Circuit& cry(int c, int t, Angle a) { return add(Gate::controlled_ry(c, t, std::move(a))); }
  Circuit& cphase(int c, int t, Angle a) { return add(Gate::controlled_phase(c, t, std::move(a))); }
  /// SWAP as three CNOTs.
  Circuit& swap(int a, int b);

  /// Appends `other` with its qubits shifted by `qubit_offset`; slots are
  /// matched by name.
  Circuit& append(const Circuit& other, int qubit_offset = 0);

  /// Reversed gate order, each gate replaced by its adjoint.
  Circuit adjoint() const;

  /// Slot values in slot-id order. Throws InvalidArgument on an unbound slot.
  std::vector<double> resolve(const Bindings& bindings) const;

 private:
  int n_qubits_;
  std::vector<Gate> gates_;
  std::vector<std::string> slots_;
};

}  // namespace quasim::qsim
