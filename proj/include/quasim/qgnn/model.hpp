#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <vector>

#include "quasim/qgnn/mesh_graph.hpp"
#include "quasim/qsim/circuit.hpp"

namespace quasim::qgnn {

/// Min/max feature scaler. `scale` maps [f_min, f_max] onto [0, 1].
struct Scaler {
  double f_min = 0.0;
  double f_max = 1.0;

  double range() const noexcept { return f_max - f_min; }
  double scale(double f) const noexcept { return (f - f_min) / range(); }
  double invert(double x) const noexcept { return f_min + x * range(); }
  /// Temperature difference to [-1, 1]: clamp(delta / range, -1, 1).
  double scale_sym(double delta) const noexcept;
};

/// Bounds over every value of every frame, each side widened by 5% of the
/// spread. Throws InvalidArgument for empty or constant data.
Scaler fit_scaler(std::span<const NodeFrame> frames);

/// Trainable parameters shared by every vertex of one degree.
struct DegreeParameters {
  double theta_n = 0.0;  // neighbor rotation offset (rad)
  double theta_e = 0.0;  // root-neighbor entangling angle (rad)
  double gamma = 0.0;    // entangling angle per unit edge feature (rad)
  double decode_gain = 1.0;
  double decode_bias = 0.0;

  friend bool operator==(const DegreeParameters&, const DegreeParameters&) = default;
};

/// Degree -> parameter set. Also used for gradients.
using ParameterMap = std::map<std::size_t, DegreeParameters>;

struct QgnnModel {
  Scaler scaler;
  ParameterMap parameters;

  bool supports(std::size_t degree) const { return parameters.contains(degree); }
  std::vector<std::size_t> degree_set() const;
  void validate() const;

  /// theta_n, theta_e, gamma ~ uniform[-0.1, 0.1] from Rng(seed), drawn in
  /// ascending degree order; decode_gain = 1, decode_bias = 0.
  static QgnnModel initialize(std::span<const std::size_t> degree_set, Scaler scaler, std::uint64_t seed);
};

/// Slot names used by every submodel circuit.
inline constexpr const char* kSlotThetaN = "theta_n";
inline constexpr const char* kSlotThetaE = "theta_e";
inline constexpr const char* kSlotGamma = "gamma";

struct SubmodelCircuit {
  qsim::Circuit circuit;
  std::vector<double> slot_values;  // theta_n, theta_e, gamma
};

/// Star-graph circuit on d+1 qubits (qubit 0 = root):
///   RY(pi * x_root) on 0,
///   RY(pi * x_rel_k + theta_n) on k = 1..d,
///   CRY(theta_e + gamma * eps_k) control k, target 0.
/// All rotations on the root share the Y axis and commute, so the state does
/// not depend on the order of the (x_rel, eps) pairs.
SubmodelCircuit build_submodel_circuit(std::size_t degree, const DegreeParameters& params, double x_root,
                                       std::span<const double> x_rel, std::span<const double> eps);

/// One vertex update. Root enters as scale(f_root); neighbor k as
/// x_rel = (scale_sym(f_k - f_root) + 1) / 2, i.e. RY angle pi * x_rel + theta_n.
/// z = <Z_0>; prediction = invert((1 - (decode_gain * z + decode_bias)) / 2).
double submodel_predict(const QgnnModel& model, std::size_t degree, double f_root,
                        std::span<const double> f_neighbors, std::span<const double> eps);

/// Applies the matching submodel to every vertex; output t = input t + 1.
/// Throws UnsupportedDegree naming every vertex whose degree has no submodel.
NodeFrame model_predict(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& frame);

/// (1/|V|) sum_v (label_v - prediction_v)^2.
double loss_mse(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& input, const NodeFrame& label);

struct LossAndGradient {
  double loss = 0.0;
  ParameterMap gradient;  // zero entries for every model degree
};

/// Loss and its gradient: circuit derivatives by parameter shift, chained
/// through the affine decode. Vertex contributions are reduced in vertex order.
LossAndGradient grad_loss(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& input,
                          const NodeFrame& label);

/// One (graph, frame_t, frame_t+1) training example.
struct Transition {
  std::shared_ptr<const MeshGraph> graph;
  NodeFrame input;
  NodeFrame label;
};

/// Mean over transitions of loss and gradient.
LossAndGradient dataset_loss_and_gradient(const QgnnModel& model, std::span<const Transition> data);
double dataset_loss(const QgnnModel& model, std::span<const Transition> data);

}  // namespace quasim::qgnn
