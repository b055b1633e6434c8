#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "quasim/qgnn/model.hpp"

namespace quasim::qgnn {

enum class Optimizer { PlainGradientDescent, Momentum };

struct TrainConfig {
  std::size_t epochs = 150;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::PlainGradientDescent;
  double momentum = 0.9;  // used by Optimizer::Momentum

  void validate() const;
};

struct TrainReport {
  /// losses[e] is the full-batch loss before the update of epoch e;
  /// losses[epochs] is the loss of the returned model.
  std::vector<double> losses;

  double initial_loss() const { return losses.front(); }
  double final_loss() const { return losses.back(); }
};

struct TrainResult {
  QgnnModel model;
  TrainReport report;
};

/// Full-batch gradient descent over every transition. Deterministic: the
/// gradient reduction is ordered and `cfg.seed` is only used by callers that
/// initialise the model (QgnnModel::initialize). Throws NumericalError naming
/// the epoch when the loss stops being finite.
TrainResult train(QgnnModel model, std::span<const Transition> data, const TrainConfig& cfg);

/// Feeds each prediction back in as the next input. Returns `steps` frames
/// (frame_0 excluded). Throws NumericalError with the step index when a value
/// leaves +-10x the scaler range.
std::vector<NodeFrame> rollout(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& frame_0,
                               std::size_t steps);

struct TransferReport {
  std::vector<double> per_pair_mse;
  double mean_mse = 0.0;
};

/// One-step MSE over consecutive frames on a graph the model was not trained
/// on. Throws UnsupportedDegree when the graph has degrees outside the model.
TransferReport transfer_evaluate(const QgnnModel& model, const MeshGraph& graph, std::span<const NodeFrame> frames);

/// Largest change in a vertex prediction when its (neighbor, edge feature)
/// pairs are shuffled, over `trials` random shuffles of random vertices.
double permutation_deviation(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& frame,
                             std::size_t trials, std::uint64_t seed);

}  // namespace quasim::qgnn
