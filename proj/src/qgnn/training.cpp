#include "quasim/qgnn/training.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quasim/error.hpp"
#include "quasim/qsim/rng.hpp"

namespace quasim::qgnn {
namespace {

// Applies `f(param, grad, velocity)` to the five parameters of every degree.
template <typename F>
void for_each_parameter(ParameterMap& params, const ParameterMap& grads, ParameterMap& velocity, F&& f) {
  for (auto& [d, p] : params) {
    const DegreeParameters& g = grads.at(d);
    DegreeParameters& v = velocity[d];
    f(p.theta_n, g.theta_n, v.theta_n);
    f(p.theta_e, g.theta_e, v.theta_e);
    f(p.gamma, g.gamma, v.gamma);
    f(p.decode_gain, g.decode_gain, v.decode_gain);
    f(p.decode_bias, g.decode_bias, v.decode_bias);
  }
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw InvalidArgument("epochs must be at least 1");
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate))
    throw InvalidArgument("learning rate must be finite and non-negative");
  if (optimizer == Optimizer::Momentum && !(momentum >= 0.0 && momentum < 1.0))
    throw InvalidArgument("momentum must lie in [0, 1)");
}

TrainResult train(QgnnModel model, std::span<const Transition> data, const TrainConfig& cfg) {
  cfg.validate();
  model.validate();
  if (data.empty()) throw InvalidArgument("training needs at least one transition");

  TrainReport report;
  report.losses.reserve(cfg.epochs + 1);
  ParameterMap velocity;
  for (const auto& [d, _] : model.parameters) velocity[d] = DegreeParameters{0, 0, 0, 0, 0};
  const double beta = cfg.optimizer == Optimizer::Momentum ? cfg.momentum : 0.0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const LossAndGradient lg = dataset_loss_and_gradient(model, data);
    if (!std::isfinite(lg.loss))
      throw NumericalError("training diverged at epoch " + std::to_string(epoch) + " (loss is not finite)");
    report.losses.push_back(lg.loss);
    for_each_parameter(model.parameters, lg.gradient, velocity, [&](double& p, double g, double& v) {
      v = beta * v + g;
      p -= cfg.learning_rate * v;
    });
  }
  const double final_loss = dataset_loss(model, data);
  if (!std::isfinite(final_loss))
    throw NumericalError("training diverged at epoch " + std::to_string(cfg.epochs) + " (loss is not finite)");
  report.losses.push_back(final_loss);
  return {std::move(model), std::move(report)};
}

std::vector<NodeFrame> rollout(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& frame_0,
                               std::size_t steps) {
  if (steps < 1) throw InvalidArgument("rollout needs at least one step");
  const double limit = 10.0 * model.scaler.range();
  std::vector<NodeFrame> frames;
  frames.reserve(steps);
  NodeFrame current = frame_0;
  for (std::size_t s = 0; s < steps; ++s) {
    current = model_predict(model, graph, current);
    for (double v : current.values)
      if (!std::isfinite(v) || std::abs(v) > limit)
        throw NumericalError("rollout diverged at step " + std::to_string(s + 1));
    frames.push_back(current);
  }
  return frames;
}

TransferReport transfer_evaluate(const QgnnModel& model, const MeshGraph& graph, std::span<const NodeFrame> frames) {
  if (frames.size() < 2) throw InvalidArgument("transfer evaluation needs at least two frames");
  TransferReport r;
  for (std::size_t i = 0; i + 1 < frames.size(); ++i)
    r.per_pair_mse.push_back(loss_mse(model, graph, frames[i], frames[i + 1]));
  double s = 0.0;
  for (double m : r.per_pair_mse) s += m;
  r.mean_mse = s / static_cast<double>(r.per_pair_mse.size());
  return r;
}

double permutation_deviation(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& frame,
                             std::size_t trials, std::uint64_t seed) {
  if (frame.values.size() != graph.n_vertices()) throw InvalidArgument("frame does not match graph");
  if (graph.n_vertices() == 0) return 0.0;
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t v = rng.index(graph.n_vertices());
    const auto nb = graph.neighbors(v);
    const auto eps = graph.neighbor_features(v);
    std::vector<double> f(nb.size()), e(eps.begin(), eps.end());
    for (std::size_t k = 0; k < nb.size(); ++k) f[k] = frame.values[nb[k]];
    const double base = submodel_predict(model, nb.size(), frame.values[v], f, e);
    for (std::size_t k = f.size(); k > 1; --k) {
      const std::size_t j = rng.index(k);
      std::swap(f[k - 1], f[j]);
      std::swap(e[k - 1], e[j]);
    }
    const double shuffled = submodel_predict(model, nb.size(), frame.values[v], f, e);
    worst = std::max(worst, std::abs(shuffled - base));
  }
  return worst;
}

}  // namespace quasim::qgnn
