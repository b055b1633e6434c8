#include "quasim/qgnn/model.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>

#include "quasim/error.hpp"
#include "quasim/qsim/gradient.hpp"
#include "quasim/qsim/rng.hpp"

namespace quasim::qgnn {
namespace {

constexpr double kPi = std::numbers::pi;

// Exceptions must not escape an OpenMP region; the first one is kept and
// rethrown after the loop.
class ParallelErrors {
 public:
  template <typename F>
  void run(F&& f) noexcept {
    try {
      f();
    } catch (...) {
      std::lock_guard lock(mutex_);
      if (!first_) first_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (first_) std::rethrow_exception(first_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr first_;
};

struct VertexEval {
  double prediction = 0.0;
  double z = 0.0;
  double dz[3] = {0.0, 0.0, 0.0};  // d z / d(theta_n, theta_e, gamma)
};

const DegreeParameters& params_for(const QgnnModel& model, std::size_t degree) {
  auto it = model.parameters.find(degree);
  if (it == model.parameters.end())
    throw UnsupportedDegree("model has no submodel for degree " + std::to_string(degree), {});
  return it->second;
}

void check_frame(const MeshGraph& graph, const NodeFrame& frame, const char* what) {
  if (frame.values.size() != graph.n_vertices())
    throw InvalidArgument(std::string(what) + " frame has " + std::to_string(frame.values.size()) +
                          " values, graph has " + std::to_string(graph.n_vertices()) + " vertices");
  for (double v : frame.values)
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " frame has non-finite values");
}

void check_degrees(const QgnnModel& model, const MeshGraph& graph) {
  std::vector<std::size_t> bad;
  for (std::size_t v = 0; v < graph.n_vertices(); ++v)
    if (!model.supports(graph.degree(v))) bad.push_back(v);
  if (bad.empty()) return;
  std::string msg = "unsupported vertex degree at vertices";
  for (std::size_t i = 0; i < bad.size() && i < 16; ++i)
    msg += " " + std::to_string(bad[i]) + "(d=" + std::to_string(graph.degree(bad[i])) + ")";
  if (bad.size() > 16) msg += " ...";
  throw UnsupportedDegree(msg, std::move(bad));
}

// Evaluates the submodel of one vertex; with `with_gradient` also the circuit
// derivatives.
VertexEval evaluate(const QgnnModel& model, std::size_t degree, double f_root, std::span<const double> f_neighbors,
                    std::span<const double> eps, bool with_gradient) {
  const DegreeParameters& p = params_for(model, degree);
  if (f_neighbors.size() != degree || eps.size() != degree)
    throw InvalidArgument("submodel of degree " + std::to_string(degree) + " needs " + std::to_string(degree) +
                          " neighbor values and edge features");
  if (!std::isfinite(f_root)) throw InvalidArgument("non-finite root feature");
  std::vector<double> x_rel(degree);
  for (std::size_t k = 0; k < degree; ++k) {
    if (!std::isfinite(f_neighbors[k]) || !std::isfinite(eps[k])) throw InvalidArgument("non-finite neighbor input");
    x_rel[k] = 0.5 * (model.scaler.scale_sym(f_neighbors[k] - f_root) + 1.0);
  }
  const SubmodelCircuit sc = build_submodel_circuit(degree, p, model.scaler.scale(f_root), x_rel, eps);
  const qsim::Observable z0 = qsim::Observable::z(0, static_cast<int>(degree + 1));
  const qsim::Statevector zero = qsim::Statevector::basis(static_cast<int>(degree + 1), 0);

  VertexEval out;
  if (with_gradient) {
    const qsim::ValueAndGradient vg = qsim::expectation_and_gradient(sc.circuit, sc.slot_values, z0, zero);
    out.z = vg.value;
    for (int i = 0; i < 3; ++i) out.dz[i] = vg.gradient[static_cast<std::size_t>(i)];
  } else {
    out.z = qsim::expectation(qsim::run_circuit(sc.circuit, std::span<const double>(sc.slot_values), zero), z0);
  }
  out.prediction = model.scaler.invert(0.5 * (1.0 - (p.decode_gain * out.z + p.decode_bias)));
  return out;
}

VertexEval evaluate_vertex(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& frame, std::size_t v,
                           bool with_gradient) {
  const auto nb = graph.neighbors(v);
  std::vector<double> f_nb(nb.size());
  for (std::size_t k = 0; k < nb.size(); ++k) f_nb[k] = frame.values[nb[k]];
  return evaluate(model, nb.size(), frame.values[v], f_nb, graph.neighbor_features(v), with_gradient);
}

ParameterMap zero_like(const QgnnModel& model) {
  ParameterMap g;
  for (const auto& [d, _] : model.parameters) g[d] = DegreeParameters{0, 0, 0, 0, 0};
  return g;
}

}  // namespace

double Scaler::scale_sym(double delta) const noexcept { return std::clamp(delta / range(), -1.0, 1.0); }

Scaler fit_scaler(std::span<const NodeFrame> frames) {
  double lo = INFINITY, hi = -INFINITY;
  for (const NodeFrame& f : frames) {
    for (double v : f.values) {
      if (!std::isfinite(v)) throw InvalidArgument("non-finite value in dataset");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo <= hi)) throw InvalidArgument("cannot fit a scaler to an empty dataset");
  if (hi == lo) throw InvalidArgument("degenerate scaler: every dataset value equals " + std::to_string(lo));
  const double margin = 0.05 * (hi - lo);
  return {lo - margin, hi + margin};
}

std::vector<std::size_t> QgnnModel::degree_set() const {
  std::vector<std::size_t> d;
  for (const auto& [deg, _] : parameters) d.push_back(deg);
  return d;
}

void QgnnModel::validate() const {
  if (!(scaler.f_max > scaler.f_min) || !std::isfinite(scaler.f_min) || !std::isfinite(scaler.f_max))
    throw InvalidArgument("model scaler needs finite f_max > f_min");
  if (parameters.empty()) throw InvalidArgument("model has no submodels");
  for (const auto& [d, p] : parameters) {
    if (d > kMaxSupportedDegree) throw InvalidArgument("model degree " + std::to_string(d) + " above supported maximum");
    for (double v : {p.theta_n, p.theta_e, p.gamma, p.decode_gain, p.decode_bias})
      if (!std::isfinite(v)) throw InvalidArgument("model has non-finite parameters");
  }
}

QgnnModel QgnnModel::initialize(std::span<const std::size_t> degree_set, Scaler scaler, std::uint64_t seed) {
  QgnnModel m;
  m.scaler = scaler;
  std::vector<std::size_t> degrees(degree_set.begin(), degree_set.end());
  std::sort(degrees.begin(), degrees.end());
  Rng rng(seed);
  for (std::size_t d : degrees) {
    if (m.parameters.contains(d)) continue;
    DegreeParameters p;
    p.theta_n = rng.uniform(-0.1, 0.1);
    p.theta_e = rng.uniform(-0.1, 0.1);
    p.gamma = rng.uniform(-0.1, 0.1);
    m.parameters[d] = p;
  }
  m.validate();
  return m;
}

SubmodelCircuit build_submodel_circuit(std::size_t degree, const DegreeParameters& params, double x_root,
                                       std::span<const double> x_rel, std::span<const double> eps) {
  if (degree > kMaxSupportedDegree)
    throw UnsupportedDegree("degree " + std::to_string(degree) + " exceeds supported maximum", {});
  if (x_rel.size() != degree || eps.size() != degree)
    throw InvalidArgument("submodel inputs must have one entry per neighbor");
  SubmodelCircuit sc{qsim::Circuit(static_cast<int>(degree + 1)), {params.theta_n, params.theta_e, params.gamma}};
  qsim::Circuit& c = sc.circuit;
  const qsim::SlotId theta_n = c.declare_slot(kSlotThetaN);
  const qsim::SlotId theta_e = c.declare_slot(kSlotThetaE);
  const qsim::SlotId gamma = c.declare_slot(kSlotGamma);

  c.ry(0, kPi * x_root);
  for (std::size_t k = 0; k < degree; ++k)
    c.ry(static_cast<int>(k + 1), qsim::Angle::slot(theta_n, 1.0, kPi * x_rel[k]));
  for (std::size_t k = 0; k < degree; ++k)
    c.cry(static_cast<int>(k + 1), 0, qsim::Angle::slot(theta_e).add_term(gamma, eps[k]));
  return sc;
}

double submodel_predict(const QgnnModel& model, std::size_t degree, double f_root, std::span<const double> f_neighbors,
                        std::span<const double> eps) {
  return evaluate(model, degree, f_root, f_neighbors, eps, false).prediction;
}

NodeFrame model_predict(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& frame) {
  check_frame(graph, frame, "input");
  check_degrees(model, graph);
  NodeFrame out{frame.t + 1, std::vector<double>(graph.n_vertices())};
  const std::int64_t n = static_cast<std::int64_t>(graph.n_vertices());
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t v = 0; v < n; ++v) {
    errors.run([&] {
      out.values[static_cast<std::size_t>(v)] =
          evaluate_vertex(model, graph, frame, static_cast<std::size_t>(v), false).prediction;
    });
  }
  errors.rethrow();
  return out;
}

double loss_mse(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& input, const NodeFrame& label) {
  check_frame(graph, label, "label");
  const NodeFrame pred = model_predict(model, graph, input);
  double s = 0.0;
  for (std::size_t v = 0; v < pred.values.size(); ++v) {
    const double r = label.values[v] - pred.values[v];
    s += r * r;
  }
  return s / static_cast<double>(pred.values.size());
}

LossAndGradient grad_loss(const QgnnModel& model, const MeshGraph& graph, const NodeFrame& input,
                          const NodeFrame& label) {
  Transition t{std::shared_ptr<const MeshGraph>(&graph, [](const MeshGraph*) {}), input, label};
  return dataset_loss_and_gradient(model, std::span<const Transition>(&t, 1));
}

LossAndGradient dataset_loss_and_gradient(const QgnnModel& model, std::span<const Transition> data) {
  if (data.empty()) throw InvalidArgument("empty training data");
  // Flatten (transition, vertex) work items so one parallel loop covers all.
  std::vector<std::pair<std::size_t, std::size_t>> items;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Transition& tr = data[i];
    if (!tr.graph) throw InvalidArgument("transition without graph");
    check_frame(*tr.graph, tr.input, "input");
    check_frame(*tr.graph, tr.label, "label");
    check_degrees(model, *tr.graph);
    for (std::size_t v = 0; v < tr.graph->n_vertices(); ++v) items.emplace_back(i, v);
  }

  std::vector<VertexEval> evals(items.size());
  const std::int64_t n_items = static_cast<std::int64_t>(items.size());
  ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t k = 0; k < n_items; ++k) {
    errors.run([&] {
      const auto [i, v] = items[static_cast<std::size_t>(k)];
      evals[static_cast<std::size_t>(k)] = evaluate_vertex(model, *data[i].graph, data[i].input, v, true);
    });
  }
  errors.rethrow();

  // Ordered reduction keeps results bit-identical for any thread count.
  LossAndGradient out;
  out.gradient = zero_like(model);
  const double range = model.scaler.range();
  for (std::size_t k = 0; k < items.size(); ++k) {
    const auto [i, v] = items[k];
    const Transition& tr = data[i];
    const double weight = 1.0 / (static_cast<double>(tr.graph->n_vertices()) * static_cast<double>(data.size()));
    const VertexEval& e = evals[k];
    const double residual = e.prediction - tr.label.values[v];
    out.loss += weight * residual * residual;

    const std::size_t d = tr.graph->degree(v);
    const DegreeParameters& p = model.parameters.at(d);
    DegreeParameters& g = out.gradient.at(d);
    // d pred / d z = -range/2 * gain; d pred / d gain = -range/2 * z; d pred / d bias = -range/2.
    const double common = 2.0 * weight * residual * (-0.5 * range);
    g.theta_n += common * p.decode_gain * e.dz[0];
    g.theta_e += common * p.decode_gain * e.dz[1];
    g.gamma += common * p.decode_gain * e.dz[2];
    g.decode_gain += common * e.z;
    g.decode_bias += common;
  }
  return out;
}

double dataset_loss(const QgnnModel& model, std::span<const Transition> data) {
  if (data.empty()) throw InvalidArgument("empty evaluation data");
  double total = 0.0;
  for (const Transition& tr : data) total += loss_mse(model, *tr.graph, tr.input, tr.label);
  return total / static_cast<double>(data.size());
}

}  // namespace quasim::qgnn
