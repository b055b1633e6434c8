#include "quasim/jobs/jobs.hpp"

#include <climits>

#include "quasim/error.hpp"
#include "quasim/qgnn/training.hpp"

namespace quasim::jobs {

std::optional<JobKind> parse_job_kind(std::string_view name) {
  if (name == "modal") return JobKind::Modal;
  if (name == "qpe") return JobKind::Qpe;
  if (name == "qgnn_predict") return JobKind::QgnnPredict;
  return std::nullopt;
}

const char* job_kind_name(JobKind kind) {
  switch (kind) {
    case JobKind::Modal: return "modal";
    case JobKind::Qpe: return "qpe";
    case JobKind::QgnnPredict: return "qgnn_predict";
  }
  return "?";
}

ModalRequest parse_modal_request(const Json& payload) {
  ModalRequest req;
  req.fem = io::fem_from_json(payload, {"mode_shapes"});
  if (payload.contains("mode_shapes")) {
    if (!payload["mode_shapes"].is_boolean()) throw InvalidArgument("'mode_shapes' must be a boolean");
    req.mode_shapes = payload["mode_shapes"].get<bool>();
  }
  return req;
}

QpeRequest parse_qpe_request(const Json& payload, std::uint64_t seed) {
  QpeRequest req;
  req.fem = io::fem_from_json(payload,
                              {"n_ancilla", "shots", "input_state", "amplitudes", "evolution_time", "min_weight"});
  qpe::QpeConfig& cfg = req.cfg;
  cfg.seed = seed;
  if (payload.contains("n_ancilla")) {
    const std::size_t n = io::get_count(payload, "n_ancilla");
    cfg.n_ancilla = n > INT_MAX ? INT_MAX : static_cast<int>(n);
  }
  if (payload.contains("shots")) cfg.shots = io::get_count(payload, "shots");
  if (payload.contains("evolution_time")) cfg.evolution_time = io::get_number(payload, "evolution_time");
  if (payload.contains("min_weight")) req.min_weight = io::get_number(payload, "min_weight");
  if (payload.contains("input_state")) {
    if (!payload["input_state"].is_string()) throw InvalidArgument("'input_state' must be a string");
    std::vector<double> amps;
    if (payload.contains("amplitudes")) amps = io::get_numbers(payload, "amplitudes");
    cfg.input_state = qpe::parse_input_state(payload["input_state"].get<std::string>(), std::move(amps));
  } else if (payload.contains("amplitudes")) {
    throw InvalidArgument("'amplitudes' needs input_state \"custom\"");
  }
  cfg.validate();
  if (!(req.min_weight >= 0.0 && req.min_weight <= 1.0)) throw InvalidArgument("min_weight must lie in [0, 1]");
  if (req.fem.n_dof() > qpe::kMaxOperatorDim)
    throw CapacityError("qubit cap: " + std::to_string(req.fem.n_dof()) + " DOF needs more than 12 system qubits");
  if (const auto* e = std::get_if<qpe::ExactEigenvector>(&cfg.input_state); e && e->index >= req.fem.n_dof())
    throw InvalidArgument("eigenvector index " + std::to_string(e->index) + " out of range");
  if (const auto* c = std::get_if<qpe::CustomState>(&cfg.input_state); c && c->amplitudes.size() != req.fem.n_dof())
    throw InvalidArgument("custom amplitudes need one entry per DOF");
  return req;
}

PredictRequest parse_predict_request(const Json& payload) {
  io::reject_unknown_keys(payload, {"format_version", "model", "nx", "ny", "frame", "steps"}, "qgnn_predict payload");
  io::check_format_version(payload, "qgnn_predict payload");
  PredictRequest req;
  req.model = io::model_from_json(io::require(payload, "model"));
  const std::size_t nx = io::get_count(payload, "nx");
  const std::size_t ny = io::get_count(payload, "ny");
  req.graph = std::make_shared<const qgnn::MeshGraph>(heat::build_grid_mesh(nx, ny));
  req.frame = io::frame_from_json(io::require(payload, "frame"));
  if (req.frame.values.size() != nx * ny)
    throw InvalidArgument("frame has " + std::to_string(req.frame.values.size()) + " values for a " +
                          std::to_string(nx) + "x" + std::to_string(ny) + " grid");
  if (payload.contains("steps")) req.steps = io::get_count(payload, "steps");
  if (req.steps < 1) throw InvalidArgument("steps must be at least 1");
  return req;
}

JobRequest parse_job(JobKind kind, const Json& payload, std::uint64_t seed) {
  switch (kind) {
    case JobKind::Modal: return parse_modal_request(payload);
    case JobKind::Qpe: return parse_qpe_request(payload, seed);
    case JobKind::QgnnPredict: return parse_predict_request(payload);
  }
  throw InvalidArgument("unknown job kind");
}

Json run_modal(const ModalRequest& req) {
  return io::modal_report(fem::modal_analysis(req.fem), req.mode_shapes);
}

Json run_qpe(const QpeRequest& req) { return io::qpe_report_json(qpe::qpe_modal(req.fem, req.cfg, req.min_weight)); }

Json run_predict(const PredictRequest& req) {
  const auto frames = qgnn::rollout(req.model, *req.graph, req.frame, req.steps);
  Json doc;
  doc["format_version"] = io::kFormatVersion;
  doc["kind"] = "qgnn_prediction";
  Json out = Json::array();
  for (const qgnn::NodeFrame& f : frames) {
    Json values = Json::array();
    for (double v : f.values) values.push_back(io::round9(v));
    out.push_back({{"t", f.t}, {"values", std::move(values)}});
  }
  doc["frames"] = std::move(out);
  return doc;
}

Json run_job(const JobRequest& req) {
  return std::visit(
      [](const auto& r) -> Json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, ModalRequest>) return run_modal(r);
        else if constexpr (std::is_same_v<R, QpeRequest>) return run_qpe(r);
        else return run_predict(r);
      },
      req);
}

Json qpe_payload(const fem::FemMatrices& fem, const qpe::QpeConfig& cfg, double min_weight) {
  Json doc = io::fem_to_json(fem);
  doc["n_ancilla"] = cfg.n_ancilla;
  doc["shots"] = cfg.shots;
  doc["input_state"] = qpe::describe(cfg.input_state);
  if (const auto* c = std::get_if<qpe::CustomState>(&cfg.input_state)) doc["amplitudes"] = c->amplitudes;
  if (cfg.evolution_time) doc["evolution_time"] = *cfg.evolution_time;
  doc["min_weight"] = min_weight;
  return doc;
}

Json predict_payload(const qgnn::QgnnModel& model, std::size_t nx, std::size_t ny, const qgnn::NodeFrame& frame,
                     std::size_t steps) {
  Json doc;
  doc["format_version"] = io::kFormatVersion;
  doc["model"] = io::model_to_json(model);
  doc["nx"] = nx;
  doc["ny"] = ny;
  doc["frame"] = io::frame_to_json(frame);
  doc["steps"] = steps;
  return doc;
}

}  // namespace quasim::jobs
