#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <variant>

#include "quasim/io/formats.hpp"

namespace quasim::jobs {

using io::Json;

enum class JobKind { Modal, Qpe, QgnnPredict };

std::optional<JobKind> parse_job_kind(std::string_view name);
const char* job_kind_name(JobKind kind);

/// Payload: matrix document plus optional "mode_shapes" (bool).
struct ModalRequest {
  fem::FemMatrices fem;
  bool mode_shapes = false;
};

/// Payload: matrix document plus n_ancilla, shots, input_state ("exact:<i>",
/// "uniform", "custom"), amplitudes (custom only), evolution_time, min_weight.
/// All QPE keys are optional.
struct QpeRequest {
  fem::FemMatrices fem;
  qpe::QpeConfig cfg;
  double min_weight = 0.0;
};

/// Payload: {model, nx, ny, frame: {t, values}, steps (default 1)}.
struct PredictRequest {
  qgnn::QgnnModel model;
  std::shared_ptr<const qgnn::MeshGraph> graph;
  qgnn::NodeFrame frame;
  std::size_t steps = 1;
};

using JobRequest = std::variant<ModalRequest, QpeRequest, PredictRequest>;

// Parsing throws InvalidArgument for malformed payloads and CapacityError for
// well-formed requests beyond the simulator's limits.
ModalRequest parse_modal_request(const Json& payload);
QpeRequest parse_qpe_request(const Json& payload, std::uint64_t seed);
PredictRequest parse_predict_request(const Json& payload);
JobRequest parse_job(JobKind kind, const Json& payload, std::uint64_t seed);

/// Result documents; the CLI writes the same documents to disk.
Json run_modal(const ModalRequest& req);
Json run_qpe(const QpeRequest& req);
Json run_predict(const PredictRequest& req);
Json run_job(const JobRequest& req);

/// Payload builders used by the CLI so both transports share one schema.
Json qpe_payload(const fem::FemMatrices& fem, const qpe::QpeConfig& cfg, double min_weight);
Json predict_payload(const qgnn::QgnnModel& model, std::size_t nx, std::size_t ny, const qgnn::NodeFrame& frame,
                     std::size_t steps);

}  // namespace quasim::jobs
