#include "quasim/cli/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "quasim/error.hpp"
#include "quasim/fem/frf.hpp"
#include "quasim/heat/heat.hpp"
#include "quasim/io/formats.hpp"
#include "quasim/jobs/jobs.hpp"
#include "quasim/qgnn/training.hpp"

namespace quasim::cli {
namespace {

namespace fs = std::filesystem;
using io::Json;

struct GlobalOptions {
  std::uint64_t seed = 0;
  std::string output_dir = "quasim-out";
  std::string format = "json";

  bool csv() const { return format == "csv"; }
  fs::path out(const std::string& name) const { return fs::path(output_dir) / name; }
};

struct ModelSpec {
  std::string matrix;
  bool bar = false;
  std::size_t elements = 10;
  double youngs = 1.0, area = 1.0, density = 1.0, length = 1.0;
  bool fixed_left = false;
  bool membrane = false;
  std::size_t nx = 4, ny = 4;
  double spacing = 1.0, node_mass = 1.0, edge_stiffness = 1.0;
  bool clamped = false;

  void add_to(CLI::App& cmd) {
    auto* m = cmd.add_option("--matrix", matrix, "Matrix file {n_dof, mass, stiffness}");
    auto* b = cmd.add_flag("--bar", bar, "Axial bar model");
    auto* s = cmd.add_flag("--membrane", membrane, "Grid spring-mass membrane model");
    m->excludes(b, s);
    b->excludes(s);
    cmd.add_option("--elements", elements, "Bar elements")->capture_default_str();
    cmd.add_option("--youngs-modulus", youngs, "Bar Young's modulus")->capture_default_str();
    cmd.add_option("--area", area, "Bar cross-section area")->capture_default_str();
    cmd.add_option("--density", density, "Bar density")->capture_default_str();
    cmd.add_option("--length", length, "Bar length")->capture_default_str();
    cmd.add_flag("--fixed-left", fixed_left, "Clamp the left bar end");
    cmd.add_option("--nx", nx, "Membrane nodes along x")->capture_default_str();
    cmd.add_option("--ny", ny, "Membrane nodes along y")->capture_default_str();
    cmd.add_option("--spacing", spacing, "Membrane node spacing")->capture_default_str();
    cmd.add_option("--node-mass", node_mass, "Membrane lumped mass per node")->capture_default_str();
    cmd.add_option("--edge-stiffness", edge_stiffness, "Membrane spring stiffness")->capture_default_str();
    cmd.add_flag("--clamped", clamped, "Clamp the membrane boundary ring");
  }

  fem::FemMatrices build() const {
    if (!matrix.empty()) return io::fem_from_json(io::read_json_file(matrix));
    if (bar) return fem::assemble_bar(elements, youngs, area, density, length, fixed_left);
    if (membrane) return fem::assemble_membrane(nx, ny, spacing, node_mass, edge_stiffness, clamped);
    throw InvalidArgument("choose a model: --matrix FILE, --bar or --membrane");
  }
};

struct QpeOptions {
  int ancillas = 8;
  std::uint64_t shots = 1000;
  std::string input_state = "exact:0";
  std::vector<double> amplitudes;
  std::optional<double> evolution_time;
  double min_weight = 0.0;

  void add_to(CLI::App& cmd, bool with_ancillas) {
    if (with_ancillas) cmd.add_option("--ancillas", ancillas, "Ancilla qubits")->capture_default_str();
    cmd.add_option("--shots", shots, "Measurement shots")->capture_default_str();
    cmd.add_option("--input-state", input_state, "exact:<i>, uniform or custom")->capture_default_str();
    cmd.add_option("--amplitudes", amplitudes, "Custom input amplitudes, one per DOF")->delimiter(',');
    cmd.add_option("--evolution-time", evolution_time, "Evolution time t (default: alias-free choice)");
    cmd.add_option("--min-weight", min_weight, "Drop histogram bins below this weight")->capture_default_str();
  }

  qpe::QpeConfig config(std::uint64_t seed) const {
    qpe::QpeConfig cfg;
    cfg.n_ancilla = ancillas;
    cfg.shots = shots;
    cfg.seed = seed;
    cfg.input_state = qpe::parse_input_state(input_state, amplitudes);
    cfg.evolution_time = evolution_time;
    return cfg;
  }
};

struct SweepOptions {
  std::string ancilla_range = "3..8";
};

struct HeatOptions {
  std::size_t nx = 8, ny = 8, steps = 200;
  double alpha_dt = 0.1, source_power = 1.0, initial_temperature = 0.0;
  std::string boundary = "insulated";
  double boundary_value = 0.0;
  std::string path = "rect";
  std::size_t rect_x = 2, rect_y = 2, rect_width = 3, rect_height = 3, dwell = 2;
  double val_fraction = 0.0;
};

struct TrainOptions {
  std::string dataset;
  std::size_t epochs = 150;
  double learning_rate = 0.03;
  std::string optimizer = "gd";
  double momentum = 0.9;
};

struct EvalOptions {
  std::string model, dataset, subset = "all";
  std::size_t rollout_steps = 10;
  std::size_t permutation_trials = 1000;
};

struct FrfOptions {
  std::vector<double> zeta{0.01};
  std::vector<double> omega_grid;
  double omega_min = 0.0, omega_max = 2.0;
  std::size_t omega_points = 201;
  std::size_t input_dof = 0, output_dof = 0;
};

struct PredictOptions {
  std::string model, frame;
  std::size_t nx = 0, ny = 0, steps = 1;
};

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

// Global keys plus the keys of the subcommand that ran.
std::string resolved_config(const CLI::App& app, const CLI::App& cmd) {
  std::istringstream in(app.config_to_str(true, false));
  const std::string prefix = cmd.get_name() + ".";
  std::string out, line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    const auto dot = line.find('.');
    if (eq == std::string::npos) continue;
    if (dot == std::string::npos || dot > eq || line.rfind(prefix, 0) == 0) out += line + "\n";
  }
  return out;
}

std::vector<int> parse_ancilla_range(const std::string& text) {
  std::vector<int> out;
  auto to_int = [&](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw InvalidArgument("ancilla range '" + text + "' must be 'a..b' or a comma list of integers");
    const unsigned long v = std::stoul(s);
    return v > 1000 ? 1000 : static_cast<int>(v);
  };
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int a = to_int(text.substr(0, dots));
    const int b = to_int(text.substr(dots + 2));
    for (int n = a; n <= b; ++n) out.push_back(n);
  } else {
    std::size_t start = 0;
    while (start <= text.size() && !text.empty()) {
      const std::size_t comma = text.find(',', start);
      out.push_back(to_int(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start)));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (out.empty()) throw InvalidArgument("ancilla range '" + text + "' is empty");
  return out;
}

void cmd_modal(const GlobalOptions& g, const ModelSpec& spec, bool shapes) {
  jobs::ModalRequest req;
  req.fem = spec.build();
  req.mode_shapes = shapes;
  const fem::ModalResult modal = fem::modal_analysis(req.fem);
  if (g.csv())
    io::write_text_file(g.out("modal.csv"), io::modal_csv(modal));
  else
    io::write_text_file(g.out("modal.json"), dump(io::modal_report(modal, shapes)));
}

void cmd_qpe(const GlobalOptions& g, const ModelSpec& spec, const QpeOptions& q) {
  const fem::FemMatrices fem = spec.build();
  const qpe::QpeConfig cfg = q.config(g.seed);
  const jobs::QpeRequest req = jobs::parse_qpe_request(jobs::qpe_payload(fem, cfg, q.min_weight), g.seed);
  if (g.csv())
    io::write_text_file(g.out("qpe.csv"), io::qpe_csv(qpe::qpe_modal(req.fem, req.cfg, req.min_weight)));
  else
    io::write_text_file(g.out("qpe.json"), dump(jobs::run_qpe(req)));
}

void cmd_qpe_sweep(const GlobalOptions& g, const ModelSpec& spec, const QpeOptions& q, const SweepOptions& s) {
  const std::vector<int> range = parse_ancilla_range(s.ancilla_range);
  const fem::FemMatrices fem = spec.build();
  Json rows = Json::array();
  std::string csv = "n_ancilla,best_omega,target_omega,best_estimate_error,grid_resolution,within_resolution\n";
  for (int n : range) {
    QpeOptions qn = q;
    qn.ancillas = n;
    const qpe::QpeConfig cfg = qn.config(g.seed);
    cfg.validate();
    const qpe::QpeReport rep = qpe::qpe_modal(fem, cfg, q.min_weight);
    if (rep.estimates.empty()) throw NumericalError("no phase estimate survived for n_ancilla = " + std::to_string(n));
    const qpe::ComparedEstimate& best = rep.estimates.front();
    double target = best.nearest_classical_omega;
    if (const auto* e = std::get_if<qpe::ExactEigenvector>(&cfg.input_state)) target = rep.classical_omegas.at(e->index);
    const double err = std::abs(best.estimate.omega_estimate - target);
    const bool within = err <= best.grid_resolution;
    Json r;
    r["n_ancilla"] = n;
    r["best_omega"] = io::round9(best.estimate.omega_estimate);
    r["target_omega"] = io::round9(target);
    r["best_estimate_error"] = io::round9(err);
    r["grid_resolution"] = io::round9(best.grid_resolution);
    r["within_resolution"] = within;
    rows.push_back(std::move(r));
    csv += std::to_string(n) + "," + io::format9(best.estimate.omega_estimate) + "," + io::format9(target) + "," +
           io::format9(err) + "," + io::format9(best.grid_resolution) + "," + (within ? "true" : "false") + "\n";
  }
  if (g.csv()) {
    io::write_text_file(g.out("qpe_sweep.csv"), csv);
  } else {
    Json doc;
    doc["format_version"] = io::kFormatVersion;
    doc["kind"] = "qpe_sweep";
    doc["input_state"] = q.input_state;
    doc["shots"] = q.shots;
    doc["seed"] = g.seed;
    doc["rows"] = std::move(rows);
    io::write_text_file(g.out("qpe_sweep.json"), dump(doc));
  }
}

void cmd_heat_gen(const GlobalOptions& g, const HeatOptions& h) {
  heat::HeatScenario s;
  s.mesh = std::make_shared<const qgnn::MeshGraph>(heat::build_grid_mesh(h.nx, h.ny));
  s.alpha_dt = h.alpha_dt;
  s.source_power = h.source_power;
  s.initial_temperature = h.initial_temperature;
  s.boundary = h.boundary == "fixed" ? heat::Boundary::fixed(h.boundary_value) : heat::Boundary::insulated();
  if (h.path == "rect") {
    const std::size_t start = h.rect_y * h.nx + h.rect_x;
    if (h.rect_x >= h.nx || h.rect_y >= h.ny) throw InvalidArgument("rectangle start lies outside the grid");
    s.path = heat::rect_laser_path(*s.mesh, start, h.rect_width, h.rect_height, h.dwell).tiled(h.steps);
  }
  s.validate();
  const heat::HeatDataset ds = heat::generate_dataset(s, h.steps, h.val_fraction, g.seed);
  io::write_text_file(g.out("dataset.jsonl"), io::dataset_to_jsonl(ds));
}

std::vector<qgnn::Transition> transitions(const heat::HeatDataset& ds, const std::vector<std::size_t>& idx) {
  std::vector<qgnn::Transition> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back({ds.scenario.mesh, ds.pairs[i].input, ds.pairs[i].label});
  return out;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

void cmd_qgnn_train(const GlobalOptions& g, const TrainOptions& t) {
  if (t.dataset.empty()) throw InvalidArgument("--dataset is required");
  const heat::HeatDataset ds = io::dataset_from_jsonl(io::read_text_file(t.dataset));
  const auto train_set = transitions(ds, ds.split.train);
  if (train_set.empty()) throw InvalidArgument("dataset has no training pairs");
  std::vector<qgnn::NodeFrame> frames;
  for (const auto& tr : train_set) {
    frames.push_back(tr.input);
    frames.push_back(tr.label);
  }
  const qgnn::Scaler scaler = qgnn::fit_scaler(frames);
  const auto degrees = ds.graph().degree_set();
  qgnn::TrainConfig cfg;
  cfg.epochs = t.epochs;
  cfg.learning_rate = t.learning_rate;
  cfg.seed = g.seed;
  cfg.optimizer = t.optimizer == "momentum" ? qgnn::Optimizer::Momentum : qgnn::Optimizer::PlainGradientDescent;
  cfg.momentum = t.momentum;
  const qgnn::TrainResult r = qgnn::train(qgnn::QgnnModel::initialize(degrees, scaler, g.seed), train_set, cfg);
  io::write_text_file(g.out("model.json"), dump(io::model_to_json(r.model)));
  io::write_text_file(g.out("loss_curve.csv"), io::loss_curve_csv(r.report.losses));
}

void cmd_qgnn_eval(const GlobalOptions& g, const EvalOptions& e) {
  if (e.model.empty() || e.dataset.empty()) throw InvalidArgument("--model and --dataset are required");
  const qgnn::QgnnModel model = io::model_from_json(io::read_json_file(e.model));
  const heat::HeatDataset ds = io::dataset_from_jsonl(io::read_text_file(e.dataset));
  const std::vector<std::size_t> idx = e.subset == "train"        ? ds.split.train
                                       : e.subset == "validation" ? ds.split.validation
                                                                  : all_indices(ds.pairs.size());
  if (idx.empty()) throw InvalidArgument("subset '" + e.subset + "' has no pairs");
  const auto set = transitions(ds, idx);
  const double one_step = qgnn::dataset_loss(model, set);

  // Rollout from the earliest selected pair along the stored trajectory.
  const std::size_t first = idx.front();
  const std::size_t steps = std::min(e.rollout_steps, ds.pairs.size() - first);
  std::vector<double> rollout_mse;
  if (steps > 0) {
    const auto frames = qgnn::rollout(model, ds.graph(), ds.pairs[first].input, steps);
    for (std::size_t k = 0; k < steps; ++k) {
      const auto& label = ds.pairs[first + k].label.values;
      double s = 0.0;
      for (std::size_t v = 0; v < label.size(); ++v) s += (frames[k].values[v] - label[v]) * (frames[k].values[v] - label[v]);
      rollout_mse.push_back(s / static_cast<double>(label.size()));
    }
  }
  const double deviation = qgnn::permutation_deviation(model, ds.graph(), ds.pairs[first].input,
                                                       e.permutation_trials, g.seed);
  const bool pass = deviation <= 1e-10;

  if (g.csv()) {
    std::string csv = "metric,value\n";
    csv += "one_step_mse," + io::format9(one_step) + "\n";
    for (std::size_t k = 0; k < rollout_mse.size(); ++k)
      csv += "rollout_mse_step_" + std::to_string(k + 1) + "," + io::format9(rollout_mse[k]) + "\n";
    csv += std::string("permutation_check,") + (pass ? "pass" : "fail") + "\n";
    csv += "permutation_max_deviation," + io::format9(deviation) + "\n";
    io::write_text_file(g.out("metrics.csv"), csv);
  } else {
    Json doc;
    doc["format_version"] = io::kFormatVersion;
    doc["kind"] = "qgnn_metrics";
    doc["subset"] = e.subset;
    doc["n_pairs"] = idx.size();
    doc["one_step_mse"] = io::round9(one_step);
    Json roll = Json::array();
    for (double m : rollout_mse) roll.push_back(io::round9(m));
    doc["rollout_mse_per_step"] = std::move(roll);
    doc["permutation_check"] = pass ? "pass" : "fail";
    doc["permutation_max_deviation"] = io::round9(deviation);
    io::write_text_file(g.out("metrics.json"), dump(doc));
  }
}

void cmd_frf(const GlobalOptions& g, const ModelSpec& spec, const FrfOptions& f) {
  const fem::ModalResult modal = fem::modal_analysis(spec.build());
  fem::FrfConfig cfg;
  cfg.damping_ratios = f.zeta;
  cfg.input_dof = f.input_dof;
  cfg.output_dof = f.output_dof;
  if (!f.omega_grid.empty()) {
    cfg.omega_grid = f.omega_grid;
  } else {
    if (f.omega_points < 1) throw InvalidArgument("--omega-points must be at least 1");
    if (!(f.omega_max >= f.omega_min)) throw InvalidArgument("--omega-max must not be below --omega-min");
    for (std::size_t i = 0; i < f.omega_points; ++i)
      cfg.omega_grid.push_back(f.omega_points == 1 ? f.omega_min
                                                   : f.omega_min + (f.omega_max - f.omega_min) *
                                                                       static_cast<double>(i) /
                                                                       static_cast<double>(f.omega_points - 1));
  }
  const auto points = fem::frf(modal, cfg);
  if (g.csv())
    io::write_text_file(g.out("frf.csv"), io::frf_csv(points));
  else
    io::write_text_file(g.out("frf.json"), dump(io::frf_json(points)));
}

void cmd_predict(const GlobalOptions& g, const PredictOptions& p) {
  if (p.model.empty() || p.frame.empty()) throw InvalidArgument("--model and --frame are required");
  const Json payload = jobs::predict_payload(io::model_from_json(io::read_json_file(p.model)), p.nx, p.ny,
                                             io::frame_from_json(io::read_json_file(p.frame)), p.steps);
  io::write_text_file(g.out("prediction.json"), dump(jobs::run_predict(jobs::parse_predict_request(payload))));
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"quasim: modal analysis, phase estimation and quantum graph models on a statevector simulator"};
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "TOML or INI config file; command-line flags take precedence");
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Seed for sampling, shuffles and initialisation")->capture_default_str();
  app.add_option("--output-dir", g.output_dir, "Directory for output files")->capture_default_str();
  app.add_option("--format", g.format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  ModelSpec modal_spec, qpe_spec, sweep_spec, frf_spec;
  bool mode_shapes = false;
  QpeOptions qpe_opts, sweep_qpe;
  SweepOptions sweep;
  HeatOptions heat_opts;
  TrainOptions train_opts;
  EvalOptions eval_opts;
  FrfOptions frf_opts;
  PredictOptions predict_opts;

  auto* modal = app.add_subcommand("modal", "Classical natural frequencies and mode shapes");
  modal_spec.add_to(*modal);
  modal->add_flag("--mode-shapes", mode_shapes, "Include mode shapes in the report");

  auto* qpe_cmd = app.add_subcommand("qpe", "Phase-estimation eigenfrequencies compared with the classical solve");
  qpe_spec.add_to(*qpe_cmd);
  qpe_opts.add_to(*qpe_cmd, true);

  auto* sweep_cmd = app.add_subcommand("qpe-sweep", "Phase-estimation error over a range of ancilla counts");
  sweep_spec.add_to(*sweep_cmd);
  sweep_qpe.add_to(*sweep_cmd, false);
  sweep_cmd->add_option("--ancilla-range", sweep.ancilla_range, "a..b or comma list")->capture_default_str();

  auto* heat_cmd = app.add_subcommand("heat-gen", "Generate a laser-heating dataset on a grid");
  heat_cmd->add_option("--nx", heat_opts.nx, "Grid nodes along x")->capture_default_str();
  heat_cmd->add_option("--ny", heat_opts.ny, "Grid nodes along y")->capture_default_str();
  heat_cmd->add_option("--steps", heat_opts.steps, "Time steps (= transition pairs)")->capture_default_str();
  heat_cmd->add_option("--alpha-dt", heat_opts.alpha_dt, "Diffusion number alpha*dt")->capture_default_str();
  heat_cmd->add_option("--source-power", heat_opts.source_power, "Heat added per laser step")->capture_default_str();
  heat_cmd->add_option("--initial-temperature", heat_opts.initial_temperature)->capture_default_str();
  heat_cmd->add_option("--boundary", heat_opts.boundary, "insulated or fixed")
      ->check(CLI::IsMember({"insulated", "fixed"}))
      ->capture_default_str();
  heat_cmd->add_option("--boundary-value", heat_opts.boundary_value, "Fixed boundary temperature")
      ->capture_default_str();
  heat_cmd->add_option("--path", heat_opts.path, "Laser path: rect or none")
      ->check(CLI::IsMember({"rect", "none"}))
      ->capture_default_str();
  heat_cmd->add_option("--rect-x", heat_opts.rect_x, "Rectangle corner x")->capture_default_str();
  heat_cmd->add_option("--rect-y", heat_opts.rect_y, "Rectangle corner y")->capture_default_str();
  heat_cmd->add_option("--rect-width", heat_opts.rect_width, "Rectangle width in cells")->capture_default_str();
  heat_cmd->add_option("--rect-height", heat_opts.rect_height, "Rectangle height in cells")->capture_default_str();
  heat_cmd->add_option("--dwell", heat_opts.dwell, "Steps per path vertex")->capture_default_str();
  heat_cmd->add_option("--val-fraction", heat_opts.val_fraction, "Validation share of the pairs")
      ->capture_default_str();

  auto* train_cmd = app.add_subcommand("qgnn-train", "Train a graph model on a heat dataset");
  train_cmd->add_option("--dataset", train_opts.dataset, "Dataset file (.jsonl)");
  train_cmd->add_option("--epochs", train_opts.epochs)->capture_default_str();
  train_cmd->add_option("--learning-rate", train_opts.learning_rate)->capture_default_str();
  train_cmd->add_option("--optimizer", train_opts.optimizer, "gd or momentum")
      ->check(CLI::IsMember({"gd", "momentum"}))
      ->capture_default_str();
  train_cmd->add_option("--momentum", train_opts.momentum)->capture_default_str();

  auto* eval_cmd = app.add_subcommand("qgnn-eval", "Evaluate a graph model on a heat dataset");
  eval_cmd->add_option("--model", eval_opts.model, "Model file");
  eval_cmd->add_option("--dataset", eval_opts.dataset, "Dataset file (.jsonl)");
  eval_cmd->add_option("--subset", eval_opts.subset, "all, train or validation")
      ->check(CLI::IsMember({"all", "train", "validation"}))
      ->capture_default_str();
  eval_cmd->add_option("--rollout-steps", eval_opts.rollout_steps)->capture_default_str();
  eval_cmd->add_option("--permutation-trials", eval_opts.permutation_trials)->capture_default_str();

  auto* frf_cmd = app.add_subcommand("frf", "Frequency response function from modal superposition");
  frf_spec.add_to(*frf_cmd);
  frf_cmd->add_option("--zeta", frf_opts.zeta, "Damping ratio, one value or one per mode")->delimiter(',');
  frf_cmd->add_option("--omega-grid", frf_opts.omega_grid, "Explicit frequency list")->delimiter(',');
  frf_cmd->add_option("--omega-min", frf_opts.omega_min)->capture_default_str();
  frf_cmd->add_option("--omega-max", frf_opts.omega_max)->capture_default_str();
  frf_cmd->add_option("--omega-points", frf_opts.omega_points)->capture_default_str();
  frf_cmd->add_option("--input-dof", frf_opts.input_dof)->capture_default_str();
  frf_cmd->add_option("--output-dof", frf_opts.output_dof)->capture_default_str();

  auto* predict_cmd = app.add_subcommand("predict", "Roll a trained graph model forward from one frame");
  predict_cmd->add_option("--model", predict_opts.model, "Model file");
  predict_cmd->add_option("--frame", predict_opts.frame, "Frame file {t, values}");
  predict_cmd->add_option("--nx", predict_opts.nx, "Grid nodes along x")->required();
  predict_cmd->add_option("--ny", predict_opts.ny, "Grid nodes along y")->required();
  predict_cmd->add_option("--steps", predict_opts.steps)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    io::write_text_file(g.out("resolved_config.toml"), resolved_config(app, *app.get_subcommands().front()));
    if (modal->parsed()) cmd_modal(g, modal_spec, mode_shapes);
    else if (qpe_cmd->parsed()) cmd_qpe(g, qpe_spec, qpe_opts);
    else if (sweep_cmd->parsed()) cmd_qpe_sweep(g, sweep_spec, sweep_qpe, sweep);
    else if (heat_cmd->parsed()) cmd_heat_gen(g, heat_opts);
    else if (train_cmd->parsed()) cmd_qgnn_train(g, train_opts);
    else if (eval_cmd->parsed()) cmd_qgnn_eval(g, eval_opts);
    else if (frf_cmd->parsed()) cmd_frf(g, frf_spec, frf_opts);
    else if (predict_cmd->parsed()) cmd_predict(g, predict_opts);
  } catch (const UnsupportedDegree& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"quasim"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace quasim::cli
