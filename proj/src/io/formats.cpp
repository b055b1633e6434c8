#include "quasim/io/formats.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "quasim/error.hpp"

namespace quasim::io {
namespace {

bool is_count(const Json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

Json rounded(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(round9(x));
  return a;
}

Json matrix_rows(const linalg::Matrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json r = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(round9(m(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

linalg::Matrix square_from(const Json& doc, const char* key, std::size_t n) {
  const std::vector<double> v = get_numbers(doc, key);
  if (v.size() != n * n)
    throw InvalidArgument(std::string("'") + key + "' has " + std::to_string(v.size()) + " entries, expected " +
                          std::to_string(n * n));
  return linalg::Matrix(n, n, v);
}

std::vector<std::size_t> get_indices(const Json& obj, const char* key) {
  const Json& a = require(obj, key);
  if (!a.is_array()) throw InvalidArgument(std::string("'") + key + "' must be an array");
  std::vector<std::size_t> out;
  for (const Json& x : a) {
    if (!is_count(x)) throw InvalidArgument(std::string("'") + key + "' must hold non-negative integers");
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

const char* boundary_name(heat::Boundary::Kind k) { return k == heat::Boundary::Kind::Fixed ? "fixed" : "insulated"; }

}  // namespace

double round9(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format9(x));
}

std::string format9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InvalidArgument("write to '" + path.string() + "' failed");
}

const Json& require(const Json& obj, const char* key) {
  if (!obj.is_object()) throw InvalidArgument("expected a JSON object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw InvalidArgument(std::string("missing field '") + key + "'");
  return *it;
}

double get_number(const Json& obj, const char* key) {
  const Json& v = require(obj, key);
  if (!v.is_number()) throw InvalidArgument(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::size_t get_count(const Json& obj, const char* key) {
  const Json& v = require(obj, key);
  if (!is_count(v)) throw InvalidArgument(std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::vector<double> get_numbers(const Json& obj, const char* key) {
  const Json& a = require(obj, key);
  if (!a.is_array()) throw InvalidArgument(std::string("'") + key + "' must be an array");
  std::vector<double> out;
  out.reserve(a.size());
  for (const Json& x : a) {
    if (!x.is_number()) throw InvalidArgument(std::string("'") + key + "' must hold numbers only");
    out.push_back(x.get<double>());
  }
  return out;
}

void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> allowed, const char* what) {
  if (!obj.is_object()) throw InvalidArgument(std::string(what) + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw InvalidArgument(std::string("unknown key '") + key + "' in " + what);
  }
}

void check_format_version(const Json& obj, const char* what) {
  const auto it = obj.find("format_version");
  if (it == obj.end()) return;
  if (!it->is_number_integer() || it->get<int>() != kFormatVersion)
    throw InvalidArgument(std::string("unsupported format_version in ") + what + " (expected " +
                          std::to_string(kFormatVersion) + ")");
}

Json fem_to_json(const fem::FemMatrices& fem) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["n_dof"] = fem.n_dof();
  doc["mass"] = Json(std::vector<double>(fem.mass.data().begin(), fem.mass.data().end()));
  doc["stiffness"] = Json(std::vector<double>(fem.stiffness.data().begin(), fem.stiffness.data().end()));
  return doc;
}

fem::FemMatrices fem_from_json(const Json& doc, std::initializer_list<const char*> extra_keys) {
  if (!doc.is_object()) throw InvalidArgument("matrix document must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    bool ok = key == "format_version" || key == "n_dof" || key == "mass" || key == "stiffness";
    for (const char* e : extra_keys) ok = ok || key == e;
    if (!ok) throw InvalidArgument("unknown key '" + key + "' in matrix document");
  }
  check_format_version(doc, "matrix document");
  const std::size_t n = get_count(doc, "n_dof");
  if (n == 0) throw InvalidArgument("n_dof must be positive");
  fem::FemMatrices fem{square_from(doc, "mass", n), square_from(doc, "stiffness", n)};
  fem.validate();
  return fem;
}

Json modal_report(const fem::ModalResult& modal, bool include_shapes) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "modal";
  doc["n_dof"] = modal.omegas.size();
  Json modes = Json::array();
  for (std::size_t i = 0; i < modal.omegas.size(); ++i) {
    Json m;
    m["i"] = i;
    m["omega"] = round9(modal.omegas[i]);
    m["omega_squared"] = round9(modal.omega_squared[i]);
    m["rigid"] = static_cast<bool>(modal.rigid[i]);
    modes.push_back(std::move(m));
  }
  doc["modes"] = std::move(modes);
  // Row i holds the components of mode i.
  if (include_shapes) doc["mode_shapes"] = matrix_rows(linalg::transpose(modal.mode_shapes));
  return doc;
}

std::string modal_csv(const fem::ModalResult& modal) {
  std::string s = "i,omega,omega_squared\n";
  for (std::size_t i = 0; i < modal.omegas.size(); ++i)
    s += std::to_string(i) + "," + format9(modal.omegas[i]) + "," + format9(modal.omega_squared[i]) + "\n";
  return s;
}

Json qpe_report_json(const qpe::QpeReport& r) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "qpe";
  doc["n_dof"] = r.n_dof;
  doc["n_ancilla"] = r.n_ancilla;
  doc["n_system_qubits"] = r.n_system_qubits;
  doc["evolution_time"] = round9(r.evolution_time);
  doc["lambda_resolution"] = round9(r.lambda_resolution);
  doc["padding_value"] = r.padding_value ? Json(round9(*r.padding_value)) : Json(nullptr);
  doc["input_state"] = r.input_state;
  doc["shots"] = r.shots;
  doc["seed"] = r.seed;
  doc["classical_omegas"] = rounded(r.classical_omegas);
  Json hist = Json::object();
  for (const auto& [bits, count] : r.histogram.entries) hist[bits] = count;
  doc["histogram"] = std::move(hist);
  Json est = Json::array();
  for (const qpe::ComparedEstimate& c : r.estimates) {
    Json e;
    e["bitstring"] = c.estimate.bitstring;
    e["phase"] = round9(c.estimate.phase);
    e["weight"] = round9(c.estimate.weight);
    e["lambda_estimate"] = round9(c.estimate.lambda_estimate);
    e["omega_estimate"] = round9(c.estimate.omega_estimate);
    e["nearest_mode"] = c.nearest_mode;
    e["nearest_classical_omega"] = round9(c.nearest_classical_omega);
    e["grid_resolution"] = round9(c.grid_resolution);
    est.push_back(std::move(e));
  }
  doc["estimates"] = std::move(est);
  return doc;
}

std::string qpe_csv(const qpe::QpeReport& r) {
  std::string s = "bitstring,phase,weight,lambda_estimate,omega_estimate,nearest_mode,nearest_classical_omega,"
                  "grid_resolution\n";
  for (const qpe::ComparedEstimate& c : r.estimates)
    s += c.estimate.bitstring + "," + format9(c.estimate.phase) + "," + format9(c.estimate.weight) + "," +
         format9(c.estimate.lambda_estimate) + "," + format9(c.estimate.omega_estimate) + "," +
         std::to_string(c.nearest_mode) + "," + format9(c.nearest_classical_omega) + "," +
         format9(c.grid_resolution) + "\n";
  return s;
}

Json frf_json(const std::vector<fem::FrfPoint>& points) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "frf";
  Json rows = Json::array();
  for (const fem::FrfPoint& p : points) {
    Json r;
    r["omega"] = round9(p.omega);
    if (p.singular) {
      r["re"] = nullptr;
      r["im"] = nullptr;
      r["magnitude"] = nullptr;
    } else {
      r["re"] = round9(p.value.real());
      r["im"] = round9(p.value.imag());
      r["magnitude"] = round9(std::abs(p.value));
    }
    r["singular"] = p.singular;
    rows.push_back(std::move(r));
  }
  doc["points"] = std::move(rows);
  return doc;
}

std::string frf_csv(const std::vector<fem::FrfPoint>& points) {
  std::string s = "omega,re,im,magnitude\n";
  for (const fem::FrfPoint& p : points)
    s += format9(p.omega) + "," + format9(p.value.real()) + "," + format9(p.value.imag()) + "," +
         format9(std::abs(p.value)) + "\n";
  return s;
}

Json model_to_json(const qgnn::QgnnModel& model) {
  Json doc;
  doc["format_version"] = kFormatVersion;
  doc["kind"] = "qgnn_model";
  doc["degree_set"] = model.degree_set();
  doc["scaler"] = {{"f_min", model.scaler.f_min}, {"f_max", model.scaler.f_max}};
  Json params = Json::array();
  for (const auto& [d, p] : model.parameters)
    params.push_back({{"degree", d},
                      {"theta_n", p.theta_n},
                      {"theta_e", p.theta_e},
                      {"gamma", p.gamma},
                      {"decode_gain", p.decode_gain},
                      {"decode_bias", p.decode_bias}});
  doc["parameters"] = std::move(params);
  return doc;
}

qgnn::QgnnModel model_from_json(const Json& doc) {
  reject_unknown_keys(doc, {"format_version", "kind", "degree_set", "scaler", "parameters"}, "model document");
  check_format_version(doc, "model document");
  if (doc.contains("kind") && doc["kind"] != "qgnn_model") throw InvalidArgument("document is not a qgnn model");
  qgnn::QgnnModel m;
  const Json& sc = require(doc, "scaler");
  reject_unknown_keys(sc, {"f_min", "f_max"}, "scaler");
  m.scaler.f_min = get_number(sc, "f_min");
  m.scaler.f_max = get_number(sc, "f_max");
  const Json& params = require(doc, "parameters");
  if (!params.is_array()) throw InvalidArgument("'parameters' must be an array");
  for (const Json& p : params) {
    reject_unknown_keys(p, {"degree", "theta_n", "theta_e", "gamma", "decode_gain", "decode_bias"}, "parameter set");
    const std::size_t d = get_count(p, "degree");
    if (m.parameters.contains(d)) throw InvalidArgument("degree " + std::to_string(d) + " listed twice");
    m.parameters[d] = qgnn::DegreeParameters{get_number(p, "theta_n"), get_number(p, "theta_e"),
                                             get_number(p, "gamma"), get_number(p, "decode_gain"),
                                             get_number(p, "decode_bias")};
  }
  const std::vector<std::size_t> listed = get_indices(doc, "degree_set");
  if (listed != m.degree_set()) throw InvalidArgument("degree_set does not match the parameter sets");
  m.validate();
  return m;
}

Json frame_to_json(const qgnn::NodeFrame& frame) {
  Json doc;
  doc["t"] = frame.t;
  doc["values"] = frame.values;
  return doc;
}

qgnn::NodeFrame frame_from_json(const Json& doc) {
  reject_unknown_keys(doc, {"t", "values"}, "frame");
  qgnn::NodeFrame f{get_count(doc, "t"), get_numbers(doc, "values")};
  return f;
}

std::string dataset_to_jsonl(const heat::HeatDataset& ds) {
  const heat::HeatScenario& s = ds.scenario;
  Json header;
  header["format_version"] = kFormatVersion;
  header["kind"] = "heat_dataset";
  header["nx"] = ds.nx;
  header["ny"] = ds.ny;
  header["alpha_dt"] = s.alpha_dt;
  header["source_power"] = s.source_power;
  header["boundary"] = {{"kind", boundary_name(s.boundary.kind)}, {"value", s.boundary.value}};
  header["initial_temperature"] = s.initial_temperature;
  header["path"] = s.path.positions;
  header["seed"] = ds.seed;
  header["val_fraction"] = ds.val_fraction;
  header["n_pairs"] = ds.pairs.size();
  header["split"] = {{"train", ds.split.train}, {"validation", ds.split.validation}};
  std::string out = header.dump() + "\n";
  for (const heat::FramePair& p : ds.pairs) {
    Json rec;
    rec["t"] = p.input.t;
    rec["f"] = p.input.values;
    rec["label"] = p.label.values;
    out += rec.dump() + "\n";
  }
  return out;
}

heat::HeatDataset dataset_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  auto parse_line = [&](const std::string& l) {
    try {
      return Json::parse(l);
    } catch (const Json::parse_error& e) {
      throw InvalidArgument("dataset line " + std::to_string(line_no) + " is not valid JSON: " + e.what());
    }
  };
  if (!std::getline(in, line)) throw InvalidArgument("dataset is empty");
  ++line_no;
  const Json header = parse_line(line);
  reject_unknown_keys(header,
                      {"format_version", "kind", "nx", "ny", "alpha_dt", "source_power", "boundary",
                       "initial_temperature", "path", "seed", "val_fraction", "n_pairs", "split"},
                      "dataset header");
  check_format_version(header, "dataset header");
  if (header.contains("kind") && header["kind"] != "heat_dataset")
    throw InvalidArgument("document is not a heat dataset");

  heat::HeatDataset ds;
  ds.nx = get_count(header, "nx");
  ds.ny = get_count(header, "ny");
  heat::HeatScenario& s = ds.scenario;
  s.mesh = std::make_shared<const qgnn::MeshGraph>(heat::build_grid_mesh(ds.nx, ds.ny));
  s.alpha_dt = get_number(header, "alpha_dt");
  s.source_power = get_number(header, "source_power");
  const Json& b = require(header, "boundary");
  reject_unknown_keys(b, {"kind", "value"}, "boundary");
  const Json& kind = require(b, "kind");
  if (kind == "fixed")
    s.boundary = heat::Boundary::fixed(get_number(b, "value"));
  else if (kind == "insulated")
    s.boundary = heat::Boundary::insulated();
  else
    throw InvalidArgument("boundary kind must be 'insulated' or 'fixed'");
  s.initial_temperature = get_number(header, "initial_temperature");
  const Json& path = require(header, "path");
  if (!path.is_array()) throw InvalidArgument("'path' must be an array");
  for (const Json& p : path) {
    if (!p.is_number_integer()) throw InvalidArgument("'path' must hold integers");
    s.path.positions.push_back(p.get<std::int64_t>());
  }
  const Json& seed = require(header, "seed");
  if (!is_count(seed)) throw InvalidArgument("'seed' must be a non-negative integer");
  ds.seed = seed.get<std::uint64_t>();
  ds.val_fraction = get_number(header, "val_fraction");
  const std::size_t n_pairs = get_count(header, "n_pairs");
  const Json& split = require(header, "split");
  reject_unknown_keys(split, {"train", "validation"}, "split");
  ds.split.train = get_indices(split, "train");
  ds.split.validation = get_indices(split, "validation");

  const std::size_t n_v = ds.nx * ds.ny;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const Json rec = parse_line(line);
    reject_unknown_keys(rec, {"t", "f", "label"}, "dataset record");
    const std::size_t t = get_count(rec, "t");
    heat::FramePair p{{t, get_numbers(rec, "f")}, {t + 1, get_numbers(rec, "label")}};
    if (p.input.values.size() != n_v || p.label.values.size() != n_v)
      throw InvalidArgument("dataset line " + std::to_string(line_no) + " does not have " + std::to_string(n_v) +
                            " values per frame");
    ds.pairs.push_back(std::move(p));
  }
  if (ds.pairs.size() != n_pairs)
    throw InvalidArgument("dataset declares " + std::to_string(n_pairs) + " pairs but holds " +
                          std::to_string(ds.pairs.size()));
  std::vector<bool> seen(n_pairs, false);
  for (const auto* list : {&ds.split.train, &ds.split.validation})
    for (std::size_t i : *list) {
      if (i >= n_pairs || seen[i]) throw InvalidArgument("dataset split is not a partition of the pairs");
      seen[i] = true;
    }
  if (ds.split.train.size() + ds.split.validation.size() != n_pairs)
    throw InvalidArgument("dataset split does not cover every pair");
  return ds;
}

std::string loss_curve_csv(const std::vector<double>& losses) {
  std::string s = "epoch,loss\n";
  for (std::size_t e = 0; e < losses.size(); ++e) s += std::to_string(e) + "," + format9(losses[e]) + "\n";
  return s;
}

}  // namespace quasim::io
