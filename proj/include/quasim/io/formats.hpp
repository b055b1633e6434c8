#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "quasim/fem/frf.hpp"
#include "quasim/fem/modal.hpp"
#include "quasim/heat/heat.hpp"
#include "quasim/qgnn/model.hpp"
#include "quasim/qpe/qpe.hpp"

namespace quasim::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormatVersion = 1;

/// Value rounded to 9 significant digits ("%.9g").
double round9(double x);
std::string format9(double x);

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
/// Creates parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Typed field access with InvalidArgument naming the field on failure.
const Json& require(const Json& obj, const char* key);
double get_number(const Json& obj, const char* key);
std::size_t get_count(const Json& obj, const char* key);
std::vector<double> get_numbers(const Json& obj, const char* key);
/// Throws InvalidArgument naming the first key of `obj` not in `allowed`.
void reject_unknown_keys(const Json& obj, std::initializer_list<const char*> allowed, const char* what);
/// Accepts a missing version; any other value than kFormatVersion is an error.
void check_format_version(const Json& obj, const char* what);

// Matrix file: {format_version, n_dof, mass: [row-major], stiffness: [row-major]}.
Json fem_to_json(const fem::FemMatrices& fem);
/// Also accepts the extra keys listed in `extra_keys` (job payloads).
fem::FemMatrices fem_from_json(const Json& doc, std::initializer_list<const char*> extra_keys = {});

// Reports. Floating-point values are rounded to 9 significant digits.
Json modal_report(const fem::ModalResult& modal, bool include_shapes);
std::string modal_csv(const fem::ModalResult& modal);

Json qpe_report_json(const qpe::QpeReport& report);
std::string qpe_csv(const qpe::QpeReport& report);

Json frf_json(const std::vector<fem::FrfPoint>& points);
std::string frf_csv(const std::vector<fem::FrfPoint>& points);

// Models and datasets keep full double precision.
Json model_to_json(const qgnn::QgnnModel& model);
qgnn::QgnnModel model_from_json(const Json& doc);

Json frame_to_json(const qgnn::NodeFrame& frame);
qgnn::NodeFrame frame_from_json(const Json& doc);

/// Line-delimited: a header object, then one {t, f, label} object per pair.
std::string dataset_to_jsonl(const heat::HeatDataset& ds);
heat::HeatDataset dataset_from_jsonl(const std::string& text);

std::string loss_curve_csv(const std::vector<double>& losses);

}  // namespace quasim::io
