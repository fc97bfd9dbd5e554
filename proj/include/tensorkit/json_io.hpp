#pragma once

#include <string>

#include <json.hpp>

#include "tensorkit/frames.hpp"
#include "tensorkit/metric.hpp"
#include "tensorkit/tensor.hpp"

namespace tensorkit {

/// {"r": int, "s": int, "dim": int, "components": [...]} in storage layout.
nlohmann::json tensor_to_json(const DenseTensor& t);
DenseTensor tensor_from_json(const nlohmann::json& j);

/// Matrices are arrays of rows: the first index is the row number.
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);

/// {"columns": [[e1], [e2], [e3]], "origin": [...]}; "columns" lists the
/// basis vectors, each as its ambient coordinates. "origin" is optional.
nlohmann::json system_to_json(const frames::CartesianSystem& s);
frames::CartesianSystem system_from_json(const nlohmann::json& j);

/// Symmetric matrix of g_ij as an array of rows.
nlohmann::json metric_to_json(const metric::Metric& g);
metric::Metric metric_from_json(const nlohmann::json& j);

/// Shortest decimal string that reads back to the same double ('.' separator).
std::string format_double(double value);

}  // namespace tensorkit
