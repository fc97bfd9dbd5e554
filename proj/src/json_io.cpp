#include "tensorkit/json_io.hpp"

#include <charconv>
#include <cmath>

#include "tensorkit/errors.hpp"

namespace tensorkit {

namespace {

std::vector<double> numbers(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ShapeError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw ShapeError(std::string(what) + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

nlohmann::json tensor_to_json(const DenseTensor& t) {
  return {{"r", t.valency().r},
          {"s", t.valency().s},
          {"dim", t.dim()},
          {"components", std::vector<double>(t.components().begin(), t.components().end())}};
}

DenseTensor tensor_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ShapeError("tensor must be a JSON object");
  const Valency v{j.value("r", 0), j.value("s", 0)};
  const int dim = j.value("dim", 3);
  if (!j.contains("components")) throw ShapeError("tensor is missing \"components\"");
  return DenseTensor(v, dim, numbers(j.at("components"), "components"));
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.size(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw ShapeError("matrix must be a non-empty array of rows");
  const int n = static_cast<int>(j.size());
  Matrix m(n);
  for (int i = 0; i < n; ++i) {
    const auto row = numbers(j[static_cast<std::size_t>(i)], "matrix row");
    if (static_cast<int>(row.size()) != n) throw ShapeError("matrix must be square");
    for (int k = 0; k < n; ++k) m(i, k) = row[static_cast<std::size_t>(k)];
  }
  return m;
}

nlohmann::json system_to_json(const frames::CartesianSystem& s) {
  nlohmann::json cols = nlohmann::json::array();
  for (int j = 0; j < s.basis.dim(); ++j) cols.push_back(s.basis.columns().column(j));
  return {{"columns", cols}, {"origin", s.origin}};
}

frames::CartesianSystem system_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("columns")) throw ShapeError("basis needs \"columns\"");
  std::vector<std::vector<double>> cols;
  for (const auto& c : j.at("columns")) cols.push_back(numbers(c, "basis vector"));
  frames::CartesianSystem s{frames::Basis(Matrix::from_columns(cols)),
                            std::vector<double>(cols.size(), 0.0)};
  if (j.contains("origin")) {
    s.origin = numbers(j.at("origin"), "origin");
    if (s.origin.size() != cols.size()) throw ShapeError("origin length does not match dimension");
  }
  return s;
}

nlohmann::json metric_to_json(const metric::Metric& g) { return matrix_to_json(g.lower()); }

metric::Metric metric_from_json(const nlohmann::json& j) { return metric::Metric(matrix_from_json(j)); }

std::string format_double(double value) {
  if (value == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

}  // namespace tensorkit
