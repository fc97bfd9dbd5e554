#include "tensorkit/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "tensorkit/chart_config.hpp"
#include "tensorkit/coefficients.hpp"
#include "tensorkit/index_lang.hpp"
#include "tensorkit/json_io.hpp"

namespace tensorkit::cli {

using curvilinear::Chart;
using fields::Point;
using nlohmann::json;

namespace {

double parse_number(std::string_view text, const std::string& what) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  if (text.empty() || result.ec != std::errc() || result.ptr != end || !std::isfinite(value))
    throw ParameterError("invalid number '" + std::string(text) + "' in " + what);
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw IoError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file || !(file << text) || !file.flush()) throw IoError("cannot write '" + out_path + "'");
}

/// Maps an in-flight exception to an exit code, reporting it on `err`.
int fail(std::ostream& err) {
  try {
    throw;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIoFailure;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseFailure;
  } catch (const ValidationError& e) {
    err << "invalid expression: " << e.what() << '\n';
    return kInvalid;
  } catch (const BindingError& e) {
    err << "error: " << e.what() << '\n';
    return kInputShape;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kInputShape;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << '\n';
    return kInputShape;
  } catch (const IndexError& e) {
    err << "error: " << e.what() << '\n';
    return kInputShape;
  } catch (const json::exception& e) {
    err << "error: malformed input: " << e.what() << '\n';
    return kIoFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

bool is_point_failure(const Error& e) {
  return dynamic_cast<const DomainError*>(&e) || dynamic_cast<const DegenerateMetric*>(&e) ||
         dynamic_cast<const DegenerateTransition*>(&e);
}

std::string point_text(const Point& y) {
  return format_double(y[0]) + "," + format_double(y[1]) + "," + format_double(y[2]);
}

std::vector<Point> sample_points(const Chart& chart, const std::vector<std::string>& grid,
                                 const std::vector<std::string>& points) {
  std::vector<Point> out;
  for (const auto& p : points) out.push_back(parse_point(p));
  if (!grid.empty() || points.empty()) {
    const auto g = grid_points(parse_grid(grid, chart), chart);
    out.insert(out.end(), g.begin(), g.end());
  }
  return out;
}

}  // namespace

std::pair<int, AxisRange> parse_grid_axis(const std::string& text, const Chart& chart) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ParameterError("grid axis '" + text + "' must look like axis=min:max:count");
  const std::string name = text.substr(0, eq);
  int axis = -1;
  for (int a = 0; a < 3; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    if (name == std::to_string(a + 1) || name == "y" + std::to_string(a + 1) || name == chart.coordinate_names()[ua])
      axis = a;
  }
  if (axis < 0) throw ParameterError("unknown grid axis '" + name + "'");

  const auto parts = split(std::string_view(text).substr(eq + 1), ':');
  AxisRange range;
  if (parts.size() == 1) {
    range.min = range.max = parse_number(parts[0], "grid");
  } else if (parts.size() == 3) {
    range.min = parse_number(parts[0], "grid");
    range.max = parse_number(parts[1], "grid");
    const double count = parse_number(parts[2], "grid");
    if (count < 1 || count != std::floor(count) || count > 1e6)
      throw ParameterError("grid count must be a positive integer in '" + text + "'");
    range.count = static_cast<int>(count);
  } else {
    throw ParameterError("grid axis '" + text + "' must look like axis=min:max:count");
  }
  return {axis, range};
}

GridSpec parse_grid(const std::vector<std::string>& axes, const Chart& chart) {
  GridSpec grid;
  for (const auto& text : axes) {
    const auto [axis, range] = parse_grid_axis(text, chart);
    auto& slot = grid.axes[static_cast<std::size_t>(axis)];
    if (slot) throw ParameterError("grid axis " + std::to_string(axis + 1) + " given twice");
    slot = range;
  }
  return grid;
}

Point parse_point(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ParameterError("point '" + text + "' must have three comma-separated coordinates");
  return {parse_number(parts[0], "point"), parse_number(parts[1], "point"), parse_number(parts[2], "point")};
}

std::vector<Point> grid_points(const GridSpec& grid, const Chart& chart) {
  std::array<std::vector<double>, 3> values;
  for (std::size_t a = 0; a < 3; ++a) {
    if (!grid.axes[a]) {
      values[a] = {chart.reference_point()[a]};
      continue;
    }
    const auto& r = *grid.axes[a];
    if (r.count == 1) {
      values[a] = {r.min};
      continue;
    }
    for (int k = 0; k < r.count; ++k) {
      const double f = static_cast<double>(k) / (r.count - 1);
      values[a].push_back(k == r.count - 1 ? r.max : r.min + f * (r.max - r.min));
    }
  }
  std::vector<Point> points;
  for (double a : values[0])
    for (double b : values[1])
      for (double c : values[2]) points.push_back({a, b, c});
  return points;
}

fields::DifferentiationScheme parse_scheme(const std::string& stencil, double step) {
  fields::DifferentiationScheme scheme;
  if (stencil == "central2")
    scheme.stencil = fields::Stencil::Central2;
  else if (stencil == "central4")
    scheme.stencil = fields::Stencil::Central4;
  else
    throw ParameterError("unknown scheme '" + stencil + "' (expected central2 or central4)");
  scheme.step = step;
  scheme.validate();
  return scheme;
}

int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err) {
  try {
    index_lang::IndexExpression e;
    try {
      e = index_lang::parse(options.expression);
    } catch (const ParseError& pe) {
      json report = {{"verdict", "parse_error"}, {"position", pe.position()}, {"message", pe.what()}};
      out << report.dump(2) << '\n';
      return kParseFailure;
    }
    const auto report = index_lang::validate(e);
    json j = index_lang::report_to_json(report);
    if (options.explicit_form) j["explicit"] = index_lang::explicit_form(e);
    out << j.dump(2) << '\n';
    return report.valid ? kOk : kInvalid;
  } catch (...) {
    return fail(err);
  }
}

int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.dim < 1) throw ParameterError("--dim must be positive");
    const auto e = index_lang::parse(options.expression);
    index_lang::Bindings bindings;
    if (!options.bindings_path.empty()) {
      const json j = read_json_file(options.bindings_path);
      if (!j.is_object()) throw IoError("bindings file must hold a JSON object of name -> tensor");
      for (const auto& [name, value] : j.items()) {
        if (value.is_number()) {
          bindings.emplace(name, DenseTensor::scalar(value.get<double>(), options.dim));
        } else {
          json tensor = value;
          if (tensor.is_object() && !tensor.contains("dim")) tensor["dim"] = options.dim;
          bindings.emplace(name, tensor_from_json(tensor));
        }
      }
    }
    const auto result = index_lang::evaluate(e, bindings, options.dim);
    emit(tensor_to_json(result).dump(2) + "\n", options.out_path, out);
    return kOk;
  } catch (...) {
    return fail(err);
  }
}

int cmd_christoffel(const ChristoffelOptions& options, std::ostream& out, std::ostream& err) {
  try {
    const Chart chart = curvilinear::resolve_chart(options.chart);
    const auto points = sample_points(chart, options.grid, options.points);
    std::ostringstream csv;
    csv << "y1,y2,y3,k,i,j,gamma\n";
    for (const auto& y : points) {
      curvilinear::ChristoffelArray gamma;
      try {
        gamma = curvilinear::christoffel(chart, y);
      } catch (const Error& e) {
        if (!is_point_failure(e)) throw;
        err << "warning: skipping (" << point_text(y) << "): " << e.what() << '\n';
        continue;
      }
      for (int k = 1; k <= 3; ++k)
        for (int i = 1; i <= 3; ++i)
          for (int j = 1; j <= 3; ++j) {
            const double v = gamma(k, i, j);
            if (std::abs(v) > 1e-12)
              csv << point_text(y) << ',' << k << ',' << i << ',' << j << ',' << format_double(v) << '\n';
          }
    }
    emit(csv.str(), options.out_path, out);
    return kOk;
  } catch (...) {
    return fail(err);
  }
}

int cmd_field_op(const FieldOpOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.format != "csv" && options.format != "json")
      throw ParameterError("unknown format '" + options.format + "' (expected csv or json)");
    const auto scheme = parse_scheme(options.scheme, options.step);
    const Chart chart = curvilinear::resolve_chart(options.chart);
    if (options.field_path.empty()) throw ParameterError("--field is required");
    const auto field = coefficients::field_from_json(read_json_file(options.field_path));

    const Valency scalar{0, 0};
    const Valency vector{1, 0};
    const auto require = [&](Valency v, const char* what) {
      if (field.valency() != v) throw ShapeError(options.op + " needs a " + what + " field");
    };
    std::optional<fields::TensorField> result;
    if (options.op == "grad") {
      require(scalar, "scalar");
      result = curvilinear::gradient_vector(chart, field, scheme);
    } else if (options.op == "div") {
      require(vector, "vector (r=1, s=0)");
      result = curvilinear::divergence(chart, field, 1, scheme);
    } else if (options.op == "rot") {
      require(vector, "vector (r=1, s=0)");
      result = curvilinear::rotor(chart, field, scheme);
    } else if (options.op == "laplace") {
      require(scalar, "scalar");
      result = curvilinear::laplacian(chart, field, scheme);
    } else {
      throw ParameterError("unknown operator '" + options.op + "' (expected grad, div, rot or laplace)");
    }

    const auto points = sample_points(chart, options.grid, options.points);
    std::ostringstream csv;
    csv << "y1,y2,y3,component,value\n";
    json samples = json::array();
    std::size_t evaluated = 0;
    for (const auto& y : points) {
      DenseTensor value;
      try {
        chart.require_domain(y);
        value = (*result)(y);
      } catch (const Error& e) {
        if (!is_point_failure(e)) throw;
        err << "warning: skipping (" << point_text(y) << "): " << e.what() << '\n';
        continue;
      }
      ++evaluated;
      const auto comps = value.components();
      if (value.order() == 0) {
        csv << point_text(y) << ",scalar," << format_double(comps[0]) << '\n';
        samples.push_back({{"y", y}, {"value", comps[0]}});
      } else {
        for (std::size_t c = 0; c < comps.size(); ++c) {
          std::string path;
          for (int i : value.multi_index(c)) path += (path.empty() ? "" : ".") + std::to_string(i + 1);
          csv << point_text(y) << ',' << path << ',' << format_double(comps[c]) << '\n';
        }
        samples.push_back({{"y", y}, {"value", std::vector<double>(comps.begin(), comps.end())}});
      }
    }
    if (evaluated == 0 && !points.empty()) {
      err << "error: " << options.op << " could not be evaluated at any grid point\n";
      return kAllPointsFailed;
    }
    if (options.format == "csv") {
      emit(csv.str(), options.out_path, out);
    } else {
      const json doc = {{"chart", chart.name()}, {"op", options.op}, {"samples", samples}};
      emit(doc.dump(2) + "\n", options.out_path, out);
    }
    return kOk;
  } catch (...) {
    return fail(err);
  }
}

namespace {

struct Check {
  Check(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}

  std::string name;
  double tolerance = 0.0;
  double worst = 0.0;
  std::string worst_point;

  void record(double residual, const Point& y) {
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    if (worst_point.empty() || residual > worst) {
      worst = residual;
      worst_point = point_text(y);
    }
  }
  bool pass() const { return worst <= tolerance; }
};

double guarded(const std::function<double()>& f) {
  try {
    return f();
  } catch (const Error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

int cmd_audit(const AuditOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (options.samples < 1) throw ParameterError("--samples must be positive");
    const Chart chart = curvilinear::resolve_chart(options.chart);
    const bool analytic_jacobians = chart.has_analytic_direct() && chart.has_analytic_inverse();

    Check concordance{"concordance", 1e-6};
    Check inverse{"jacobian_inverse", analytic_jacobians ? 1e-6 : 1e-4};
    Check symmetry{"christoffel_symmetry", chart.has_second_partials() ? 1e-9 : 1e-5};
    Check round_trip{"round_trip", 1e-9};

    const auto metric_derivative = curvilinear::covariant_derivative(chart, curvilinear::metric_field(chart));

    std::mt19937_64 rng(options.seed);
    std::array<std::uniform_real_distribution<double>, 3> dist;
    for (std::size_t a = 0; a < 3; ++a) {
      const auto& box = chart.sample_box()[a];
      dist[a] = std::uniform_real_distribution<double>(box.min, box.max);
    }

    for (int n = 0; n < options.samples; ++n) {
      Point y{};
      int attempts = 0;
      do {
        if (++attempts > 1000) throw ParameterError("sample box of chart '" + chart.name() + "' misses its domain");
        for (std::size_t a = 0; a < 3; ++a) y[a] = dist[a](rng);
      } while (!chart.contains(y));

      concordance.record(guarded([&] { return max_abs(metric_derivative(y)); }), y);
      inverse.record(guarded([&] {
                       const auto jm = curvilinear::jacobian_matrices(chart, y);
                       return max_abs_diff(jm.inverse * jm.direct, Matrix::identity(3));
                     }),
                     y);
      symmetry.record(guarded([&] { return curvilinear::christoffel(chart, y).max_asymmetry(); }), y);
      round_trip.record(guarded([&] {
                          const Point back = chart.from_cartesian(chart.to_cartesian(y));
                          double worst = 0.0;
                          for (std::size_t a = 0; a < 3; ++a)
                            worst = std::max(worst, std::abs(back[a] - y[a]) / std::max(1.0, std::abs(y[a])));
                          return worst;
                        }),
                        y);
    }

    bool ok = true;
    json checks = json::array();
    for (const Check* c : {&concordance, &inverse, &symmetry, &round_trip}) {
      ok = ok && c->pass();
      json entry = {{"name", c->name}, {"tolerance", c->tolerance}, {"pass", c->pass()}, {"worst_point", c->worst_point}};
      entry["max_residual"] = std::isfinite(c->worst) ? json(c->worst) : json("inf");
      checks.push_back(std::move(entry));
      if (!c->pass())
        err << "audit: " << c->name << " residual " << format_double(c->worst) << " exceeds "
            << format_double(c->tolerance) << " at (" << c->worst_point << ")\n";
    }
    const json report = {{"chart", chart.name()},
                         {"samples", options.samples},
                         {"seed", options.seed},
                         {"verdict", ok ? "pass" : "fail"},
                         {"checks", checks}};
    emit(report.dump(2) + "\n", options.out_path, out);
    return ok ? kOk : kAuditBreach;
  } catch (...) {
    return fail(err);
  }
}

}  // namespace tensorkit::cli
