#include "tensorkit/chart_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "tensorkit/coefficients.hpp"
#include "tensorkit/errors.hpp"

namespace tensorkit::curvilinear {

namespace {

using coefficients::CoefficientFunction;
using Triple = std::array<CoefficientFunction, 3>;

Triple read_triple(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw ParameterError(std::string(what) + " needs three component functions");
  return {coefficients::function_from_json(j[0]), coefficients::function_from_json(j[1]),
          coefficients::function_from_json(j[2])};
}

std::array<double, 3> read_bounds(const nlohmann::json& j, double missing) {
  std::array<double, 3> out{missing, missing, missing};
  if (j.is_null()) return out;
  if (!j.is_array() || j.size() != 3) throw ParameterError("bounds need three entries");
  for (std::size_t a = 0; a < 3; ++a)
    if (!j[a].is_null()) out[a] = j[a].get<double>();
  return out;
}

Point evaluate(const Triple& f, const Point& p) { return {f[0](p), f[1](p), f[2](p)}; }

// dF^i/dy^j for every component
std::array<Triple, 3> derivatives(const Triple& f) {
  std::array<Triple, 3> d;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) d[i][j] = f[i].derivative(static_cast<int>(j));
  return d;
}

Matrix evaluate(const std::array<Triple, 3>& d, const Point& p) {
  Matrix m(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](p);
  return m;
}

}  // namespace

Chart chart_from_json(const nlohmann::json& config) {
  if (!config.is_object()) throw ParameterError("chart description must be a JSON object");
  ChartSpec spec;
  spec.name = config.value("name", std::string("custom"));
  if (config.contains("coordinates")) spec.coordinate_names = config.at("coordinates").get<std::array<std::string, 3>>();

  const Triple forward = read_triple(config.at("forward"), "forward");
  const auto jac = derivatives(forward);
  std::array<std::array<Triple, 3>, 3> second;  // second[q][i][j]
  for (std::size_t q = 0; q < 3; ++q)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) second[q][i][j] = jac[q][i].derivative(static_cast<int>(j));

  constexpr double inf = std::numeric_limits<double>::infinity();
  const nlohmann::json domain = config.value("domain", nlohmann::json::object());
  const auto lo = read_bounds(domain.value("min", nlohmann::json()), -inf);
  const auto hi = read_bounds(domain.value("max", nlohmann::json()), inf);
  spec.domain = [lo, hi](const Point& y) {
    for (std::size_t a = 0; a < 3; ++a)
      if (!(y[a] > lo[a] && y[a] < hi[a])) return false;
    return true;
  };

  const nlohmann::json sample = config.value("sample", domain);
  const auto slo = read_bounds(sample.value("min", nlohmann::json()), -inf);
  const auto shi = read_bounds(sample.value("max", nlohmann::json()), inf);
  for (std::size_t a = 0; a < 3; ++a) {
    if (!std::isfinite(slo[a]) || !std::isfinite(shi[a]) || !(slo[a] < shi[a]))
      throw ParameterError("chart needs a finite sample box (\"sample\" or a bounded \"domain\")");
    spec.sample_box[a] = Interval{slo[a], shi[a]};
  }
  if (config.contains("reference")) {
    spec.reference_point = config.at("reference").get<Point>();
  } else {
    for (std::size_t a = 0; a < 3; ++a) spec.reference_point[a] = 0.5 * (slo[a] + shi[a]);
  }

  spec.forward = [forward](const Point& y) { return evaluate(forward, y); };
  spec.jacobian_direct = [jac](const Point& y) { return evaluate(jac, y); };
  spec.second_partials = [second](const Point& y) {
    return SecondPartials{evaluate(second[0], y), evaluate(second[1], y), evaluate(second[2], y)};
  };

  if (config.contains("inverse")) {
    const Triple inverse = read_triple(config.at("inverse"), "inverse");
    const auto ijac = derivatives(inverse);
    spec.inverse = [inverse](const Point& x) { return evaluate(inverse, x); };
    spec.jacobian_inverse = [forward, ijac](const Point& y) { return evaluate(ijac, evaluate(forward, y)); };
  } else {
    // Seeds for Newton: the reference point and a coarse lattice over the
    // sample box, tried in order of how close their image lies to x.
    std::vector<Point> seeds{spec.reference_point};
    constexpr int kLattice = 6;
    for (int i = 0; i < kLattice; ++i)
      for (int j = 0; j < kLattice; ++j)
        for (int k = 0; k < kLattice; ++k) {
          Point y;
          const std::array<int, 3> n{i, j, k};
          for (std::size_t a = 0; a < 3; ++a) {
            const auto& box = spec.sample_box[a];
            y[a] = box.min + (n[a] + 0.5) / kLattice * (box.max - box.min);
          }
          if (spec.domain(y)) seeds.push_back(y);
        }
    const auto domain = spec.domain;
    spec.inverse = [forward, jac, seeds, domain](const Point& x) {
      const auto distance = [&](const Point& y) {
        const Point fx = evaluate(forward, y);
        return std::hypot(fx[0] - x[0], fx[1] - x[1], fx[2] - x[2]);
      };
      std::vector<std::pair<double, std::size_t>> order;
      for (std::size_t n = 0; n < seeds.size(); ++n) order.emplace_back(distance(seeds[n]), n);
      std::sort(order.begin(), order.end());
      const double scale = std::max(1.0, std::hypot(x[0], x[1], x[2]));
      for (std::size_t attempt = 0; attempt < std::min<std::size_t>(order.size(), 8); ++attempt) {
        Point y = seeds[order[attempt].second];
        try {
          for (int iter = 0; iter < 100; ++iter) {
            const Point fx = evaluate(forward, y);
            const std::array<double, 3> residual{fx[0] - x[0], fx[1] - x[1], fx[2] - x[2]};
            const auto step = evaluate(jac, y).inverse() * std::span<const double>(residual);
            double size = 0.0;
            for (std::size_t a = 0; a < 3; ++a) {
              y[a] -= step[a];
              size = std::max(size, std::abs(step[a]) / std::max(1.0, std::abs(y[a])));
            }
            if (size < 1e-15) break;
          }
        } catch (const Error&) {
          continue;
        }
        if (domain(y) && distance(y) <= 1e-10 * scale) return y;
      }
      throw DomainError("Newton iteration found no preimage of the point in the chart domain");
    };
    spec.jacobian_inverse = [jac](const Point& y) { return evaluate(jac, y).inverse(); };
  }
  return Chart(std::move(spec));
}

Chart chart_from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open chart file '" + path.string() + "'");
  nlohmann::json config;
  try {
    in >> config;
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError("chart file '" + path.string() + "': " + e.what());
  }
  return chart_from_json(config);
}

Chart resolve_chart(const std::string& name_or_path) {
  if (name_or_path == "cartesian" || name_or_path == "identity" || name_or_path == "cylindrical" ||
      name_or_path == "spherical")
    return builtin_chart(name_or_path);
  if (std::filesystem::exists(name_or_path)) return chart_from_file(name_or_path);
  throw ParameterError("unknown chart '" + name_or_path + "' (not a built-in name or a readable file)");
}

}  // namespace tensorkit::curvilinear
