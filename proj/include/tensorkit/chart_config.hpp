#pragma once

#include <filesystem>

#include <json.hpp>

#include "tensorkit/curvilinear.hpp"

namespace tensorkit::curvilinear {

/// Build a chart from a coefficient-table description:
///
///   {
///     "name": "stretched",
///     "coordinates": ["u", "v", "w"],            // optional
///     "forward": [f1, f2, f3],                   // x^i(y), coefficient functions
///     "inverse": [g1, g2, g3],                   // y^i(x); optional, Newton otherwise
///     "domain": {"min": [0, null, null], "max": [null, null, null]},  // open box
///     "sample": {"min": [...], "max": [...]},    // audit box; defaults to domain
///     "reference": [1, 0, 0]                     // optional
///   }
///
/// Coefficient functions use the format of coefficients::function_from_json.
/// Jacobians and second partials of the forward map are exact; T comes from
/// the inverse map when given, else from inverting S.
Chart chart_from_json(const nlohmann::json& config);
Chart chart_from_file(const std::filesystem::path& path);

/// Built-in name or path to a JSON chart description.
Chart resolve_chart(const std::string& name_or_path);

}  // namespace tensorkit::curvilinear
