#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tensorkit/curvilinear.hpp"
#include "tensorkit/errors.hpp"
#include "tensorkit/fields.hpp"

namespace tensorkit::cli {

/// Process exit codes of the tensorkit tool.
enum ExitCode : int {
  kOk = 0,
  kInvalid = 1,          // check: expression violates the index rules
  kParseFailure = 2,     // check/eval: expression does not parse
  kInputShape = 3,       // unbound symbol or valency mismatch
  kAllPointsFailed = 4,  // field-op: no grid point could be evaluated
  kAuditBreach = 5,      // audit: a residual exceeded its tolerance
  kIoFailure = 6,        // unreadable input, unwritable output, malformed JSON
  kUsage = 64,           // bad flags or option values
};

/// Unreadable or malformed input file, or unwritable output.
class IoError : public Error {
 public:
  using Error::Error;
};

struct AxisRange {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
};

/// Per-axis sampling ranges; unset axes stay at the chart's reference point.
struct GridSpec {
  std::array<std::optional<AxisRange>, 3> axes;
};

/// Parses "axis=min:max:count" where axis is 1..3, y1..y3 or a coordinate
/// name of the chart. Throws ParameterError.
std::pair<int, AxisRange> parse_grid_axis(const std::string& text, const curvilinear::Chart& chart);

GridSpec parse_grid(const std::vector<std::string>& axes, const curvilinear::Chart& chart);

/// "a,b,c" -> point. Throws ParameterError.
fields::Point parse_point(const std::string& text);

/// Grid points with the first axis varying slowest.
std::vector<fields::Point> grid_points(const GridSpec& grid, const curvilinear::Chart& chart);

fields::DifferentiationScheme parse_scheme(const std::string& stencil, double step);

struct CheckOptions {
  std::string expression;
  bool explicit_form = false;
};

struct EvalOptions {
  std::string expression;
  std::string bindings_path;
  int dim = 3;
  std::string out_path;  // empty: stdout
};

struct ChristoffelOptions {
  std::string chart = "cartesian";
  std::vector<std::string> grid;
  std::vector<std::string> points;
  std::string out_path;
};

struct FieldOpOptions {
  std::string op;  // grad | div | rot | laplace
  std::string chart = "cartesian";
  std::string field_path;
  std::vector<std::string> grid;
  std::vector<std::string> points;
  std::string scheme = "central2";
  double step = 0.0;
  std::string format = "csv";
  std::string out_path;
};

struct AuditOptions {
  std::string chart = "cartesian";
  int samples = 100;
  std::uint64_t seed = 42;
  std::string out_path;
};

/// Each command writes its primary output to `out` (or the --out file) and
/// diagnostics to `err`, and returns an ExitCode.
int cmd_check(const CheckOptions& options, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& options, std::ostream& out, std::ostream& err);
int cmd_christoffel(const ChristoffelOptions& options, std::ostream& out, std::ostream& err);
int cmd_field_op(const FieldOpOptions& options, std::ostream& out, std::ostream& err);
int cmd_audit(const AuditOptions& options, std::ostream& out, std::ostream& err);

}  // namespace tensorkit::cli
