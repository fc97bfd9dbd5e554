#include <iostream>

#include <CLI11.hpp>

#include "tensorkit/cli.hpp"

namespace cli = tensorkit::cli;

int main(int argc, char** argv) {
  CLI::App app{"tensorkit: tensor algebra, index notation and curvilinear field operators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tensorkit 1.0.0");

  cli::CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Validate an index-notation formula");
  check_cmd->add_option("expression", check.expression, "Formula, e.g. \"y^i = F^i_j x^j\"")->required();
  check_cmd->add_flag("--explicit", check.explicit_form, "Also print the formula with every sum written out");

  cli::EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a formula over bound tensors");
  eval_cmd->add_option("expression", eval.expression, "Formula to evaluate")->required();
  eval_cmd->add_option("--bindings", eval.bindings_path, "JSON object mapping symbol names to tensors");
  eval_cmd->add_option("--dim", eval.dim, "Index range 1..dim")->capture_default_str();
  eval_cmd->add_option("--out", eval.out_path, "Output file (default: stdout)");

  cli::ChristoffelOptions christoffel;
  auto* christoffel_cmd = app.add_subcommand("christoffel", "Tabulate Christoffel symbols of a chart");
  christoffel_cmd->add_option("--chart", christoffel.chart, "Built-in chart name or chart JSON file")
      ->capture_default_str();
  christoffel_cmd->add_option("--grid", christoffel.grid, "axis=min:max:count (repeatable)");
  christoffel_cmd->add_option("--point", christoffel.points, "y1,y2,y3 (repeatable)");
  christoffel_cmd->add_option("--out", christoffel.out_path, "Output file (default: stdout)");

  cli::FieldOpOptions field_op;
  auto* field_cmd = app.add_subcommand("field-op", "Sample grad, div, rot or laplace of a field");
  field_cmd->add_option("op", field_op.op, "grad | div | rot | laplace")
      ->required()
      ->check(CLI::IsMember({"grad", "div", "rot", "laplace"}));
  field_cmd->add_option("--chart", field_op.chart, "Built-in chart name or chart JSON file")->capture_default_str();
  field_cmd->add_option("--field", field_op.field_path, "Field JSON file")->required();
  field_cmd->add_option("--grid", field_op.grid, "axis=min:max:count (repeatable)");
  field_cmd->add_option("--point", field_op.points, "y1,y2,y3 (repeatable)");
  field_cmd->add_option("--scheme", field_op.scheme, "central2 | central4")
      ->check(CLI::IsMember({"central2", "central4"}))
      ->capture_default_str();
  field_cmd->add_option("--step", field_op.step, "Finite-difference step (0: automatic)")->capture_default_str();
  field_cmd->add_option("--format", field_op.format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  field_cmd->add_option("--out", field_op.out_path, "Output file (default: stdout)");

  cli::AuditOptions audit;
  auto* audit_cmd = app.add_subcommand("audit", "Check concordance, Jacobian inverse and Christoffel symmetry");
  audit_cmd->add_option("--chart", audit.chart, "Built-in chart name or chart JSON file")->capture_default_str();
  audit_cmd->add_option("--samples", audit.samples, "Number of random domain points")->capture_default_str();
  audit_cmd->add_option("--seed", audit.seed, "Random seed")->capture_default_str();
  audit_cmd->add_option("--out", audit.out_path, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kUsage;
  }

  if (*check_cmd) return cli::cmd_check(check, std::cout, std::cerr);
  if (*eval_cmd) return cli::cmd_eval(eval, std::cout, std::cerr);
  if (*christoffel_cmd) return cli::cmd_christoffel(christoffel, std::cout, std::cerr);
  if (*field_cmd) return cli::cmd_field_op(field_op, std::cout, std::cerr);
  return cli::cmd_audit(audit, std::cout, std::cerr);
}
