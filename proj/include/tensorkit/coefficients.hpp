#pragma once

#include <array>
#include <vector>

#include <json.hpp>

#include "tensorkit/fields.hpp"

namespace tensorkit::coefficients {

/// sin(k y^axis) or cos(k y^axis); axis is 0-based.
struct TrigFactor {
  enum class Kind { Sin, Cos };
  Kind kind = Kind::Sin;
  int axis = 0;
  double frequency = 1.0;

  friend bool operator==(const TrigFactor&, const TrigFactor&) = default;
};

/// c * (y^1)^p1 (y^2)^p2 (y^3)^p3 * product of trig factors.
struct Term {
  double coefficient = 0.0;
  std::array<int, 3> powers{};
  std::vector<TrigFactor> trig;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Sum of polynomial-trigonometric terms in three variables. Derivatives are
/// exact and produce another CoefficientFunction.
///
/// JSON form: a number (constant) or an array of terms
///   {"c": 2.0, "pow": [1, 0, 0], "trig": [["cos", 2, 1.0]]}
/// where trig axes are 1-based and "pow"/"trig" are optional.
class CoefficientFunction {
 public:
  CoefficientFunction() = default;
  explicit CoefficientFunction(std::vector<Term> terms);
  static CoefficientFunction constant(double c);

  /// Throws DomainError when a negative power meets a zero coordinate.
  double operator()(const fields::Point& y) const;
  CoefficientFunction derivative(int axis) const;

  const std::vector<Term>& terms() const noexcept { return terms_; }

 private:
  std::vector<Term> terms_;
};

CoefficientFunction function_from_json(const nlohmann::json& j);
nlohmann::json function_to_json(const CoefficientFunction& f);

/// Time-independent tensor field whose components (in storage layout) are
/// coefficient functions; carries exact analytic derivatives of every order.
fields::TensorField make_field(Valency valency, std::vector<CoefficientFunction> components);

/// {"r": int, "s": int, "components": [function, ...]}; dim is always 3.
fields::TensorField field_from_json(const nlohmann::json& j);

}  // namespace tensorkit::coefficients
