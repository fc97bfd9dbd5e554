#include "tensorkit/coefficients.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "tensorkit/errors.hpp"

namespace tensorkit::coefficients {

namespace {

double trig_value(const TrigFactor& f, const fields::Point& y) {
  const double arg = f.frequency * y[static_cast<std::size_t>(f.axis)];
  return f.kind == TrigFactor::Kind::Sin ? std::sin(arg) : std::cos(arg);
}

}  // namespace

CoefficientFunction::CoefficientFunction(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (const Term& t : terms_) {
    if (!std::isfinite(t.coefficient)) throw ParameterError("coefficient must be finite");
    for (const TrigFactor& f : t.trig)
      if (f.axis < 0 || f.axis > 2) throw ParameterError("trig axis out of range");
  }
}

CoefficientFunction CoefficientFunction::constant(double c) {
  return CoefficientFunction({Term{c, {0, 0, 0}, {}}});
}

double CoefficientFunction::operator()(const fields::Point& y) const {
  double sum = 0.0;
  for (const Term& t : terms_) {
    double v = t.coefficient;
    if (v == 0.0) continue;
    for (std::size_t a = 0; a < 3; ++a) {
      if (t.powers[a] == 0) continue;
      if (t.powers[a] < 0 && y[a] == 0.0) throw DomainError("negative power of a zero coordinate");
      v *= std::pow(y[a], t.powers[a]);
    }
    for (const TrigFactor& f : t.trig) v *= trig_value(f, y);
    sum += v;
  }
  return sum;
}

CoefficientFunction CoefficientFunction::derivative(int axis) const {
  if (axis < 0 || axis > 2) throw IndexError("derivative axis out of range");
  std::vector<Term> out;
  for (const Term& t : terms_) {
    if (t.coefficient == 0.0) continue;
    const int p = t.powers[static_cast<std::size_t>(axis)];
    if (p != 0) {
      Term d = t;
      d.coefficient *= p;
      d.powers[static_cast<std::size_t>(axis)] = p - 1;
      out.push_back(std::move(d));
    }
    for (std::size_t k = 0; k < t.trig.size(); ++k) {
      const TrigFactor& f = t.trig[k];
      if (f.axis != axis || f.frequency == 0.0) continue;
      Term d = t;
      if (f.kind == TrigFactor::Kind::Sin) {
        d.trig[k].kind = TrigFactor::Kind::Cos;
        d.coefficient *= f.frequency;
      } else {
        d.trig[k].kind = TrigFactor::Kind::Sin;
        d.coefficient *= -f.frequency;
      }
      out.push_back(std::move(d));
    }
  }
  return CoefficientFunction(std::move(out));
}

CoefficientFunction function_from_json(const nlohmann::json& j) {
  if (j.is_number()) return CoefficientFunction::constant(j.get<double>());
  if (!j.is_array()) throw ParameterError("coefficient function must be a number or an array of terms");
  std::vector<Term> terms;
  for (const auto& jt : j) {
    if (!jt.is_object() || !jt.contains("c")) throw ParameterError("term needs a coefficient \"c\"");
    Term t;
    t.coefficient = jt.at("c").get<double>();
    if (jt.contains("pow")) {
      const auto pw = jt.at("pow").get<std::vector<int>>();
      if (pw.size() != 3) throw ParameterError("\"pow\" needs three exponents");
      for (std::size_t a = 0; a < 3; ++a) t.powers[a] = pw[a];
    }
    if (jt.contains("trig")) {
      for (const auto& jf : jt.at("trig")) {
        if (!jf.is_array() || jf.size() != 3) throw ParameterError("trig factor is [\"sin\"|\"cos\", axis, k]");
        TrigFactor f;
        const auto kind = jf.at(0).get<std::string>();
        if (kind == "sin") f.kind = TrigFactor::Kind::Sin;
        else if (kind == "cos") f.kind = TrigFactor::Kind::Cos;
        else throw ParameterError("unknown trig function '" + kind + "'");
        f.axis = jf.at(1).get<int>() - 1;
        f.frequency = jf.at(2).get<double>();
        t.trig.push_back(f);
      }
    }
    terms.push_back(std::move(t));
  }
  return CoefficientFunction(std::move(terms));
}

nlohmann::json function_to_json(const CoefficientFunction& f) {
  nlohmann::json out = nlohmann::json::array();
  for (const Term& t : f.terms()) {
    nlohmann::json jt{{"c", t.coefficient}, {"pow", t.powers}};
    if (!t.trig.empty()) {
      nlohmann::json trig = nlohmann::json::array();
      for (const TrigFactor& tf : t.trig)
        trig.push_back({tf.kind == TrigFactor::Kind::Sin ? "sin" : "cos", tf.axis + 1, tf.frequency});
      jt["trig"] = std::move(trig);
    }
    out.push_back(std::move(jt));
  }
  return out;
}

fields::TensorField make_field(Valency valency, std::vector<CoefficientFunction> components) {
  const DenseTensor shape(valency, 3);
  if (components.size() != shape.size())
    throw ShapeError("expected " + std::to_string(shape.size()) + " component functions");
  auto shared = std::make_shared<const std::vector<CoefficientFunction>>(std::move(components));
  fields::TensorField f(valency, [shared, valency](const fields::Point& y, double) {
    std::vector<double> c(shared->size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = (*shared)[k](y);
    return DenseTensor(valency, 3, std::move(c));
  });
  return f.with_derivative([shared, valency] {
    // derivative slot q is the first lower slot
    const Valency dv{valency.r, valency.s + 1};
    DenseTensor layout(dv, 3);
    std::vector<CoefficientFunction> d(layout.size());
    const DenseTensor src_layout(valency, 3);
    std::vector<int> idx;
    for (std::size_t flat = 0; flat < layout.size(); ++flat) {
      const auto di = layout.multi_index(flat);
      const int q = di[static_cast<std::size_t>(valency.r)];
      idx.assign(di.begin(), di.end());
      idx.erase(idx.begin() + valency.r);
      d[flat] = (*shared)[src_layout.offset(idx)].derivative(q);
    }
    return make_field(dv, std::move(d));
  });
}

fields::TensorField field_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParameterError("field description must be an object");
  const Valency v{j.value("r", 0), j.value("s", 0)};
  if (j.contains("dim") && j.at("dim").get<int>() != 3) throw ShapeError("fields are three-dimensional");
  std::vector<CoefficientFunction> comps;
  for (const auto& jc : j.at("components")) comps.push_back(function_from_json(jc));
  return make_field(v, std::move(comps));
}

}  // namespace tensorkit::coefficients
