#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tensorkit/tensor.hpp"

namespace tensorkit::index_lang {

/// Half-open byte range [begin, end) into the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class Level { Upper, Lower };

struct IndexOccurrence {
  char letter = 'i';
  Level level = Level::Upper;
  Span span;
};

/// Either a numeric literal or a symbol with its upper and lower index lists.
struct Factor {
  std::optional<double> literal;
  std::string name;
  std::vector<IndexOccurrence> upper;
  std::vector<IndexOccurrence> lower;
  Span span;

  bool is_literal() const noexcept { return literal.has_value(); }
};

struct Term {
  double sign = 1.0;
  std::vector<Factor> factors;
  Span span;
};

/// lhs = term +- term ...
struct IndexExpression {
  std::string source;
  Factor lhs;
  std::vector<Term> rhs;
};

/// Grammar (whitespace-insensitive):
///   equation := symbol '=' sum
///   sum      := ['+'|'-'] term (('+'|'-') term)*
///   term     := factor (['*'] factor)*
///   factor   := number | '-' factor | symbol
///   symbol   := name (('^' | '_') indices)*     at most one '^' and one '_'
///   indices  := letter | '{' letter+ '}'
/// Throws ParseError with the byte offset of the problem.
IndexExpression parse(std::string_view text);

struct Violation {
  std::string rule;  // kFreeIndexRule or kSummationRule
  char index = '?';
  Span span;
  std::string message;
};

/// Free indices must sit on the same level in every term and on both sides.
inline constexpr const char* kFreeIndexRule = "5.1";
/// A summation index has exactly one upper and one lower entry.
inline constexpr const char* kSummationRule = "5.2";

struct ClassifiedIndex {
  char letter = 'i';
  Level level = Level::Upper;

  friend bool operator==(const ClassifiedIndex&, const ClassifiedIndex&) = default;
};

struct TermIndices {
  std::vector<ClassifiedIndex> free;  // sorted by letter
  std::vector<char> summation;        // sorted
};

struct ValidationReport {
  bool valid = true;
  std::vector<Violation> violations;  // sorted by position
  std::vector<ClassifiedIndex> free;  // left-hand side free indices
  std::vector<TermIndices> terms;     // one per right-hand-side term
};

ValidationReport validate(const IndexExpression& e);

/// {verdict, violations: [{rule, index, start, end, message}], free, terms}.
nlohmann::json report_to_json(const ValidationReport& report);

using Bindings = std::map<std::string, DenseTensor, std::less<>>;

/// Evaluates with implicit summation over 1..dim. The result's slots follow
/// the left-hand side: its upper indices in order, then its lower ones.
/// Throws ValidationError, BindingError or ShapeError.
DenseTensor evaluate(const IndexExpression& e, const Bindings& bindings, int dim = 3);

/// The same formula with every implicit summation written out, e.g.
/// "y^{i} = sum_{j=1..3} F^{i}_{j} x^{j}".
std::string explicit_form(const IndexExpression& e, int dim = 3);

}  // namespace tensorkit::index_lang
