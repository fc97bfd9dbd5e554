#include "tensorkit/index_lang.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <sstream>

#include "tensorkit/errors.hpp"

namespace tensorkit::index_lang {

namespace {

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  IndexExpression parse_equation() {
    IndexExpression e;
    e.source = std::string(text_);
    skip_space();
    if (!is_name_start(peek())) fail("expected a symbol on the left-hand side");
    e.lhs = parse_symbol();
    skip_space();
    if (peek() != '=') fail("expected '='");
    ++pos_;
    skip_space();
    e.rhs = parse_sum();
    skip_space();
    if (pos_ < text_.size()) fail(peek() == '=' ? "unexpected second '='" : "unexpected character");
    return e;
  }

 private:
  static bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
  static bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  // ASCII '-' or U+2212 MINUS SIGN
  bool at_minus() const {
    if (peek() == '-') return true;
    return text_.substr(pos_, 3) == "\xE2\x88\x92";
  }
  void consume_minus() { pos_ += peek() == '-' ? 1 : 3; }

  std::vector<Term> parse_sum() {
    std::vector<Term> terms;
    double sign = 1.0;
    if (peek() == '+') {
      ++pos_;
    } else if (at_minus()) {
      consume_minus();
      sign = -1.0;
    }
    for (;;) {
      skip_space();
      terms.push_back(parse_term(sign));
      skip_space();
      if (peek() == '+') {
        ++pos_;
        sign = 1.0;
      } else if (at_minus()) {
        consume_minus();
        sign = -1.0;
      } else {
        break;
      }
    }
    return terms;
  }

  bool at_factor_start() const {
    const char c = peek();
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '.' || at_minus();
  }

  Term parse_term(double sign) {
    Term term;
    term.sign = sign;
    term.span.begin = pos_;
    if (!at_factor_start()) fail("expected a factor");
    term.factors.push_back(parse_factor());
    for (;;) {
      skip_space();
      if (peek() == '*') {
        ++pos_;
        skip_space();
        if (!at_factor_start()) fail("expected a factor after '*'");
      } else if (!at_factor_start() || at_minus()) {
        break;  // a bare minus here starts the next term
      }
      term.factors.push_back(parse_factor());
    }
    term.span.end = term.factors.back().span.end;
    return term;
  }

  Factor parse_factor() {
    skip_space();
    if (at_minus()) {
      const std::size_t begin = pos_;
      consume_minus();
      skip_space();
      Factor inner = parse_factor();
      // fold the sign into a literal coefficient
      if (inner.is_literal()) {
        inner.literal = -*inner.literal;
        inner.span.begin = begin;
        return inner;
      }
      fail("unary minus before a symbol inside a product; write -1 * symbol");
    }
    if (is_name_start(peek())) return parse_symbol();
    return parse_number();
  }

  Factor parse_number() {
    Factor f;
    f.span.begin = pos_;
    std::size_t end = pos_;
    while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.')) ++end;
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp = end + 1;
      if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) ++exp;
      if (exp < text_.size() && std::isdigit(static_cast<unsigned char>(text_[exp]))) {
        end = exp;
        while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      }
    }
    double value = 0.0;
    const auto result = std::from_chars(text_.data() + pos_, text_.data() + end, value);
    if (result.ec != std::errc() || result.ptr != text_.data() + end || end == pos_) fail("malformed number");
    pos_ = end;
    f.literal = value;
    f.span.end = pos_;
    return f;
  }

  Factor parse_symbol() {
    Factor f;
    f.span.begin = pos_;
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    f.name = std::string(text_.substr(f.span.begin, pos_ - f.span.begin));
    bool seen_upper = false;
    bool seen_lower = false;
    for (;;) {
      skip_space();
      const char c = peek();
      if (c != '^' && c != '_') break;
      const Level level = c == '^' ? Level::Upper : Level::Lower;
      bool& seen = level == Level::Upper ? seen_upper : seen_lower;
      if (seen) fail(std::string("second '") + c + "' group on symbol '" + f.name + "'");
      seen = true;
      ++pos_;
      skip_space();
      auto& list = level == Level::Upper ? f.upper : f.lower;
      if (peek() == '{') {
        ++pos_;
        skip_space();
        if (peek() == '}') fail("empty index group");
        while (peek() != '}') {
          if (!std::isalpha(static_cast<unsigned char>(peek()))) fail("expected an index letter");
          list.push_back(IndexOccurrence{peek(), level, Span{pos_, pos_ + 1}});
          ++pos_;
          skip_space();
        }
        ++pos_;
      } else {
        if (!std::isalpha(static_cast<unsigned char>(peek()))) fail("expected an index letter");
        list.push_back(IndexOccurrence{peek(), level, Span{pos_, pos_ + 1}});
        ++pos_;
      }
    }
    f.span.end = pos_;
    // trailing whitespace consumed above is not part of the symbol
    while (f.span.end > f.span.begin && std::isspace(static_cast<unsigned char>(text_[f.span.end - 1]))) --f.span.end;
    return f;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Validation

std::string level_name(Level l) { return l == Level::Upper ? "upper" : "lower"; }

std::vector<const IndexOccurrence*> occurrences(const std::vector<Factor>& factors) {
  std::vector<const IndexOccurrence*> out;
  for (const Factor& f : factors) {
    for (const auto& o : f.upper) out.push_back(&o);
    for (const auto& o : f.lower) out.push_back(&o);
  }
  return out;
}

// Classifies one side term; appends summation-rule violations.
TermIndices classify(const std::vector<Factor>& factors, std::vector<Violation>& violations) {
  std::map<char, std::vector<const IndexOccurrence*>> by_letter;
  for (const IndexOccurrence* o : occurrences(factors)) by_letter[o->letter].push_back(o);
  TermIndices out;
  for (auto& [letter, list] : by_letter) {
    std::sort(list.begin(), list.end(),
              [](const IndexOccurrence* a, const IndexOccurrence* b) { return a->span.begin < b->span.begin; });
    if (list.size() == 1) {
      out.free.push_back(ClassifiedIndex{letter, list[0]->level});
    } else if (list.size() == 2) {
      if (list[0]->level != list[1]->level) {
        out.summation.push_back(letter);
      } else {
        violations.push_back(Violation{kSummationRule, letter, list[1]->span,
                                       std::string("summation index '") + letter + "' has two " +
                                           level_name(list[0]->level) + " entries"});
      }
    } else {
      violations.push_back(Violation{kSummationRule, letter, list[2]->span,
                                     std::string("index '") + letter + "' occurs " + std::to_string(list.size()) +
                                         " times in one term"});
    }
  }
  return out;
}

const IndexOccurrence* find_occurrence(const std::vector<Factor>& factors, char letter) {
  for (const IndexOccurrence* o : occurrences(factors))
    if (o->letter == letter) return o;
  return nullptr;
}

}  // namespace

IndexExpression parse(std::string_view text) { return Parser(text).parse_equation(); }

ValidationReport validate(const IndexExpression& e) {
  ValidationReport report;
  const std::vector<Factor> lhs_factors{e.lhs};
  const TermIndices lhs = classify(lhs_factors, report.violations);
  for (char letter : lhs.summation) {
    const IndexOccurrence* o = find_occurrence(lhs_factors, letter);
    report.violations.push_back(Violation{kSummationRule, letter, o->span,
                                          std::string("left-hand side cannot sum over index '") + letter + "'"});
  }
  report.free = lhs.free;

  for (const Term& term : e.rhs) {
    TermIndices ti = classify(term.factors, report.violations);
    for (const ClassifiedIndex& c : ti.free) {
      const auto it = std::find_if(lhs.free.begin(), lhs.free.end(),
                                   [&](const ClassifiedIndex& l) { return l.letter == c.letter; });
      const IndexOccurrence* o = find_occurrence(term.factors, c.letter);
      if (it == lhs.free.end()) {
        report.violations.push_back(Violation{kFreeIndexRule, c.letter, o->span,
                                              std::string("free index '") + c.letter +
                                                  "' does not appear on the left-hand side"});
      } else if (it->level != c.level) {
        report.violations.push_back(Violation{kFreeIndexRule, c.letter, o->span,
                                              std::string("free index '") + c.letter + "' is " + level_name(c.level) +
                                                  " here but " + level_name(it->level) + " on the left-hand side"});
      }
    }
    for (const ClassifiedIndex& l : lhs.free) {
      const bool present = std::any_of(ti.free.begin(), ti.free.end(),
                                       [&](const ClassifiedIndex& c) { return c.letter == l.letter; });
      if (!present)
        report.violations.push_back(Violation{kFreeIndexRule, l.letter, term.span,
                                              std::string("free index '") + l.letter + "' is missing from this term"});
    }
    report.terms.push_back(std::move(ti));
  }

  std::stable_sort(report.violations.begin(), report.violations.end(), [](const Violation& a, const Violation& b) {
    if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
    if (a.rule != b.rule) return a.rule < b.rule;
    return a.index < b.index;
  });
  report.valid = report.violations.empty();
  return report;
}

nlohmann::json report_to_json(const ValidationReport& report) {
  auto classified = [](const std::vector<ClassifiedIndex>& list) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& c : list) out.push_back({{"index", std::string(1, c.letter)}, {"level", level_name(c.level)}});
    return out;
  };
  nlohmann::json violations = nlohmann::json::array();
  for (const Violation& v : report.violations)
    violations.push_back({{"rule", v.rule},
                          {"index", std::string(1, v.index)},
                          {"start", v.span.begin},
                          {"end", v.span.end},
                          {"message", v.message}});
  nlohmann::json terms = nlohmann::json::array();
  for (const TermIndices& t : report.terms) {
    nlohmann::json sums = nlohmann::json::array();
    for (char c : t.summation) sums.push_back(std::string(1, c));
    terms.push_back({{"free", classified(t.free)}, {"summation", sums}});
  }
  return {{"verdict", report.valid ? "valid" : "invalid"},
          {"violations", violations},
          {"free", classified(report.free)},
          {"terms", terms}};
}

DenseTensor evaluate(const IndexExpression& e, const Bindings& bindings, int dim) {
  if (dim < 1) throw ShapeError("dimension must be at least 1");
  const ValidationReport report = validate(e);
  if (!report.valid) {
    const Violation& v = report.violations.front();
    throw ValidationError("rule " + v.rule + ": " + v.message);
  }

  struct BoundFactor {
    const DenseTensor* tensor = nullptr;
    double literal = 1.0;
    std::vector<char> letters;  // uppers then lowers, matching storage order
  };

  std::vector<std::vector<BoundFactor>> terms;
  for (const Term& term : e.rhs) {
    std::vector<BoundFactor> bound;
    for (const Factor& f : term.factors) {
      BoundFactor b;
      if (f.is_literal()) {
        b.literal = *f.literal;
      } else {
        const auto it = bindings.find(f.name);
        if (it == bindings.end()) throw BindingError("symbol '" + f.name + "' is not bound");
        const DenseTensor& t = it->second;
        const Valency expected{static_cast<int>(f.upper.size()), static_cast<int>(f.lower.size())};
        if (t.valency() != expected)
          throw ShapeError("symbol '" + f.name + "' is bound to a (" + std::to_string(t.valency().r) + "," +
                           std::to_string(t.valency().s) + ")-tensor but used with " + std::to_string(expected.r) +
                           " upper and " + std::to_string(expected.s) + " lower indices");
        if (t.dim() != dim) throw ShapeError("symbol '" + f.name + "' has dimension " + std::to_string(t.dim()));
        b.tensor = &t;
        for (const auto& o : f.upper) b.letters.push_back(o.letter);
        for (const auto& o : f.lower) b.letters.push_back(o.letter);
      }
      bound.push_back(std::move(b));
    }
    terms.push_back(std::move(bound));
  }

  std::vector<char> lhs_letters;
  for (const auto& o : e.lhs.upper) lhs_letters.push_back(o.letter);
  for (const auto& o : e.lhs.lower) lhs_letters.push_back(o.letter);
  DenseTensor result(Valency{static_cast<int>(e.lhs.upper.size()), static_cast<int>(e.lhs.lower.size())}, dim);

  std::array<int, 256> value{};  // current 0-based value per letter
  std::vector<int> idx;
  for (std::size_t flat = 0; flat < result.size(); ++flat) {
    const auto free_values = result.multi_index(flat);
    for (std::size_t k = 0; k < lhs_letters.size(); ++k)
      value[static_cast<unsigned char>(lhs_letters[k])] = free_values[k];
    double total = 0.0;
    for (std::size_t n = 0; n < terms.size(); ++n) {
      const auto& sums = report.terms[n].summation;
      for (char c : sums) value[static_cast<unsigned char>(c)] = 0;
      double term_sum = 0.0;
      for (;;) {
        double product = e.rhs[n].sign;
        for (const BoundFactor& b : terms[n]) {
          if (!b.tensor) {
            product *= b.literal;
            continue;
          }
          idx.resize(b.letters.size());
          for (std::size_t k = 0; k < b.letters.size(); ++k) idx[k] = value[static_cast<unsigned char>(b.letters[k])];
          product *= (*b.tensor)[b.tensor->offset(idx)];
        }
        term_sum += product;
        // odometer over summation indices
        std::size_t k = 0;
        for (; k < sums.size(); ++k) {
          int& v = value[static_cast<unsigned char>(sums[k])];
          if (++v < dim) break;
          v = 0;
        }
        if (k == sums.size()) break;
      }
      total += term_sum;
    }
    result[flat] = total;
  }
  return result;
}

namespace {

std::string render_symbol(const Factor& f) {
  if (f.is_literal()) {
    std::ostringstream os;
    os << *f.literal;
    return os.str();
  }
  std::string out = f.name;
  auto group = [&out](char marker, const std::vector<IndexOccurrence>& list) {
    if (list.empty()) return;
    out += marker;
    out += '{';
    for (const auto& o : list) out += o.letter;
    out += '}';
  };
  group('^', f.upper);
  group('_', f.lower);
  return out;
}

}  // namespace

std::string explicit_form(const IndexExpression& e, int dim) {
  const ValidationReport report = validate(e);
  std::string out = render_symbol(e.lhs) + " =";
  for (std::size_t n = 0; n < e.rhs.size(); ++n) {
    const Term& term = e.rhs[n];
    if (n == 0) {
      out += term.sign < 0 ? " -" : "";
    } else {
      out += term.sign < 0 ? " -" : " +";
    }
    if (n < report.terms.size())
      for (char c : report.terms[n].summation) out += std::string(" sum_{") + c + "=1.." + std::to_string(dim) + "}";
    for (const Factor& f : term.factors) out += " " + render_symbol(f);
  }
  return out;
}

}  // namespace tensorkit::index_lang
