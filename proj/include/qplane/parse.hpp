#pragma once

// Recursive-descent parser for plane-algebra and form expressions.
//
//   expr   := ("-")? term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := atom ("^" signed-integer)?
//   atom   := "x" | "y" | "q" | "dx" | "dy" | "t1".."t3" | "tau"
//           | integer | "(" expr ")"
//
// '*' is noncommutative and order-preserving; on forms it is the wedge.
// '/' multiplies by the inverse of the next factor (invertible factors only).
// Frame and coordinate symbols need an active calculus.

#include <cctype>

#include "qplane/forms.hpp"

namespace qplane {

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        pos(pos) {}
  size_t pos;
};

/// Parse result: a plane element, promoted to a graded form as soon as any
/// form symbol enters the expression.
struct Parsed {
  PlaneElement scalar;
  std::optional<GradedForm> form;

  bool isForm() const { return form.has_value(); }
  int degree() const { return form ? form->degree() : 0; }

  /// Forces a form representation (degree 0 wraps the scalar).
  GradedForm asForm(const Calculus& cal) const {
    return form ? *form : cal.scalarForm(scalar);
  }
  std::string toString() const {
    return form ? form->toString() : scalar.toString();
  }
};

class Parser {
 public:
  Parser(std::string text, const Calculus* cal)
      : text_(std::move(text)), cal_(cal) {}

  Parsed parse() {
    Parsed v = parseExpr();
    skipSpace();
    if (pos_ != text_.size()) throw ParseError("unexpected input", pos_);
    return v;
  }

 private:
  Parsed parseExpr() {
    skipSpace();
    bool negate = false;
    if (peek() == '-') {
      ++pos_;
      negate = true;
    }
    Parsed acc = parseTerm();
    if (negate) acc = neg(acc);
    while (true) {
      skipSpace();
      char c = peek();
      if (c != '+' && c != '-') break;
      ++pos_;
      Parsed rhs = parseTerm();
      acc = addSub(acc, rhs, c == '-');
    }
    return acc;
  }

  Parsed parseTerm() {
    Parsed acc = parseFactor();
    while (true) {
      skipSpace();
      char c = peek();
      if (c != '*' && c != '/') break;
      size_t at = pos_;
      ++pos_;
      Parsed rhs = parseFactor();
      if (c == '/') rhs = invert(rhs, at);
      acc = mul(acc, rhs);
    }
    return acc;
  }

  Parsed parseFactor() {
    Parsed base = parseAtom();
    skipSpace();
    if (peek() != '^') return base;
    size_t at = pos_;
    ++pos_;
    int e = parseSignedInt();
    return power(base, e, at);
  }

  Parsed parseAtom() {
    skipSpace();
    size_t at = pos_;
    char c = peek();
    if (c == '(') {
      ++pos_;
      Parsed v = parseExpr();
      skipSpace();
      if (peek() != ')') throw ParseError("expected ')'", pos_);
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      long n = parseUnsignedInt();
      Parsed v;
      v.scalar = PlaneElement(QScalar(n));
      return v;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_]))))
        name += text_[pos_++];
      return symbol(name, at);
    }
    throw ParseError("expected an atom", pos_);
  }

  Parsed symbol(const std::string& name, size_t at) {
    Parsed v;
    if (name == "x") {
      v.scalar = PlaneElement::x();
      return v;
    }
    if (name == "y") {
      v.scalar = PlaneElement::y();
      return v;
    }
    if (name == "q") {
      v.scalar = PlaneElement(QScalar::q());
      return v;
    }
    auto needCal = [&]() -> const Calculus& {
      if (!cal_)
        throw ParseError("symbol '" + name + "' needs a preset context", at);
      return *cal_;
    };
    if (name == "dx") {
      v.form = needCal().coordDiff(0);
      return v;
    }
    if (name == "dy") {
      v.form = needCal().coordDiff(1);
      return v;
    }
    if (name == "tau") {
      const Calculus& cal = needCal();
      if (cal.n() < 3)
        throw ParseError("'tau' needs a three-derivation preset", at);
      v.form = cal.coordDiff(2);
      return v;
    }
    if (name.size() == 2 && name[0] == 't' && name[1] >= '1' && name[1] <= '9') {
      int idx = name[1] - '1';
      const Calculus& cal = needCal();
      if (idx >= cal.n())
        throw ParseError("frame index out of range for this preset", at);
      v.form = cal.theta(idx);
      return v;
    }
    throw ParseError("unknown symbol '" + name + "'", at);
  }

  // -- value operations -------------------------------------------------------

  static Parsed neg(Parsed v) {
    if (v.form)
      v.form = -*v.form;
    else
      v.scalar = -v.scalar;
    return v;
  }

  Parsed addSub(const Parsed& a, const Parsed& b, bool sub) const {
    Parsed r;
    if (!a.isForm() && !b.isForm()) {
      r.scalar = sub ? a.scalar - b.scalar : a.scalar + b.scalar;
      return r;
    }
    const Calculus& cal = requireCal();
    GradedForm fa = a.asForm(cal), fb = b.asForm(cal);
    if (fa.degree() != fb.degree())
      throw ParseError("cannot add forms of different degree", pos_);
    r.form = sub ? fa - fb : fa + fb;
    return r;
  }

  Parsed mul(const Parsed& a, const Parsed& b) const {
    Parsed r;
    if (!a.isForm() && !b.isForm()) {
      r.scalar = a.scalar * b.scalar;
      return r;
    }
    const Calculus& cal = requireCal();
    r.form = cal.wedge(a.asForm(cal), b.asForm(cal));
    return r;
  }

  Parsed invert(const Parsed& v, size_t at) const {
    Parsed r;
    if (v.isForm() && v.form->degree() > 0)
      throw ParseError("cannot invert a form of positive degree", at);
    PlaneElement s = v.isForm() ? v.form->coeff({}) : v.scalar;
    try {
      r.scalar = s.inverse();
    } catch (const std::domain_error&) {
      throw ParseError("divisor is not an invertible monomial", at);
    }
    return r;
  }

  Parsed power(const Parsed& v, int e, size_t at) const {
    if (e < 0) {
      Parsed inv = invert(v, at);
      return power(inv, -e, at);
    }
    Parsed r;
    if (!v.isForm()) {
      r.scalar = PlaneElement::one();
      for (int i = 0; i < e; ++i) r.scalar *= v.scalar;
      return r;
    }
    const Calculus& cal = requireCal();
    if (e == 0) {
      r.scalar = PlaneElement::one();
      return r;
    }
    GradedForm acc = *v.form;
    for (int i = 1; i < e; ++i) acc = cal.wedge(acc, *v.form);
    r.form = acc;
    return r;
  }

  const Calculus& requireCal() const {
    if (!cal_) throw ParseError("form arithmetic needs a preset context", pos_);
    return *cal_;
  }

  // -- lexing -----------------------------------------------------------------

  void skipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  long parseUnsignedInt() {
    size_t at = pos_;
    long v = 0;
    bool any = false;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_++] - '0');
      any = true;
      if (v > 1000000000L) throw ParseError("integer literal too large", at);
    }
    if (!any) throw ParseError("expected an integer", at);
    return v;
  }

  int parseSignedInt() {
    skipSpace();
    int sign = 1;
    if (peek() == '-') {
      sign = -1;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    return sign * static_cast<int>(parseUnsignedInt());
  }

  std::string text_;
  const Calculus* cal_;
  size_t pos_ = 0;
};

inline Parsed parseExpression(const std::string& text,
                              const Calculus* cal = nullptr) {
  return Parser(text, cal).parse();
}

}  // namespace qplane
