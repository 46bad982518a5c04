#pragma once

// The generalized quantum plane: Laurent polynomials in x, y with xy = q*yx,
// kept in normal order (all x factors left of all y factors), plus the
// derivations acting on it.

#include <map>
#include <sstream>
#include <utility>
#include <variant>

#include "qplane/scalar.hpp"

namespace qplane {

/// A pole hit while taking a q -> 1 limit, carrying the offending monomial.
struct PoleAtOne : std::runtime_error {
  PoleAtOne(int m, int n, int order, const std::string& where)
      : std::runtime_error(where + ": coefficient of x^" + std::to_string(m) +
                           " y^" + std::to_string(n) + " has a pole of order " +
                           std::to_string(order) + " at q = 1"),
        m(m),
        n(n),
        order(order) {}
  int m, n, order;
};

/// Finite sum of normal-ordered monomials c(q) x^m y^n. Stored coefficients
/// are never zero; the map's (m, n) ordering fixes a canonical term order.
class PlaneElement {
 public:
  using Key = std::pair<int, int>;

  PlaneElement() = default;
  explicit PlaneElement(const QScalar& c) {
    if (!c.isZero()) terms_[{0, 0}] = c;
  }

  static PlaneElement monomial(int m, int n, QScalar c = QScalar(1)) {
    PlaneElement e;
    if (!c.isZero()) e.terms_[{m, n}] = std::move(c);
    return e;
  }
  static PlaneElement x(int p = 1) { return monomial(p, 0); }
  static PlaneElement y(int p = 1) { return monomial(0, p); }
  static PlaneElement one() { return PlaneElement(QScalar(1)); }

  const std::map<Key, QScalar>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  bool isScalar() const {
    return terms_.empty() ||
           (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
  }
  QScalar scalarPart() const {
    auto it = terms_.find({0, 0});
    return it == terms_.end() ? QScalar(0) : it->second;
  }
  QScalar coeff(int m, int n) const {
    auto it = terms_.find({m, n});
    return it == terms_.end() ? QScalar(0) : it->second;
  }

  friend PlaneElement operator+(const PlaneElement& a, const PlaneElement& b) {
    PlaneElement r = a;
    for (const auto& [k, c] : b.terms_) r.addTerm(k.first, k.second, c);
    return r;
  }
  friend PlaneElement operator-(const PlaneElement& a, const PlaneElement& b) {
    PlaneElement r = a;
    for (const auto& [k, c] : b.terms_) r.addTerm(k.first, k.second, -c);
    return r;
  }
  PlaneElement operator-() const {
    PlaneElement r;
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
  }

  /// Normal-ordered product: x^a y^b * x^c y^d = q^(-bc) x^(a+c) y^(b+d).
  friend PlaneElement operator*(const PlaneElement& a, const PlaneElement& b) {
    PlaneElement r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_) {
        QScalar c = ca * cb * QScalar::q(-ka.second * kb.first);
        r.addTerm(ka.first + kb.first, ka.second + kb.second, c);
      }
    return r;
  }
  friend PlaneElement operator*(const QScalar& s, const PlaneElement& a) {
    PlaneElement r;
    if (s.isZero()) return r;
    for (const auto& [k, c] : a.terms_) r.terms_[k] = s * c;
    return r;
  }
  friend PlaneElement operator*(const PlaneElement& a, const QScalar& s) {
    return s * a;  // scalars are central
  }
  PlaneElement& operator+=(const PlaneElement& b) { return *this = *this + b; }
  PlaneElement& operator-=(const PlaneElement& b) { return *this = *this - b; }
  PlaneElement& operator*=(const PlaneElement& b) { return *this = *this * b; }

  friend bool operator==(const PlaneElement& a, const PlaneElement& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const PlaneElement& a, const PlaneElement& b) {
    return !(a == b);
  }

  PlaneElement commutator(const PlaneElement& b) const {
    return *this * b - b * *this;
  }

  /// Inversion is defined for single invertible monomials only:
  /// (x^m y^n)^-1 = q^(-mn) x^-m y^-n.
  PlaneElement inverse() const {
    if (terms_.size() != 1)
      throw std::domain_error("PlaneElement: only monomials are invertible");
    const auto& [k, c] = *terms_.begin();
    return monomial(-k.first, -k.second,
                    c.inverse() * QScalar::q(-k.first * k.second));
  }

  /// Central for generic q iff every monomial is scalar (m = n = 0).
  bool isCentral() const { return isScalar(); }

  /// Commutative image at q = 1 as (m, n) -> rational coefficient.
  /// Throws PoleAtOne if any coefficient is singular there.
  std::map<Key, Rat> evalQ1() const {
    std::map<Key, Rat> out;
    for (const auto& [k, c] : terms_) {
      LimitQ1 lim = c.limitQ1();
      if (!lim.finite)
        throw PoleAtOne(k.first, k.second, lim.poleOrder, "evalQ1");
      if (lim.value != 0) out[k] = lim.value;
    }
    return out;
  }

  /// Entrywise exact evaluation of the coefficients at rational q = r.
  std::optional<std::map<Key, Rat>> evalAt(const Rat& r) const {
    std::map<Key, Rat> out;
    for (const auto& [k, c] : terms_) {
      auto v = c.evalAt(r);
      if (!v) return std::nullopt;
      if (*v != 0) out[k] = *v;
    }
    return out;
  }

  std::string toString() const {
    if (terms_.empty()) return "0";
    // wrap coefficients that carry a top-level +/- so the output re-parses
    auto needsWrap = [](const std::string& s) {
      int depth = 0;
      char prev = '\0';  // a '-' right after '^' is an exponent sign
      for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth == 0 && (ch == '+' || ch == '-') && prev != '^') return true;
        if (!std::isspace(static_cast<unsigned char>(ch))) prev = ch;
      }
      return false;
    };
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
      std::string cs = c.toString();
      bool negated = false;
      if (cs.size() > 1 && cs[0] == '-') {  // pull a leading sign out front
        negated = true;
        cs = cs.substr(1);
      }
      if (needsWrap(cs)) cs = "(" + cs + ")";
      if (first) {
        if (negated) os << "-";
        first = false;
      } else {
        os << (negated ? " - " : " + ");
      }
      bool hasVars = k.first != 0 || k.second != 0;
      bool coeffIsOne = cs == "1";
      if (!coeffIsOne || !hasVars) os << cs;
      if (hasVars) {
        if (!coeffIsOne) os << "*";
        if (k.first != 0) {
          os << "x";
          if (k.first != 1) os << "^" << k.first;
          if (k.second != 0) os << "*";
        }
        if (k.second != 0) {
          os << "y";
          if (k.second != 1) os << "^" << k.second;
        }
      }
    }
    return os.str();
  }

 private:
  void addTerm(int m, int n, const QScalar& c) {
    if (c.isZero()) return;
    auto it = terms_.find({m, n});
    if (it == terms_.end()) {
      terms_[{m, n}] = c;
      return;
    }
    it->second += c;
    if (it->second.isZero()) terms_.erase(it);
  }

  std::map<Key, QScalar> terms_;
};

inline PlaneElement operator*(long a, const PlaneElement& b) {
  return QScalar(a) * b;
}

/// A derivation of the plane algebra: either inner (f -> [lambda, f]) or
/// outer, given by its values on the generators and extended by Leibniz.
class Derivation {
 public:
  struct Inner {
    PlaneElement lambda;
  };
  struct Outer {
    PlaneElement imageX, imageY;
  };

  static Derivation inner(PlaneElement lambda) {
    Derivation d;
    d.kind_ = Inner{std::move(lambda)};
    return d;
  }

  /// Outer rules must respect xy = q yx:
  /// e(x) y + x e(y) - q (e(y) x + y e(x)) = 0.
  static Derivation outer(PlaneElement imageX, PlaneElement imageY) {
    PlaneElement X = PlaneElement::x(), Y = PlaneElement::y();
    PlaneElement lhs = imageX * Y + X * imageY -
                       QScalar::q() * (imageY * X + Y * imageX);
    if (!lhs.isZero())
      throw std::invalid_argument(
          "Derivation: outer rule violates the defining relation xy = q yx");
    Derivation d;
    d.kind_ = Outer{std::move(imageX), std::move(imageY)};
    return d;
  }

  bool isInner() const { return std::holds_alternative<Inner>(kind_); }
  const PlaneElement& lambda() const { return std::get<Inner>(kind_).lambda; }

  PlaneElement apply(const PlaneElement& f) const {
    if (isInner()) return lambda().commutator(f);
    const auto& o = std::get<Outer>(kind_);
    PlaneElement out;
    for (const auto& [k, c] : f.terms())
      out += c * applyMonomial(o, k.first, k.second);
    return out;
  }

 private:
  // Leibniz over x^m y^n; negative powers via e(x^-1) = -x^-1 e(x) x^-1.
  static PlaneElement applyMonomial(const Outer& o, int m, int n) {
    PlaneElement xm = powerImage(PlaneElement::x(), o.imageX, m);
    PlaneElement yn = powerImage(PlaneElement::y(), o.imageY, n);
    return xm * PlaneElement::y(n) + PlaneElement::x(m) * yn;
  }
  static PlaneElement powerImage(const PlaneElement& g, const PlaneElement& eg,
                                 int p) {
    if (p == 0) return PlaneElement();
    PlaneElement base = g, ebase = eg;
    if (p < 0) {
      base = g.inverse();
      ebase = -(base * eg * base);
      p = -p;
    }
    // e(base^p) = sum_i base^i e(base) base^(p-1-i)
    PlaneElement acc;
    PlaneElement left = PlaneElement::one();
    PlaneElement right = PlaneElement::one();
    for (int i = 1; i < p; ++i) right *= base;
    for (int i = 0; i < p; ++i) {
      acc += left * ebase * right;
      left *= base;
      if (i + 1 < p) right = right * base.inverse();
    }
    return acc;
  }

  std::variant<Inner, Outer> kind_;
};

}  // namespace qplane
