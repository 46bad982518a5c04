#pragma once

// Exact arithmetic in Q(q): rational functions of the deformation parameter q
// with integer-polynomial numerator/denominator kept in canonical form.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qplane {

using Int = mpz_class;
using Rat = mpq_class;

/// Dense univariate polynomial over Z in the variable q.
/// Coefficients are stored ascending by exponent; the zero polynomial is the
/// empty vector and every nonzero polynomial has a nonzero leading entry.
class ZPoly {
 public:
  ZPoly() = default;
  explicit ZPoly(Int constant) {
    if (constant != 0) coeffs_.push_back(std::move(constant));
  }
  explicit ZPoly(long constant) : ZPoly(Int(constant)) {}

  static ZPoly monomial(int exp, Int coeff) {
    if (exp < 0) throw std::invalid_argument("ZPoly: negative exponent");
    ZPoly p;
    if (coeff == 0) return p;
    p.coeffs_.assign(static_cast<size_t>(exp) + 1, Int(0));
    p.coeffs_.back() = std::move(coeff);
    return p;
  }
  static ZPoly variable() { return monomial(1, Int(1)); }

  bool isZero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const Int& leading() const {
    if (isZero()) throw std::logic_error("ZPoly: leading of zero");
    return coeffs_.back();
  }
  const std::vector<Int>& coeffs() const { return coeffs_; }
  Int coeff(int exp) const {
    if (exp < 0 || exp > degree()) return Int(0);
    return coeffs_[static_cast<size_t>(exp)];
  }

  friend ZPoly operator+(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    r.coeffs_.resize(std::max(a.coeffs_.size(), b.coeffs_.size()), Int(0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i) r.coeffs_[i] += a.coeffs_[i];
    for (size_t i = 0; i < b.coeffs_.size(); ++i) r.coeffs_[i] += b.coeffs_[i];
    r.trim();
    return r;
  }
  friend ZPoly operator-(const ZPoly& a, const ZPoly& b) { return a + (-b); }
  ZPoly operator-() const {
    ZPoly r = *this;
    for (auto& c : r.coeffs_) c = -c;
    return r;
  }
  friend ZPoly operator*(const ZPoly& a, const ZPoly& b) {
    ZPoly r;
    if (a.isZero() || b.isZero()) return r;
    r.coeffs_.assign(a.coeffs_.size() + b.coeffs_.size() - 1, Int(0));
    for (size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (size_t j = 0; j < b.coeffs_.size(); ++j)
        r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    r.trim();
    return r;
  }
  friend bool operator==(const ZPoly& a, const ZPoly& b) {
    return a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const ZPoly& a, const ZPoly& b) { return !(a == b); }

  /// gcd of all coefficients, nonnegative; 0 for the zero polynomial.
  Int content() const {
    Int g(0);
    for (const auto& c : coeffs_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
  }

  /// Exact division; throws if the division leaves a remainder.
  ZPoly divExact(const ZPoly& d) const {
    if (d.isZero()) throw std::domain_error("ZPoly: division by zero");
    ZPoly rem = *this, quot;
    if (rem.isZero()) return quot;
    if (rem.degree() < d.degree()) throw std::domain_error("ZPoly: inexact division");
    quot.coeffs_.assign(static_cast<size_t>(rem.degree() - d.degree()) + 1, Int(0));
    while (!rem.isZero() && rem.degree() >= d.degree()) {
      Int qc;
      mpz_divexact(qc.get_mpz_t(), rem.leading().get_mpz_t(), d.leading().get_mpz_t());
      if (qc * d.leading() != rem.leading())
        throw std::domain_error("ZPoly: inexact division");
      int shift = rem.degree() - d.degree();
      quot.coeffs_[static_cast<size_t>(shift)] = qc;
      rem = rem - d * monomial(shift, qc);
    }
    if (!rem.isZero()) throw std::domain_error("ZPoly: inexact division");
    quot.trim();
    return quot;
  }

  /// gcd over Z[q] (content times primitive gcd), with positive leading coefficient.
  static ZPoly gcd(const ZPoly& a, const ZPoly& b) {
    if (a.isZero()) return b.normalizedSign();
    if (b.isZero()) return a.normalizedSign();
    Int cont;
    mpz_gcd(cont.get_mpz_t(), a.content().get_mpz_t(), b.content().get_mpz_t());
    ZPoly pa = a.primitivePart(), pb = b.primitivePart();
    // Euclid on primitive parts via pseudo-remainders.
    while (!pb.isZero()) {
      ZPoly r = pseudoRem(pa, pb);
      pa = pb;
      pb = r.isZero() ? r : r.primitivePart();
    }
    return (pa.normalizedSign() * ZPoly(cont));
  }

  Rat evalAt(const Rat& x) const {
    Rat acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + Rat(*it);
    return acc;
  }

  /// Multiplicity of the root q = 1 (0 when p(1) != 0 or p = 0).
  int multiplicityAtOne() const {
    if (isZero()) return 0;
    ZPoly p = *this;
    const ZPoly qm1 = variable() - ZPoly(Int(1));
    int m = 0;
    while (p.evalAt(Rat(1)) == 0) {
      p = p.divExact(qm1);
      ++m;
    }
    return m;
  }

  std::string toString() const;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  ZPoly primitivePart() const {
    if (isZero()) return *this;
    Int c = content();
    if (leading() < 0) c = -c;
    ZPoly r = *this;
    for (auto& x : r.coeffs_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), c.get_mpz_t());
    return r;
  }
  ZPoly normalizedSign() const {
    if (!isZero() && leading() < 0) return -*this;
    return *this;
  }
  static ZPoly pseudoRem(ZPoly a, const ZPoly& b) {
    // prem(a, b): lc(b)^(deg a - deg b + 1) * a mod b, computed incrementally.
    while (!a.isZero() && a.degree() >= b.degree()) {
      int shift = a.degree() - b.degree();
      Int lcA = a.leading();
      // scale a by lc(b) so the leading terms cancel exactly
      for (auto& c : a.coeffs_) c *= b.leading();
      a = a - b * monomial(shift, lcA);
      a.trim();
    }
    return a;
  }

  std::vector<Int> coeffs_;
};

inline std::string ZPoly::toString() const {
  if (isZero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int e = degree(); e >= 0; --e) {
    const Int& c = coeff(e);
    if (c == 0) continue;
    Int a = c > 0 ? c : Int(-c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (e == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << "q";
      if (e != 1) os << "^" << e;
    }
  }
  return os.str();
}

/// Result of the q -> 1 limit of a rational function: either a finite rational
/// value or the order of the pole at q = 1.
struct LimitQ1 {
  bool finite = true;
  Rat value{0};
  int poleOrder = 0;
};

/// Element of Q(q), the field of rational functions of q with rational
/// coefficients, held as num/den over Z[q] with gcd(num, den) = 1 and a
/// positive leading coefficient in den. Zero is 0/1.
class QScalar {
 public:
  QScalar() : num_(), den_(Int(1)) {}
  QScalar(long n) : num_(Int(n)), den_(Int(1)) {}
  explicit QScalar(Int n) : num_(std::move(n)), den_(Int(1)) {}
  explicit QScalar(const Rat& r)
      : num_(Int(r.get_num())), den_(Int(r.get_den())) {
    canonicalize();
  }
  QScalar(ZPoly num, ZPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.isZero()) throw std::domain_error("QScalar: zero denominator");
    canonicalize();
  }

  static QScalar q(int exp = 1) {
    if (exp >= 0) return QScalar(ZPoly::monomial(exp, Int(1)), ZPoly(Int(1)));
    return QScalar(ZPoly(Int(1)), ZPoly::monomial(-exp, Int(1)));
  }
  static QScalar fromRat(const Rat& r) { return QScalar(r); }

  const ZPoly& num() const { return num_; }
  const ZPoly& den() const { return den_; }
  bool isZero() const { return num_.isZero(); }
  bool isOne() const { return num_ == den_; }

  friend QScalar operator+(const QScalar& a, const QScalar& b) {
    return QScalar(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend QScalar operator-(const QScalar& a, const QScalar& b) {
    return QScalar(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  QScalar operator-() const {
    QScalar r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend QScalar operator*(const QScalar& a, const QScalar& b) {
    return QScalar(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend QScalar operator/(const QScalar& a, const QScalar& b) {
    if (b.isZero()) throw std::domain_error("QScalar: division by zero");
    return QScalar(a.num_ * b.den_, a.den_ * b.num_);
  }
  QScalar& operator+=(const QScalar& b) { return *this = *this + b; }
  QScalar& operator-=(const QScalar& b) { return *this = *this - b; }
  QScalar& operator*=(const QScalar& b) { return *this = *this * b; }
  QScalar& operator/=(const QScalar& b) { return *this = *this / b; }

  QScalar inverse() const {
    if (isZero()) throw std::domain_error("QScalar: inverse of zero");
    return QScalar(den_, num_);
  }
  QScalar pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    QScalar acc(1), base = *this;
    while (e) {
      if (e & 1) acc *= base;
      base *= base;
      e >>= 1;
    }
    return acc;
  }

  friend bool operator==(const QScalar& a, const QScalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const QScalar& a, const QScalar& b) { return !(a == b); }

  /// The q -> 1 limit. Total: a pole at q = 1 is reported with its order.
  LimitQ1 limitQ1() const {
    LimitQ1 out;
    if (den_.evalAt(Rat(1)) != 0) {
      out.finite = true;
      out.value = num_.evalAt(Rat(1)) / den_.evalAt(Rat(1));
      out.value.canonicalize();
      return out;
    }
    // canonical form: (q-1) cannot divide both num and den
    out.finite = false;
    out.poleOrder = den_.multiplicityAtOne();
    return out;
  }

  /// Exact evaluation at a rational point; nullopt on a pole there.
  std::optional<Rat> evalAt(const Rat& r) const {
    Rat d = den_.evalAt(r);
    if (d == 0) return std::nullopt;
    Rat v = num_.evalAt(r) / d;
    v.canonicalize();
    return v;
  }

  /// Substitution q -> s for a rational function s of q.
  QScalar subst(const QScalar& s) const {
    QScalar n = evalPolyAt(num_, s), d = evalPolyAt(den_, s);
    if (d.isZero())
      throw std::domain_error("QScalar: substitution lands on a pole");
    return n / d;
  }

  std::string toString() const {
    if (den_ == ZPoly(Int(1))) return num_.toString();
    auto termCount = [](const ZPoly& p) {
      int c = 0;
      for (const auto& x : p.coeffs())
        if (x != 0) ++c;
      return c;
    };
    if (termCount(num_) == 1 && termCount(den_) == 1) {
      // c q^j / d q^k rendered as a single signed monomial in q
      int j = num_.degree(), k = den_.degree();
      Rat r(num_.leading(), den_.leading());
      r.canonicalize();
      int e = j - k;
      std::ostringstream os;
      std::string rs = r.get_str();
      if (e == 0) return rs;
      if (rs == "1") {
      } else if (rs == "-1") {
        os << "-";
      } else {
        os << rs << "*";
      }
      os << "q";
      if (e != 1) os << "^" << e;
      return os.str();
    }
    std::ostringstream os;
    os << "(" << num_.toString() << ")/(" << den_.toString() << ")";
    return os.str();
  }

 private:
  static QScalar evalPolyAt(const ZPoly& p, const QScalar& s) {
    QScalar acc(0);
    for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it)
      acc = acc * s + QScalar(*it);
    return acc;
  }

  void canonicalize() {
    if (num_.isZero()) {
      den_ = ZPoly(Int(1));
      return;
    }
    ZPoly g = ZPoly::gcd(num_, den_);
    num_ = num_.divExact(g);
    den_ = den_.divExact(g);
    if (den_.leading() < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  ZPoly num_, den_;
};

inline QScalar operator*(long a, const QScalar& b) { return QScalar(a) * b; }

}  // namespace qplane
