#pragma once

// The q -> 1 classical limit on the 2-plane minus the axes: commutative
// Laurent polynomials and rational functions in x, y, the induced Poisson
// bracket {x, y} = xy, limit frames, the Cartan structure equations and the
// Gaussian curvature of the frame metric.

#include "qplane/connection.hpp"

namespace qplane {

/// Commutative Laurent polynomial in x, y over Q.
class CPoly {
 public:
  using Key = std::pair<int, int>;

  CPoly() = default;
  explicit CPoly(const Rat& c) {
    if (c != 0) terms_[{0, 0}] = c;
  }
  static CPoly monomial(int m, int n, Rat c = Rat(1)) {
    CPoly p;
    if (c != 0) p.terms_[{m, n}] = std::move(c);
    return p;
  }
  static CPoly x(int p = 1) { return monomial(p, 0); }
  static CPoly y(int p = 1) { return monomial(0, p); }
  static CPoly fromQ1(const std::map<Key, Rat>& image) {
    CPoly p;
    for (const auto& [k, c] : image)
      if (c != 0) p.terms_[k] = c;
    return p;
  }

  const std::map<Key, Rat>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }

  friend CPoly operator+(const CPoly& a, const CPoly& b) {
    CPoly r = a;
    for (const auto& [k, c] : b.terms_) r.add(k, c);
    return r;
  }
  friend CPoly operator-(const CPoly& a, const CPoly& b) { return a + (-b); }
  CPoly operator-() const {
    CPoly r;
    for (const auto& [k, c] : terms_) r.terms_[k] = -c;
    return r;
  }
  friend CPoly operator*(const CPoly& a, const CPoly& b) {
    CPoly r;
    for (const auto& [ka, ca] : a.terms_)
      for (const auto& [kb, cb] : b.terms_)
        r.add({ka.first + kb.first, ka.second + kb.second}, ca * cb);
    return r;
  }
  friend CPoly operator*(const Rat& s, const CPoly& a) {
    CPoly r;
    if (s == 0) return r;
    for (const auto& [k, c] : a.terms_) r.terms_[k] = s * c;
    return r;
  }
  friend bool operator==(const CPoly& a, const CPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const CPoly& a, const CPoly& b) { return !(a == b); }
  CPoly& operator+=(const CPoly& b) { return *this = *this + b; }
  CPoly& operator-=(const CPoly& b) { return *this = *this - b; }

  CPoly dx() const {
    CPoly r;
    for (const auto& [k, c] : terms_)
      if (k.first != 0) r.add({k.first - 1, k.second}, Rat(k.first) * c);
    return r;
  }
  CPoly dy() const {
    CPoly r;
    for (const auto& [k, c] : terms_)
      if (k.second != 0) r.add({k.first, k.second - 1}, Rat(k.second) * c);
    return r;
  }

  std::string toString() const;

 private:
  void add(const Key& k, const Rat& c) {
    auto it = terms_.find(k);
    if (it == terms_.end()) {
      if (c != 0) terms_[k] = c;
      return;
    }
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
  std::map<Key, Rat> terms_;
};

inline std::string CPoly::toString() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    Rat a = c;
    bool neg = a < 0;
    if (neg) a = -a;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    bool hasVars = k.first != 0 || k.second != 0;
    if (a != 1 || !hasVars) {
      os << a.get_str();
      if (hasVars) os << "*";
    }
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
  return os.str();
}

/// Ratio of commutative Laurent polynomials, canonicalized by clearing common
/// monomial factors and content and by attempting exact division.
class CRational {
 public:
  CRational() : num_(), den_(Rat(1)) {}
  CRational(const Rat& r) : num_(r), den_(Rat(1)) {}
  explicit CRational(CPoly p) : num_(std::move(p)), den_(Rat(1)) {}
  CRational(CPoly num, CPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.isZero()) throw std::domain_error("CRational: zero denominator");
    canonicalize();
  }

  const CPoly& num() const { return num_; }
  const CPoly& den() const { return den_; }
  bool isZero() const { return num_.isZero(); }

  friend CRational operator+(const CRational& a, const CRational& b) {
    return CRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend CRational operator-(const CRational& a, const CRational& b) {
    return CRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  CRational operator-() const {
    CRational r = *this;
    r.num_ = -r.num_;
    return r;
  }
  friend CRational operator*(const CRational& a, const CRational& b) {
    return CRational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend CRational operator/(const CRational& a, const CRational& b) {
    if (b.isZero()) throw std::domain_error("CRational: division by zero");
    return CRational(a.num_ * b.den_, a.den_ * b.num_);
  }
  CRational& operator+=(const CRational& b) { return *this = *this + b; }
  CRational& operator-=(const CRational& b) { return *this = *this - b; }

  friend bool operator==(const CRational& a, const CRational& b) {
    return (a.num_ * b.den_) == (b.num_ * a.den_);
  }
  friend bool operator!=(const CRational& a, const CRational& b) {
    return !(a == b);
  }

  /// Partial derivatives by the quotient rule.
  CRational dx() const {
    return CRational(num_.dx() * den_ - num_ * den_.dx(), den_ * den_);
  }
  CRational dy() const {
    return CRational(num_.dy() * den_ - num_ * den_.dy(), den_ * den_);
  }

  std::string toString() const {
    if (den_ == CPoly(Rat(1))) return num_.toString();
    return "(" + num_.toString() + ")/(" + den_.toString() + ")";
  }

 private:
  // lex-leading-term division; succeeds only when den divides num exactly
  static bool tryDivide(const CPoly& num, const CPoly& den, CPoly& out) {
    CPoly q, r = num;
    auto lead = [](const CPoly& p) { return std::prev(p.terms().end()); };
    while (!r.isZero()) {
      auto lr = lead(r), ld = lead(den);
      CPoly::Key k{lr->first.first - ld->first.first,
                   lr->first.second - ld->first.second};
      Rat c = lr->second / ld->second;
      CPoly t = CPoly::monomial(k.first, k.second, c);
      CPoly next = r - t * den;
      if (!next.isZero() && !(lead(next)->first < lr->first)) return false;
      q += t;
      r = next;
    }
    out = q;
    return true;
  }

  void canonicalize() {
    if (num_.isZero()) {
      den_ = CPoly(Rat(1));
      return;
    }
    // clear the common monomial so both parts are honest polynomials
    int mMin = INT32_MAX, nMin = INT32_MAX;
    for (const auto& p : {num_, den_})
      for (const auto& [k, c] : p.terms()) {
        mMin = std::min(mMin, k.first);
        nMin = std::min(nMin, k.second);
      }
    if (mMin != 0 || nMin != 0) {
      CPoly shift = CPoly::monomial(-mMin, -nMin);
      num_ = num_ * shift;
      den_ = den_ * shift;
    }
    CPoly q;
    if (tryDivide(num_, den_, q)) {
      num_ = q;
      den_ = CPoly(Rat(1));
    }
    // content and sign normalization on the denominator
    Rat lead = std::prev(den_.terms().end())->second;
    if (lead != 1) {
      Rat inv = 1 / lead;
      num_ = inv * num_;
      den_ = inv * den_;
    }
  }

  CPoly num_, den_;
};

/// Commutative differential form of degree 0, 1 or 2 on the basis
/// {1}, {dx, dy}, {dx^dy}.
struct CForm {
  int degree = 0;
  std::vector<CRational> c;  // 1, 2 or 1 entries

  static CForm zero(int degree) {
    CForm f;
    f.degree = degree;
    f.c.assign(degree == 1 ? 2 : 1, CRational());
    return f;
  }
  static CForm scalar(CRational v) {
    CForm f = zero(0);
    f.c[0] = std::move(v);
    return f;
  }
  static CForm oneForm(CRational cx, CRational cy) {
    CForm f = zero(1);
    f.c[0] = std::move(cx);
    f.c[1] = std::move(cy);
    return f;
  }
  static CForm area(CRational v) {
    CForm f = zero(2);
    f.c[0] = std::move(v);
    return f;
  }

  bool isZero() const {
    for (const auto& v : c)
      if (!v.isZero()) return false;
    return true;
  }
  friend CForm operator+(const CForm& a, const CForm& b) {
    if (a.degree != b.degree) throw std::invalid_argument("CForm: degree");
    CForm r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
    return r;
  }
  friend CForm operator-(const CForm& a, const CForm& b) {
    if (a.degree != b.degree) throw std::invalid_argument("CForm: degree");
    CForm r = a;
    for (size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
    return r;
  }
  friend CForm operator*(const CRational& s, const CForm& a) {
    CForm r = a;
    for (auto& v : r.c) v = s * v;
    return r;
  }
  friend bool operator==(const CForm& a, const CForm& b) {
    if (a.degree != b.degree) return false;
    for (size_t i = 0; i < a.c.size(); ++i)
      if (a.c[i] != b.c[i]) return false;
    return true;
  }

  CForm d() const {
    if (degree == 0)
      return oneForm(c[0].dx(), c[0].dy());
    if (degree == 1)
      return area(c[1].dx() - c[0].dy());
    CForm top;  // no 3-forms on the plane
    top.degree = 3;
    return top;
  }
  friend CForm wedge(const CForm& a, const CForm& b) {
    if (a.degree + b.degree > 2)
      throw std::domain_error("CForm: wedge above the top degree");
    if (a.degree == 0) return a.c[0] * b;
    if (b.degree == 0) return b.c[0] * a;
    return area(a.c[0] * b.c[1] - a.c[1] * b.c[0]);
  }

  std::string toString() const {
    static const char* names1[] = {"dx", "dy"};
    if (isZero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c.size(); ++i) {
      if (c[i].isZero()) continue;
      if (!first) os << " + ";
      first = false;
      std::string cs = c[i].toString();
      bool paren = cs.find(" + ") != std::string::npos ||
                   cs.find(" - ") != std::string::npos;
      if (degree == 0) {
        os << cs;
        continue;
      }
      os << (paren ? "(" + cs + ")" : cs);
      os << (degree == 1 ? std::string("*") + names1[i] : "*dx^dy");
    }
    return os.str();
  }
};

/// Poisson bracket {f, g} = xy (f_x g_y - f_y g_x), the q -> 1 shadow of the
/// commutator.
inline CPoly poisson(const CPoly& f, const CPoly& g) {
  return CPoly::monomial(1, 1) * (f.dx() * g.dy() - f.dy() * g.dx());
}

/// The same bracket through the normal-ordered lift: the q -> 1 limit of
/// (q - 1)^-1 [fhat, ghat]. Both routes must agree.
inline CPoly poissonViaCommutator(const CPoly& f, const CPoly& g) {
  PlaneElement fh, gh;
  for (const auto& [k, c] : f.terms())
    fh += PlaneElement::monomial(k.first, k.second, QScalar(c));
  for (const auto& [k, c] : g.terms())
    gh += PlaneElement::monomial(k.first, k.second, QScalar(c));
  PlaneElement br =
      (QScalar(1) / (QScalar::q() - QScalar(1))) * fh.commutator(gh);
  return CPoly::fromQ1(br.evalQ1());
}

/// The q -> 1 chart: p_a = lim (q-1) lambda_a (inner calculi only) and the
/// limit frame theta^a = theta^a_b dx^b. The Poisson structure is {x,y} = xy.
struct ClassicalChart {
  std::optional<std::vector<CPoly>> p;
  std::vector<CForm> frame;  // two degree-1 forms
};

/// Eq.-style frame duality: {p_c, x^a} theta^c_b = delta^a_b.
inline bool frameEquationCheck(const std::vector<CPoly>& p,
                               const std::vector<CForm>& frame) {
  if (p.size() != 2 || frame.size() != 2)
    throw std::invalid_argument("frameEquationCheck: two-dimensional data");
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      CRational acc;
      for (int c = 0; c < 2; ++c) {
        CPoly xa = a == 0 ? CPoly::x() : CPoly::y();
        acc += CRational(poisson(p[static_cast<size_t>(c)], xa)) *
               frame[static_cast<size_t>(c)].c[static_cast<size_t>(b)];
      }
      if (acc != CRational(Rat(a == b ? 1 : 0))) return false;
    }
  return true;
}

inline ClassicalChart classicalChart(const Calculus& cal) {
  ClassicalChart chart;
  const auto& F = cal.frameToCoord();
  for (int a = 0; a < cal.n(); ++a) {
    std::vector<CRational> comp;
    for (int mu = 0; mu < cal.n(); ++mu) {
      try {
        comp.push_back(
            CRational(CPoly::fromQ1(F[static_cast<size_t>(a)][static_cast<size_t>(mu)].evalQ1())));
      } catch (const PoleAtOne& p) {
        throw std::runtime_error(
            "classical chart: frame entry theta^" + std::to_string(a + 1) +
            "[" + cal.coordName(mu) + "] is singular at q = 1 (pole of order " +
            std::to_string(p.order) + ")");
      }
    }
    if (cal.n() == 2)
      chart.frame.push_back(CForm::oneForm(comp[0], comp[1]));
  }
  if (cal.n() != 2)
    throw std::runtime_error(
        "classical chart: only two-derivation calculi have a 2-plane limit");
  if (cal.hasStructure()) {
    std::vector<CPoly> p;
    QScalar qm1 = QScalar::q() - QScalar(1);
    for (int a = 0; a < cal.n(); ++a)
      p.push_back(CPoly::fromQ1((qm1 * cal.lambda(a)).evalQ1()));
    if (!frameEquationCheck(p, chart.frame))
      throw std::runtime_error(
          "classical chart: the limit frame fails the duality equation");
    chart.p = std::move(p);
  }
  return chart;
}

/// The unique antisymmetric connection 1-form of a nondegenerate frame:
/// d theta^1 = -w ^ theta^2, d theta^2 = w ^ theta^1.
inline CForm cartanConnection(const std::vector<CForm>& frame) {
  if (frame.size() != 2 || frame[0].degree != 1 || frame[1].degree != 1)
    throw std::invalid_argument("cartanConnection: two degree-1 forms");
  const CRational &t1x = frame[0].c[0], &t1y = frame[0].c[1];
  const CRational &t2x = frame[1].c[0], &t2y = frame[1].c[1];
  CRational det = t1x * t2y - t1y * t2x;  // covolume coefficient
  if (det.isZero())
    throw std::domain_error("cartanConnection: degenerate frame");
  CRational A1 = frame[0].d().c[0], A2 = frame[1].d().c[0];
  // [-t2y  t2x] [a]   [A1]
  // [ t1y -t1x] [b] = [A2]
  CRational a = (A1 * (-t1x) - t2x * A2) / det;
  CRational b = ((-t2y) * A2 - t1y * A1) / det;
  CForm w = CForm::oneForm(a, b);
  // the defining equations hold by construction; keep them checked
  if (!(frame[0].d() + wedge(w, frame[1])).isZero() ||
      !(frame[1].d() - wedge(w, frame[0])).isZero())
    throw std::logic_error("cartanConnection: residual structure equations");
  return w;
}

/// Gaussian curvature under the convention d w = -K theta^1 ^ theta^2.
inline CRational gaussCurvature(const std::vector<CForm>& frame) {
  CForm w = cartanConnection(frame);
  CRational covol = wedge(frame[0], frame[1]).c[0];
  return -(w.d().c[0] / covol);
}

/// Comparison of the q -> 1 limit of omega0 against the Cartan connection of
/// the limit frame.
struct LimitCrosscheck {
  enum class Status { ok, pole };
  Status status = Status::ok;
  PoleReport pole;       // set when status == pole
  CForm candidate;       // antisymmetric part of the omega0 limit
  CForm cartan;          // independent Cartan computation
  CForm difference;
  bool matches = false;
};

inline LimitCrosscheck connectionLimitCrosscheck(const Calculus& cal,
                                                 const SigmaTensor& sigma) {
  if (cal.n() != 2)
    throw std::domain_error(
        "connection limit crosscheck: two-derivation calculi only");
  ConnectionData conn = omega0(cal, sigma);  // rejects outer calculi
  LimitCrosscheck out;
  PoleReport poles = omegaQ1Poles(conn);
  if (!poles.regular) {
    out.status = LimitCrosscheck::Status::pole;
    out.pole = poles;
    return out;
  }
  ClassicalChart chart = classicalChart(cal);
  // frame-index connection forms what^a_c = lim(omega^a_bc) theta^b
  auto omHat = [&](int a, int c) {
    CForm acc = CForm::zero(1);
    for (int b = 0; b < 2; ++b) {
      CRational lim(CPoly::fromQ1(conn.om(a, b, c).evalQ1()));
      acc = acc + lim * chart.frame[static_cast<size_t>(b)];
    }
    return acc;
  };
  CRational half(Rat(1, 2));
  out.candidate = half * (omHat(0, 1) - omHat(1, 0));
  out.cartan = cartanConnection(chart.frame);
  out.difference = out.candidate - out.cartan;
  out.matches = out.difference.isZero();
  return out;
}

}  // namespace qplane
