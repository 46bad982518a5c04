#pragma once

// Frame-based differential calculus over the quantum plane. A calculus is
// built from a set of derivations e_a and a central tensor C^{ab}_{cd} with
// C*C = 1; the frame theta^a is dual to the e_a and commutes with the
// algebra, and products of frame 1-forms are reduced modulo the relations
// theta^a theta^b + C^{ab}_{cd} theta^c theta^d = 0.

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "qplane/plane.hpp"
#include "qplane/qmatrix.hpp"

namespace qplane {

using FormWord = std::vector<int>;  // frame indices, length = degree

class Calculus;

/// Element of the graded algebra Omega^*: algebra coefficients on canonical
/// frame words of one fixed degree (0..3). Coefficients always sit to the
/// left of the frame word; frame generators commute with the algebra.
class GradedForm {
 public:
  GradedForm() : cal_(nullptr), degree_(0) {}
  GradedForm(const Calculus* cal, int degree) : cal_(cal), degree_(degree) {}

  int degree() const { return degree_; }
  const Calculus* calculus() const { return cal_; }
  const std::map<FormWord, PlaneElement>& coeffs() const { return coeffs_; }
  bool isZero() const { return coeffs_.empty(); }

  PlaneElement coeff(const FormWord& w) const {
    auto it = coeffs_.find(w);
    return it == coeffs_.end() ? PlaneElement() : it->second;
  }

  void addTerm(const FormWord& w, const PlaneElement& c) {
    if (static_cast<int>(w.size()) != degree_)
      throw std::logic_error("GradedForm: word length does not match degree");
    if (c.isZero()) return;
    auto it = coeffs_.find(w);
    if (it == coeffs_.end()) {
      coeffs_[w] = c;
      return;
    }
    it->second += c;
    if (it->second.isZero()) coeffs_.erase(it);
  }

  friend GradedForm operator+(const GradedForm& a, const GradedForm& b) {
    a.requireCompatible(b);
    GradedForm r = a;
    for (const auto& [w, c] : b.coeffs_) r.addTerm(w, c);
    return r;
  }
  friend GradedForm operator-(const GradedForm& a, const GradedForm& b) {
    return a + (-b);
  }
  GradedForm operator-() const {
    GradedForm r(cal_, degree_);
    for (const auto& [w, c] : coeffs_) r.coeffs_[w] = -c;
    return r;
  }
  friend GradedForm operator*(const PlaneElement& f, const GradedForm& a) {
    GradedForm r(a.cal_, a.degree_);
    for (const auto& [w, c] : a.coeffs_) r.addTerm(w, f * c);
    return r;
  }
  friend GradedForm operator*(const QScalar& s, const GradedForm& a) {
    return PlaneElement(s) * a;
  }
  friend bool operator==(const GradedForm& a, const GradedForm& b) {
    return a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const GradedForm& a, const GradedForm& b) {
    return !(a == b);
  }

  GradedForm& operator+=(const GradedForm& b) { return *this = *this + b; }
  GradedForm& operator-=(const GradedForm& b) { return *this = *this - b; }

  std::string toString() const;

 private:
  void requireCompatible(const GradedForm& b) const {
    if (degree_ != b.degree_)
      throw std::invalid_argument("GradedForm: degree mismatch");
    if (cal_ && b.cal_ && cal_ != b.cal_)
      throw std::invalid_argument("GradedForm: mixed calculi");
  }

  const Calculus* cal_;
  int degree_;
  std::map<FormWord, PlaneElement> coeffs_;
};

/// Input data of a calculus: the derivations and the wedge tensor C.
struct CalculusSpec {
  std::vector<Derivation> derivations;
  QMatrix C;  // n^2 x n^2, flat index (ab) -> a*n + b

  int n() const { return static_cast<int>(derivations.size()); }
};

/// Structure data of an inner calculus: the twisted-bracket decomposition
/// [lambda_b, lambda_c]_C = lambda_a D^a_bc + K_bc, the structure elements
/// C^a_bc of d theta^a, and the 1-form theta = -lambda_a theta^a.
struct StructureData {
  std::vector<QScalar> D;          // (a,b,c) flat: (a*n + b)*n + c
  std::vector<QScalar> K;          // (b,c) flat
  std::vector<PlaneElement> Cabc;  // (a,b,c) flat
  GradedForm theta;
  std::vector<GradedForm> dtheta;  // per frame index

  int n = 0;
  const QScalar& Dv(int a, int b, int c) const { return D[(a * n + b) * n + c]; }
  const QScalar& Kv(int b, int c) const { return K[b * n + c]; }
  const PlaneElement& Cv(int a, int b, int c) const {
    return Cabc[(a * n + b) * n + c];
  }
};

/// One coordinate commutation relation, e.g. x dx = q dx x.
struct CoordRelation {
  std::string lhs;
  std::string rhs;  // empty when no linear relation exists
  bool found = false;
};

class Calculus {
 public:
  explicit Calculus(CalculusSpec spec) : spec_(std::move(spec)) {
    n_ = spec_.n();
    if (n_ < 1) throw std::invalid_argument("calculus needs derivations");
    if (spec_.C.rows() != static_cast<size_t>(n_ * n_) ||
        spec_.C.cols() != static_cast<size_t>(n_ * n_))
      throw std::invalid_argument("C tensor has the wrong shape");
    if (spec_.C * spec_.C != QMatrix::identity(static_cast<size_t>(n_ * n_)))
      throw std::invalid_argument("C tensor is not an involution");
    buildReductions();
    buildFrame();
    bool allInner = true;
    for (const auto& d : spec_.derivations) allInner &= d.isInner();
    if (allInner) extractStructure();
  }

  // the structure data holds forms that point back at this calculus
  Calculus(const Calculus&) = delete;
  Calculus& operator=(const Calculus&) = delete;

  int n() const { return n_; }
  const CalculusSpec& spec() const { return spec_; }
  const QMatrix& C() const { return spec_.C; }
  QScalar Cc(int a, int b, int c, int d) const {
    return spec_.C.at(static_cast<size_t>(a * n_ + b),
                      static_cast<size_t>(c * n_ + d));
  }

  PlaneElement derApply(int a, const PlaneElement& f) const {
    return spec_.derivations[static_cast<size_t>(a)].apply(f);
  }

  // -- coordinates ----------------------------------------------------------

  int coordCount() const { return n_; }
  std::string coordName(int mu) const {
    static const char* names2[] = {"dx", "dy"};
    static const char* names3[] = {"dx", "dy", "tau"};
    return n_ == 3 ? names3[mu] : names2[mu];
  }
  static PlaneElement generator(int i) {
    return i == 0 ? PlaneElement::x() : PlaneElement::y();
  }

  /// Frame coefficients of the coordinate differentials: row mu gives
  /// d xi^mu = sum_a E[mu][a] theta^a.
  const std::vector<std::vector<PlaneElement>>& coordToFrame() const {
    return E_;
  }
  /// Coordinate coefficients of the frame: theta^a = sum_mu F[a][mu] d xi^mu.
  const std::vector<std::vector<PlaneElement>>& frameToCoord() const {
    return F_;
  }

  // -- forms ----------------------------------------------------------------

  GradedForm zeroForm(int degree) const { return GradedForm(this, degree); }
  GradedForm scalarForm(const PlaneElement& f) const {
    GradedForm r(this, 0);
    r.addTerm({}, f);
    return r;
  }
  GradedForm theta(int a) const {
    GradedForm r(this, 1);
    r.addTerm({a}, PlaneElement::one());
    return r;
  }
  GradedForm coordDiff(int mu) const {
    GradedForm r(this, 1);
    for (int a = 0; a < n_; ++a)
      r.addTerm({a}, E_[static_cast<size_t>(mu)][static_cast<size_t>(a)]);
    return r;
  }

  /// Fully reduced product of frame words with the given coefficient.
  GradedForm reducedWord(const FormWord& w, const PlaneElement& coeff) const {
    int deg = static_cast<int>(w.size());
    GradedForm out(this, deg);
    if (coeff.isZero()) return out;
    if (deg <= 1) {
      out.addTerm(w, coeff);
      return out;
    }
    if (deg > 3) throw std::domain_error("forms of degree > 3 are unsupported");
    const Reduction& red = deg == 2 ? red2_ : red3_;
    size_t flat = flatten(w);
    for (size_t j = 0; j < red.basis.size(); ++j) {
      const QScalar& c = red.table[flat][j];
      if (!c.isZero()) out.addTerm(red.basis[j], c * coeff);
    }
    return out;
  }

  GradedForm wedge(const GradedForm& a, const GradedForm& b) const {
    int deg = a.degree() + b.degree();
    if (deg > 3) throw std::domain_error("forms of degree > 3 are unsupported");
    GradedForm out(this, deg);
    for (const auto& [wa, fa] : a.coeffs())
      for (const auto& [wb, fb] : b.coeffs()) {
        FormWord w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        out += reducedWord(w, fa * fb);
      }
    return out;
  }

  /// Exterior derivative. Degree-0 forms use the derivations; higher degrees
  /// use the graded Leibniz rule with d theta^a from the structure data.
  GradedForm d(const GradedForm& f) const {
    if (f.degree() >= 3)
      throw std::domain_error("d: forms of degree > 3 are unsupported");
    if (f.degree() == 0) {
      GradedForm out(this, 1);
      for (const auto& [w, c] : f.coeffs())
        for (int a = 0; a < n_; ++a) out.addTerm({a}, derApply(a, c));
      return out;
    }
    requireStructure("d on forms of positive degree");
    GradedForm out(this, f.degree() + 1);
    for (const auto& [w, c] : f.coeffs()) {
      // d(c) ^ w
      GradedForm dc = d(scalarForm(c));
      GradedForm word(this, f.degree());
      word.addTerm(w, PlaneElement::one());
      out += wedge(dc, word);
      // c * sum_i (-1)^i th^{a_0} .. d th^{a_i} .. th^{a_last}
      for (size_t i = 0; i < w.size(); ++i) {
        GradedForm piece = structure_->dtheta[static_cast<size_t>(w[i])];
        for (size_t j = i; j-- > 0;) piece = wedge(theta(w[j]), piece);
        for (size_t j = i + 1; j < w.size(); ++j) piece = wedge(piece, theta(w[j]));
        QScalar sign = (i % 2 == 0) ? QScalar(1) : QScalar(-1);
        out += sign * (c * piece);
      }
    }
    return out;
  }

  GradedForm d(const PlaneElement& f) const { return d(scalarForm(f)); }

  // -- structure data -------------------------------------------------------

  bool hasStructure() const { return structure_.has_value(); }
  const StructureData& structure() const {
    requireStructure("structure data");
    return *structure_;
  }
  const PlaneElement& lambda(int a) const {
    return spec_.derivations[static_cast<size_t>(a)].lambda();
  }

  /// Canonical basis words of the degree-2 quotient.
  const std::vector<FormWord>& basis2() const { return red2_.basis; }
  const std::vector<FormWord>& basis3() const { return red3_.basis; }

  /// Covectors A with A_{ab} theta^a theta^b = 0 (the relation row space).
  std::vector<std::vector<QScalar>> relationRowSpace() const {
    QMatrix onePlusC =
        QMatrix::identity(static_cast<size_t>(n_ * n_)) + spec_.C;
    std::vector<std::vector<QScalar>> rows;
    auto ech = onePlusC.echelon();
    for (size_t r = 0; r < ech.rank; ++r) {
      std::vector<QScalar> v(static_cast<size_t>(n_ * n_));
      for (size_t j = 0; j < v.size(); ++j) v[j] = ech.rref.at(r, j);
      rows.push_back(std::move(v));
    }
    return rows;
  }

  /// Coordinate commutation relations g * dxi = sum central * (dxi' * g') (+ dxi'').
  std::vector<CoordRelation> relationReport() const;

  /// Renders a degree-1 form over the coordinate differentials.
  std::vector<PlaneElement> toCoordinates(const GradedForm& f) const {
    if (f.degree() != 1)
      throw std::invalid_argument("toCoordinates: degree-1 forms only");
    std::vector<PlaneElement> g(static_cast<size_t>(n_));
    for (int mu = 0; mu < n_; ++mu)
      for (int a = 0; a < n_; ++a)
        g[static_cast<size_t>(mu)] +=
            f.coeff({a}) * F_[static_cast<size_t>(a)][static_cast<size_t>(mu)];
    return g;
  }

 private:
  struct Reduction {
    std::vector<FormWord> basis;
    // table[flatWord] = coefficients over basis
    std::vector<std::vector<QScalar>> table;
  };

  size_t flatten(const FormWord& w) const {
    size_t f = 0;
    for (int a : w) f = f * static_cast<size_t>(n_) + static_cast<size_t>(a);
    return f;
  }
  FormWord unflatten(size_t flat, int deg) const {
    FormWord w(static_cast<size_t>(deg));
    for (int i = deg - 1; i >= 0; --i) {
      w[static_cast<size_t>(i)] = static_cast<int>(flat % static_cast<size_t>(n_));
      flat /= static_cast<size_t>(n_);
    }
    return w;
  }

  // Quotient of the degree-d word space by the span of `relations`, with the
  // canonical basis chosen by deterministic row reduction that prefers to
  // eliminate later words (so earlier words survive as the basis).
  Reduction buildReduction(int deg, const QMatrix& relations) const {
    size_t dim = relations.cols();
    std::vector<size_t> order(dim);
    for (size_t i = 0; i < dim; ++i) order[i] = dim - 1 - i;
    auto ech = relations.echelon(order);
    Reduction red;
    for (size_t w = 0; w < dim; ++w)
      if (ech.pivotRowOfCol[w] < 0) red.basis.push_back(unflatten(w, deg));
    red.table.assign(dim, std::vector<QScalar>(red.basis.size(), QScalar(0)));
    std::map<size_t, size_t> basisIndex;
    for (size_t j = 0; j < red.basis.size(); ++j)
      basisIndex[flatten(red.basis[j])] = j;
    for (size_t w = 0; w < dim; ++w) {
      int r = ech.pivotRowOfCol[w];
      if (r < 0) {
        red.table[w][basisIndex[w]] = QScalar(1);
        continue;
      }
      // RREF row: e_w + sum over free columns; so [e_w] = -sum free parts
      for (size_t f = 0; f < dim; ++f) {
        if (ech.pivotRowOfCol[f] >= 0) continue;
        QScalar c = ech.rref.at(static_cast<size_t>(r), f);
        if (!c.isZero()) red.table[w][basisIndex[f]] = -c;
      }
    }
    return red;
  }

  void buildReductions() {
    size_t n2 = static_cast<size_t>(n_ * n_);
    QMatrix onePlusC = QMatrix::identity(n2) + spec_.C;
    red2_ = buildReduction(2, onePlusC);

    // degree 3: relations R (x) V and V (x) R for every relation row R
    size_t n3 = n2 * static_cast<size_t>(n_);
    QMatrix rel3(2 * n2 * static_cast<size_t>(n_), n3);
    size_t row = 0;
    for (size_t r = 0; r < n2; ++r) {
      for (int c = 0; c < n_; ++c) {
        for (size_t ab = 0; ab < n2; ++ab)
          rel3.at(row, ab * static_cast<size_t>(n_) + static_cast<size_t>(c)) =
              onePlusC.at(r, ab);
        ++row;
      }
      for (int a = 0; a < n_; ++a) {
        for (size_t bc = 0; bc < n2; ++bc)
          rel3.at(row, static_cast<size_t>(a) * n2 + bc) = onePlusC.at(r, bc);
        ++row;
      }
    }
    red3_ = buildReduction(3, rel3);
  }

  void buildFrame() {
    size_t un = static_cast<size_t>(n_);
    E_.assign(un, std::vector<PlaneElement>(un));
    for (int a = 0; a < n_; ++a) {
      E_[0][static_cast<size_t>(a)] = derApply(a, PlaneElement::x());
      E_[1][static_cast<size_t>(a)] = derApply(a, PlaneElement::y());
    }
    if (n_ == 3) {
      // third coordinate differential: tau = x dy - q dy x
      PlaneElement x = PlaneElement::x();
      for (int a = 0; a < n_; ++a) {
        PlaneElement ey = E_[1][static_cast<size_t>(a)];
        E_[2][static_cast<size_t>(a)] = x * ey - QScalar::q() * (ey * x);
      }
    } else if (n_ > 3) {
      throw std::invalid_argument("calculi with more than 3 derivations");
    }
    F_ = invertOverAlgebra(E_);
    // confirm the two-sided inverse
    for (size_t i = 0; i < un; ++i)
      for (size_t j = 0; j < un; ++j) {
        PlaneElement ef, fe;
        for (size_t k = 0; k < un; ++k) {
          ef += E_[i][k] * F_[k][j];
          fe += F_[i][k] * E_[k][j];
        }
        PlaneElement want = i == j ? PlaneElement::one() : PlaneElement();
        if (ef != want || fe != want)
          throw std::runtime_error("frame does not exist: E has no inverse");
      }
  }

  // Gaussian elimination over the plane algebra; pivots must be invertible
  // monomials. Sufficient for every frame matrix treated here.
  static std::vector<std::vector<PlaneElement>> invertOverAlgebra(
      std::vector<std::vector<PlaneElement>> m) {
    size_t n = m.size();
    std::vector<std::vector<PlaneElement>> inv(n,
                                               std::vector<PlaneElement>(n));
    for (size_t i = 0; i < n; ++i) inv[i][i] = PlaneElement::one();
    for (size_t col = 0; col < n; ++col) {
      size_t piv = n;
      for (size_t r = col; r < n; ++r)
        if (m[r][col].terms().size() == 1) {
          piv = r;
          break;
        }
      if (piv == n)
        throw std::runtime_error(
            "frame does not exist: no invertible pivot in column " +
            std::to_string(col));
      std::swap(m[piv], m[col]);
      std::swap(inv[piv], inv[col]);
      PlaneElement pinv = m[col][col].inverse();
      for (size_t j = 0; j < n; ++j) {
        m[col][j] = pinv * m[col][j];
        inv[col][j] = pinv * inv[col][j];
      }
      for (size_t r = 0; r < n; ++r) {
        if (r == col || m[r][col].isZero()) continue;
        PlaneElement f = m[r][col];
        for (size_t j = 0; j < n; ++j) {
          m[r][j] -= f * m[col][j];
          inv[r][j] -= f * inv[col][j];
        }
      }
    }
    return inv;
  }

  void extractStructure();
  void requireStructure(const std::string& what) const {
    if (!structure_.has_value())
      throw std::domain_error(what + " unavailable for outer calculi");
  }

  CalculusSpec spec_;
  int n_ = 0;
  Reduction red2_, red3_;
  std::vector<std::vector<PlaneElement>> E_, F_;
  std::optional<StructureData> structure_;
};

inline std::string GradedForm::toString() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : coeffs_) {
    if (!first) os << " + ";
    first = false;
    std::string cs = c.toString();
    bool needParens = cs.find(" + ") != std::string::npos ||
                      cs.find(" - ") != std::string::npos;
    if (needParens)
      os << "(" << cs << ")";
    else
      os << cs;
    for (int a : w) os << "*t" << (a + 1);
  }
  return os.str();
}

inline void Calculus::extractStructure() {
  size_t un = static_cast<size_t>(n_);
  StructureData s;
  s.n = n_;

  // Monomial coordinates for the decomposition over {lambda_a, 1}.
  std::vector<PlaneElement> gens(un + 1);
  for (int a = 0; a < n_; ++a) gens[static_cast<size_t>(a)] = lambda(a);
  gens[un] = PlaneElement::one();

  // Twisted brackets B_bc = lambda_b lambda_c - C^{de}_{bc} lambda_d lambda_e.
  std::vector<PlaneElement> bracket(un * un);
  for (int b = 0; b < n_; ++b)
    for (int c = 0; c < n_; ++c) {
      PlaneElement B = lambda(b) * lambda(c);
      for (int dd = 0; dd < n_; ++dd)
        for (int e = 0; e < n_; ++e) {
          QScalar cc = Cc(dd, e, b, c);
          if (!cc.isZero()) B -= cc * (lambda(dd) * lambda(e));
        }
      bracket[static_cast<size_t>(b * n_ + c)] = B;
    }

  std::map<PlaneElement::Key, size_t> monoIndex;
  for (const auto& g : gens)
    for (const auto& [k, cc] : g.terms())
      monoIndex.emplace(k, monoIndex.size());
  for (const auto& B : bracket)
    for (const auto& [k, cc] : B.terms())
      monoIndex.emplace(k, monoIndex.size());

  QMatrix M(monoIndex.size(), un + 1);
  for (size_t j = 0; j <= un; ++j)
    for (const auto& [k, cc] : gens[j].terms()) M.at(monoIndex[k], j) = cc;
  if (M.rank() != un + 1)
    throw std::runtime_error(
        "structure extraction: the lambda_a and 1 are linearly dependent");

  s.D.assign(un * un * un, QScalar(0));
  s.K.assign(un * un, QScalar(0));
  for (int b = 0; b < n_; ++b)
    for (int c = 0; c < n_; ++c) {
      std::vector<QScalar> rhs(monoIndex.size(), QScalar(0));
      for (const auto& [k, cc] : bracket[static_cast<size_t>(b * n_ + c)].terms())
        rhs[monoIndex[k]] = cc;
      auto sol = M.solve(rhs);
      if (!sol)
        throw std::runtime_error(
            "incompatible (lambda, C) pair: twisted bracket does not "
            "decompose as lambda_a D^a_bc + K_bc");
      for (int a = 0; a < n_; ++a)
        s.D[static_cast<size_t>((a * n_ + b) * n_ + c)] =
            (*sol)[static_cast<size_t>(a)];
      s.K[static_cast<size_t>(b * n_ + c)] = (*sol)[un];
    }

  // theta = -lambda_a theta^a
  s.theta = GradedForm(this, 1);
  for (int a = 0; a < n_; ++a) s.theta.addTerm({a}, -lambda(a));

  // d theta^a = -[theta, theta^a] - (1/2) D^a_bc theta^b theta^c
  QScalar half = QScalar(1) / QScalar(2);
  s.dtheta.assign(un, GradedForm());
  for (int a = 0; a < n_; ++a) {
    GradedForm dt(this, 2);
    for (int b = 0; b < n_; ++b) {
      // -[theta, theta^a] = lambda_b (theta^b theta^a + theta^a theta^b)
      dt += lambda(b) * (reducedWord({b, a}, PlaneElement::one()) +
                         reducedWord({a, b}, PlaneElement::one()));
    }
    for (int b = 0; b < n_; ++b)
      for (int c = 0; c < n_; ++c) {
        const QScalar& Dv = s.D[static_cast<size_t>((a * n_ + b) * n_ + c)];
        if (!Dv.isZero())
          dt -= reducedWord({b, c}, PlaneElement(half * Dv));
      }
    s.dtheta[static_cast<size_t>(a)] = dt;
  }

  // Structure elements: the unique covector in the left kernel of (1 + C)
  // whose reduction matches -2 d theta^a.
  size_t n2 = un * un;
  QMatrix onePlusC = QMatrix::identity(n2) + spec_.C;
  auto kernel = onePlusC.transpose().nullspaceBasis();  // left kernel rows
  size_t k = kernel.size();
  if (k != red2_.basis.size())
    throw std::logic_error("degree-2 quotient dimension mismatch");
  QMatrix mat(k, k);  // reduction of each kernel covector over the basis
  for (size_t j = 0; j < k; ++j) {
    GradedForm r(this, 2);
    for (size_t w = 0; w < n2; ++w)
      if (!kernel[j][w].isZero())
        r += reducedWord(unflatten(w, 2), PlaneElement(kernel[j][w]));
    for (size_t i = 0; i < red2_.basis.size(); ++i)
      mat.at(i, j) = r.coeff(red2_.basis[i]).scalarPart();
  }
  auto matInv = mat.inverse();
  if (!matInv)
    throw std::logic_error("kernel covectors do not span the quotient");
  s.Cabc.assign(un * n2, PlaneElement());
  for (int a = 0; a < n_; ++a) {
    std::vector<PlaneElement> f(k);
    for (size_t j = 0; j < k; ++j)
      for (size_t i = 0; i < k; ++i)
        f[j] += matInv->at(j, i) *
                s.dtheta[static_cast<size_t>(a)].coeff(red2_.basis[i]);
    for (size_t w = 0; w < n2; ++w) {
      PlaneElement acc;
      for (size_t j = 0; j < k; ++j)
        if (!kernel[j][w].isZero()) acc += f[j] * kernel[j][w];
      s.Cabc[static_cast<size_t>(a) * n2 + w] = QScalar(-2) * acc;
    }
  }

  structure_ = std::move(s);
}

inline std::vector<CoordRelation> Calculus::relationReport() const {
  std::vector<CoordRelation> out;
  size_t un = static_cast<size_t>(n_);
  const char* genNames[] = {"x", "y"};
  for (int gi = 0; gi < 2; ++gi) {
    PlaneElement g = generator(gi);
    for (int mu = 0; mu < n_; ++mu) {
      // lhs: g * dxi^mu in frame components
      std::vector<PlaneElement> lhs(un);
      for (size_t a = 0; a < un; ++a) lhs[a] = g * E_[static_cast<size_t>(mu)][a];

      // candidates: dxi^nu * g' (same generator first), then bare dxi^nu
      struct Cand {
        std::string label;
        std::vector<PlaneElement> comp;
      };
      std::vector<Cand> cands;
      for (int pass = 0; pass < 2; ++pass) {
        int gj = pass == 0 ? gi : 1 - gi;
        PlaneElement gp = generator(gj);
        for (int nu = 0; nu < n_; ++nu) {
          Cand cd;
          cd.label = coordName(nu) + std::string("*") + genNames[gj];
          cd.comp.resize(un);
          for (size_t a = 0; a < un; ++a)
            cd.comp[a] = E_[static_cast<size_t>(nu)][a] * gp;
          cands.push_back(std::move(cd));
        }
      }
      for (int nu = 0; nu < n_; ++nu) {
        Cand cd;
        cd.label = coordName(nu);
        cd.comp.resize(un);
        for (size_t a = 0; a < un; ++a) cd.comp[a] = E_[static_cast<size_t>(nu)][a];
        cands.push_back(std::move(cd));
      }

      // solve for central coefficients across all frame components
      std::map<std::pair<int, PlaneElement::Key>, size_t> rowIndex;
      auto rowOf = [&](int a, const PlaneElement::Key& kk) {
        return rowIndex.emplace(std::make_pair(a, kk), rowIndex.size())
            .first->second;
      };
      for (size_t a = 0; a < un; ++a) {
        for (const auto& [kk, cc] : lhs[a].terms()) rowOf(static_cast<int>(a), kk);
        for (const auto& cd : cands)
          for (const auto& [kk, cc] : cd.comp[a].terms())
            rowOf(static_cast<int>(a), kk);
      }
      QMatrix A(rowIndex.size(), cands.size());
      std::vector<QScalar> b(rowIndex.size(), QScalar(0));
      for (size_t a = 0; a < un; ++a) {
        for (size_t j = 0; j < cands.size(); ++j)
          for (const auto& [kk, cc] : cands[j].comp[a].terms())
            A.at(rowOf(static_cast<int>(a), kk), j) = cc;
        for (const auto& [kk, cc] : lhs[a].terms())
          b[rowOf(static_cast<int>(a), kk)] = cc;
      }
      CoordRelation rel;
      rel.lhs = genNames[gi] + std::string("*") + coordName(mu);
      auto sol = A.solve(b);
      if (sol) {
        rel.found = true;
        std::ostringstream os;
        bool first = true;
        for (size_t j = 0; j < cands.size(); ++j) {
          if ((*sol)[j].isZero()) continue;
          QScalar c = (*sol)[j];
          std::string cs = c.toString();
          if (!first) os << " + ";
          first = false;
          if (cs == "1") {
            os << cands[j].label;
          } else {
            bool paren = cs.find(' ') != std::string::npos || cs.find('/') != std::string::npos;
            os << (paren ? "(" + cs + ")" : cs) << "*" << cands[j].label;
          }
        }
        rel.rhs = first ? "0" : os.str();
      }
      out.push_back(std::move(rel));
    }
  }
  return out;
}

}  // namespace qplane
