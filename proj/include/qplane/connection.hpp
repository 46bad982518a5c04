#pragma once

// Linear connections on the 1-forms: the generalized permutation sigma, the
// covariant derivative D theta^a = -omega^a_bc theta^b (x) theta^c, torsion,
// and metric compatibility.

#include "qplane/forms.hpp"

namespace qplane {

/// Coefficients of sigma(theta^a (x) theta^b) = S^{ab}_{cd} theta^c (x) theta^d.
struct SigmaTensor {
  QMatrix S;  // n^2 x n^2, flat (ab) = a*n + b

  int n() const {
    int k = 1;
    while (static_cast<size_t>(k * k) < S.rows()) ++k;
    return k;
  }
  QScalar at(int a, int b, int c, int d) const {
    int nn = n();
    return S.at(static_cast<size_t>(a * nn + b), static_cast<size_t>(c * nn + d));
  }
  /// Entrywise substitution q -> s(q).
  SigmaTensor subst(const QScalar& s) const {
    SigmaTensor out = *this;
    for (size_t i = 0; i < S.rows(); ++i)
      for (size_t j = 0; j < S.cols(); ++j)
        out.S.at(i, j) = S.at(i, j).subst(s);
    return out;
  }
  friend bool operator==(const SigmaTensor& a, const SigmaTensor& b) {
    return a.S == b.S;
  }
};

/// Central metric coefficients g(theta^a (x) theta^b) = g^{ab}.
struct MetricTensor {
  QMatrix g;  // n x n, invertible

  static MetricTensor euclidean(int n) {
    return {QMatrix::identity(static_cast<size_t>(n))};
  }
};

/// Element of Omega^1 (x)_A Omega^1 with coefficients pulled to the left:
/// sum f_ab theta^a (x) theta^b.
struct TensorBi {
  int n = 0;
  std::vector<PlaneElement> f;  // flat a*n + b

  explicit TensorBi(int n_ = 0)
      : n(n_), f(static_cast<size_t>(n_ * n_)) {}
  PlaneElement& at(int a, int b) { return f[static_cast<size_t>(a * n + b)]; }
  const PlaneElement& at(int a, int b) const {
    return f[static_cast<size_t>(a * n + b)];
  }
  bool isZero() const {
    for (const auto& x : f)
      if (!x.isZero()) return false;
    return true;
  }
  friend TensorBi operator+(const TensorBi& a, const TensorBi& b) {
    TensorBi r = a;
    for (size_t i = 0; i < r.f.size(); ++i) r.f[i] += b.f[i];
    return r;
  }
  friend TensorBi operator-(const TensorBi& a, const TensorBi& b) {
    TensorBi r = a;
    for (size_t i = 0; i < r.f.size(); ++i) r.f[i] -= b.f[i];
    return r;
  }
  friend bool operator==(const TensorBi& a, const TensorBi& b) {
    return a.n == b.n && a.f == b.f;
  }

  TensorBi leftMul(const PlaneElement& g) const {
    TensorBi r = *this;
    for (auto& x : r.f) x = g * x;
    return r;
  }
  TensorBi rightMul(const PlaneElement& g) const {
    // (f theta^a (x) theta^b) g = (f g) theta^a (x) theta^b
    TensorBi r = *this;
    for (auto& x : r.f) x = x * g;
    return r;
  }

  /// sigma acting slotwise through the S coefficients.
  TensorBi applySigma(const SigmaTensor& s) const {
    TensorBi r(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const PlaneElement& g = at(a, b);
        if (g.isZero()) continue;
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            QScalar coef = s.at(a, b, c, d);
            if (!coef.isZero()) r.at(c, d) += g * coef;
          }
      }
    return r;
  }

  /// The wedge projection pi: theta^a (x) theta^b -> theta^a theta^b.
  GradedForm wedgeProject(const Calculus& cal) const {
    GradedForm out = cal.zeroForm(2);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (!at(a, b).isZero()) out += cal.reducedWord({a, b}, at(a, b));
    return out;
  }
};

/// A linear connection: omega^a_bc = omega0^a_bc + chi^a_bc with central chi.
struct ConnectionData {
  const Calculus* cal = nullptr;
  SigmaTensor sigma;
  std::vector<PlaneElement> omega;  // flat (a*n + b)*n + c
  std::vector<QScalar> chi;         // same layout

  int n() const { return cal->n(); }
  const PlaneElement& om(int a, int b, int c) const {
    return omega[static_cast<size_t>((a * n() + b) * n() + c)];
  }

  /// D theta^a as a tensor: -omega^a_bc theta^b (x) theta^c.
  TensorBi Dtheta(int a) const {
    TensorBi t(n());
    for (int b = 0; b < n(); ++b)
      for (int c = 0; c < n(); ++c) t.at(b, c) = -om(a, b, c);
    return t;
  }

  /// Left-Leibniz extension of D to a 1-form sum f_a theta^a.
  TensorBi D(const GradedForm& xi) const {
    if (xi.degree() != 1)
      throw std::invalid_argument("D: degree-1 forms only");
    TensorBi acc(n());
    for (int a = 0; a < n(); ++a) {
      PlaneElement fa = xi.coeff({a});
      if (fa.isZero()) continue;
      // df_a (x) theta^a
      for (int b = 0; b < n(); ++b) {
        PlaneElement eb = cal->derApply(b, fa);
        if (!eb.isZero()) acc.at(b, a) += eb;
      }
      acc = acc + Dtheta(a).leftMul(fa);
    }
    return acc;
  }
};

struct CheckOutcome {
  bool pass = false;
  std::string residual;  // rendering of the first/summary residual
};

/// Consistency of sigma with the wedge relations, (1 + S)(1 - C) = 0.
inline CheckOutcome sigmaCheck(const SigmaTensor& sigma, const QMatrix& C) {
  if (sigma.S.rows() != C.rows())
    throw std::invalid_argument("sigmaCheck: dimension mismatch");
  size_t n2 = C.rows();
  QMatrix lhs = (QMatrix::identity(n2) + sigma.S) *
                (QMatrix::identity(n2) - C);
  CheckOutcome out;
  out.pass = lhs.isZero();
  if (!out.pass) {
    for (size_t i = 0; i < n2 && out.residual.empty(); ++i)
      for (size_t j = 0; j < n2; ++j)
        if (!lhs.at(i, j).isZero()) {
          out.residual = "entry (" + std::to_string(i) + "," +
                         std::to_string(j) + ") = " + lhs.at(i, j).toString();
          break;
        }
  }
  return out;
}

/// Metric compatibility S^{ae}_{dh} g^{hf} S^{cb}_{ef} = g^{ac} delta^b_d.
inline CheckOutcome metricCheck(const SigmaTensor& sigma,
                                const MetricTensor& metric) {
  int n = sigma.n();
  if (metric.g.rows() != static_cast<size_t>(n))
    throw std::invalid_argument("metricCheck: dimension mismatch");
  CheckOutcome out;
  out.pass = true;
  for (int a = 0; a < n && out.residual.empty(); ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          QScalar acc(0);
          for (int e = 0; e < n; ++e)
            for (int h = 0; h < n; ++h)
              for (int ff = 0; ff < n; ++ff)
                acc += sigma.at(a, e, d, h) *
                       metric.g.at(static_cast<size_t>(h), static_cast<size_t>(ff)) *
                       sigma.at(c, b, e, ff);
          if (b == d)
            acc -= metric.g.at(static_cast<size_t>(a), static_cast<size_t>(c));
          if (!acc.isZero()) {
            out.pass = false;
            out.residual = "component (a,b,c,d) = (" + std::to_string(a + 1) +
                           "," + std::to_string(b + 1) + "," +
                           std::to_string(c + 1) + "," + std::to_string(d + 1) +
                           ") = " + acc.toString();
            break;
          }
        }
  return out;
}

/// The n = 2 matrix rendering of the compatibility condition with the
/// euclidean metric: A B = 1 with A[(a,d)][(e,h)] = S^{ae}_{dh} and
/// B[(e,h)][(c,b)] = S^{cb}_{eh}. For the block ansatz A is the plain
/// flattened S.
inline QMatrix metricMatrixResidual(const SigmaTensor& sigma) {
  int n = sigma.n();
  size_t n2 = static_cast<size_t>(n * n);
  QMatrix A(n2, n2), B(n2, n2);
  for (int a = 0; a < n; ++a)
    for (int d = 0; d < n; ++d)
      for (int e = 0; e < n; ++e)
        for (int h = 0; h < n; ++h) {
          A.at(static_cast<size_t>(a * n + d), static_cast<size_t>(e * n + h)) =
              sigma.at(a, e, d, h);
          B.at(static_cast<size_t>(e * n + h), static_cast<size_t>(a * n + d)) =
              sigma.at(a, d, e, h);
        }
  return A * B - QMatrix::identity(n2);
}

/// Symmetry of the metric with respect to sigma: g^{ab} = S^{ab}_{cd} g^{cd}.
inline CheckOutcome sigmaSymmetryCheck(const SigmaTensor& sigma,
                                       const MetricTensor& metric) {
  int n = sigma.n();
  CheckOutcome out;
  out.pass = true;
  for (int a = 0; a < n && out.residual.empty(); ++a)
    for (int b = 0; b < n; ++b) {
      QScalar acc = metric.g.at(static_cast<size_t>(a), static_cast<size_t>(b));
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          acc -= sigma.at(a, b, c, d) *
                 metric.g.at(static_cast<size_t>(c), static_cast<size_t>(d));
      if (!acc.isZero()) {
        out.pass = false;
        out.residual = "component (" + std::to_string(a + 1) + "," +
                       std::to_string(b + 1) + ") = " + acc.toString();
        break;
      }
    }
  return out;
}

/// The canonical connection of a sigma: omega0^a_bc = lambda_d (S^{ad}_{bc}
/// - delta^d_b delta^a_c), chi = 0.
inline ConnectionData omega0(const Calculus& cal, SigmaTensor sigma) {
  if (!cal.hasStructure())
    throw std::domain_error("omega0: unavailable for outer calculi");
  int n = cal.n();
  if (sigma.S.rows() != static_cast<size_t>(n * n))
    throw std::invalid_argument("omega0: sigma dimension mismatch");
  ConnectionData conn;
  conn.cal = &cal;
  conn.sigma = std::move(sigma);
  conn.omega.assign(static_cast<size_t>(n * n * n), PlaneElement());
  conn.chi.assign(static_cast<size_t>(n * n * n), QScalar(0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        PlaneElement acc;
        for (int d = 0; d < n; ++d) {
          QScalar coef = conn.sigma.at(a, d, b, c);
          if (d == b && a == c) coef -= QScalar(1);
          if (!coef.isZero()) acc += cal.lambda(d) * coef;
        }
        conn.omega[static_cast<size_t>((a * n + b) * n + c)] = acc;
      }
  return conn;
}

/// omega = omega0 + chi for a central offset chi^a_bc.
inline ConnectionData withChi(ConnectionData conn, std::vector<QScalar> chi) {
  int n = conn.n();
  if (chi.size() != static_cast<size_t>(n * n * n))
    throw std::invalid_argument("withChi: offset size mismatch");
  for (size_t i = 0; i < chi.size(); ++i) {
    QScalar delta = chi[i] - conn.chi[i];
    if (!delta.isZero()) conn.omega[i] += PlaneElement(delta);
    conn.chi[i] = chi[i];
  }
  return conn;
}

/// D_(0) theta^a through the sigma route: -theta (x) theta^a + sigma(theta^a
/// (x) theta).
inline TensorBi D0ThetaViaSigma(const Calculus& cal, const SigmaTensor& sigma,
                                int a) {
  int n = cal.n();
  TensorBi lhs(n);
  for (int b = 0; b < n; ++b) lhs.at(b, a) += cal.lambda(b);  // -theta (x) th^a
  TensorBi thetaRight(n);
  for (int b = 0; b < n; ++b) thetaRight.at(a, b) = -cal.lambda(b);
  return lhs + thetaRight.applySigma(sigma);
}

/// Torsion 2-form Theta^a = d theta^a - pi(D theta^a).
inline GradedForm torsion(const ConnectionData& conn, int a) {
  const Calculus& cal = *conn.cal;
  return cal.structure().dtheta[static_cast<size_t>(a)] -
         conn.Dtheta(a).wedgeProject(cal);
}

/// The componentwise torsion-free condition
/// omega^a_bc - omega^a_de C^{de}_bc = C^a_bc.
inline bool torsionFreeCheck(const ConnectionData& conn) {
  const Calculus& cal = *conn.cal;
  const auto& s = cal.structure();
  int n = cal.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        PlaneElement acc = conn.om(a, b, c) - s.Cv(a, b, c);
        for (int d = 0; d < n; ++d)
          for (int e = 0; e < n; ++e) {
            QScalar cc = cal.Cc(d, e, b, c);
            if (!cc.isZero()) acc -= conn.om(a, d, e) * cc;
          }
        if (!acc.isZero()) return false;
      }
  return true;
}

/// General metric compatibility, omega^a_bc + omega_ce^f S^{ae}_bf = 0, with
/// the lowering convention omega_ab^c = g_ad omega^d_be g^ec.
inline CheckOutcome metricCompatGeneral(const ConnectionData& conn,
                                        const MetricTensor& metric) {
  const Calculus& cal = *conn.cal;
  int n = cal.n();
  auto gInvOpt = metric.g.inverse();
  if (!gInvOpt) throw std::invalid_argument("metric is singular");
  const QMatrix& gUp = metric.g;  // g^{ab}
  QMatrix gDown = *gInvOpt;       // g_{ab}
  CheckOutcome out;
  out.pass = true;
  for (int a = 0; a < n && out.residual.empty(); ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        PlaneElement acc = conn.om(a, b, c);
        for (int e = 0; e < n; ++e)
          for (int ff = 0; ff < n; ++ff) {
            QScalar sc = conn.sigma.at(a, e, b, ff);
            if (sc.isZero()) continue;
            // omega_ce^f = g_cd omega^d_eh g^hf
            PlaneElement low;
            for (int d = 0; d < n; ++d)
              for (int h = 0; h < n; ++h) {
                QScalar w = gDown.at(static_cast<size_t>(c), static_cast<size_t>(d)) *
                            gUp.at(static_cast<size_t>(h), static_cast<size_t>(ff));
                if (!w.isZero()) low += conn.om(d, e, h) * w;
              }
            acc += low * sc;
          }
        if (!acc.isZero()) {
          out.pass = false;
          out.residual = "component (a,b,c) = (" + std::to_string(a + 1) + "," +
                         std::to_string(b + 1) + "," + std::to_string(c + 1) +
                         ") = " + acc.toString();
          break;
        }
      }
  return out;
}

/// First coefficient of omega with a pole at q = 1, if any.
struct PoleReport {
  bool regular = true;
  int a = 0, b = 0, c = 0, order = 0;
};
inline PoleReport omegaQ1Poles(const ConnectionData& conn) {
  int n = conn.n();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (const auto& [k, coef] : conn.om(a, b, c).terms()) {
          LimitQ1 lim = coef.limitQ1();
          if (!lim.finite) return {false, a, b, c, lim.poleOrder};
        }
  return {};
}

/// Solves the compatibility system over the two-derivation block ansatz.
///
/// The C tensor must have the corner/middle shape C^{11}_{11} = C^{22}_{22}
/// = 1, C^{12}_{21} = p, C^{21}_{12} = p^-1. Unknowns: u = S^{11}_{11},
/// v = S^{11}_{22}, w = S^{22}_{11}, z = S^{22}_{22}, s = S^{12}_{12},
/// t = S^{21}_{21}, with S^{12}_{21} = p(1+s) and S^{21}_{12} = p^-1(1+t)
/// fixed by the consistency rows of (1+S)(1-C) = 0. The compatibility
/// components reduce to
///   u^2 = p^2 (1+s)^2            z^2 = p^-2 (1+t)^2
///   s v = 1 - p^2 (1+s)^2        w t = 1 - p^-2 (1+t)^2
///   v (1+t) = -p^2 t (1+s)       w (1+s) = -p^-2 s (1+t)
///   t u + z v = 0                u w + s z = 0.
/// Writing P = p(1+s), Q = p^-1(1+t) with both nonzero, the two trace rows
/// force Q^2 = P^2; the branch Q = -P collapses to (p - p^-1) P = 0, so
/// Q = P and the linear equation (p + p^-1) P = 2 pins P. The 'tu + zv = 0'
/// pair then ties the signs of u and z, leaving exactly the two members
/// u = z = +P and u = z = -P. The degenerate branch 1 + s = 0 yields one
/// constant sigma that is not a deformation of C; it is excluded from the
/// returned family.
inline std::vector<SigmaTensor> solveSigma(const QMatrix& C,
                                           const MetricTensor& metric) {
  if (C.rows() != 4)
    throw std::invalid_argument(
        "solveSigma: only two-derivation calculi are supported; use "
        "metricCheck to verify a candidate");
  if (metric.g != QMatrix::identity(2))
    throw std::invalid_argument(
        "solveSigma: only the euclidean metric is supported; use metricCheck "
        "to verify a candidate");
  // validate the corner/middle shape and read off p
  QScalar p = C.at(1, 2);
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = 0; j < 4; ++j) {
      QScalar want(0);
      if ((i == 0 && j == 0) || (i == 3 && j == 3)) want = QScalar(1);
      if (i == 1 && j == 2) want = p;
      if (i == 2 && j == 1) want = p.inverse();
      if (C.at(i, j) != want)
        throw std::invalid_argument(
            "solveSigma: C is not of the corner/middle block shape; use "
            "metricCheck to verify a candidate");
    }

  QScalar denom = p + p.inverse();
  if (denom.isZero())
    throw std::invalid_argument("solveSigma: degenerate C parameter");
  QScalar P = QScalar(2) / denom;
  QScalar s = P / p - QScalar(1);
  QScalar t = P * p - QScalar(1);
  QScalar v = -(p * p) * t * (QScalar(1) + s) / (QScalar(1) + t);
  QScalar w = -(s * (QScalar(1) + t)) / (p * p * (QScalar(1) + s));

  std::vector<SigmaTensor> out;
  for (int sign : {+1, -1}) {
    QScalar u = QScalar(sign) * P;
    SigmaTensor sig{QMatrix(4, 4)};
    sig.S.at(0, 0) = u;
    sig.S.at(0, 3) = v;
    sig.S.at(3, 0) = w;
    sig.S.at(3, 3) = u;
    sig.S.at(1, 1) = s;
    sig.S.at(1, 2) = p * (QScalar(1) + s);
    sig.S.at(2, 1) = (QScalar(1) + t) / p;
    sig.S.at(2, 2) = t;
    // every returned solution passes both conditions by substitution
    if (!sigmaCheck(sig, C).pass || !metricCheck(sig, metric).pass)
      throw std::logic_error("solveSigma: candidate failed verification");
    out.push_back(std::move(sig));
  }
  return out;
}

}  // namespace qplane
