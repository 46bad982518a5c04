#pragma once

// The five built-in calculi over the generalized quantum plane.

#include <optional>
#include <string>
#include <vector>

#include "qplane/forms.hpp"

namespace qplane {

struct Preset {
  std::string id;
  std::optional<Rat> alpha;  // three-derivation calculi only
  CalculusSpec spec;
};

inline std::vector<std::string> presetIds() {
  return {"calc2a", "calc2b", "calc3a", "calc3b", "outer"};
}

namespace detail {

inline QScalar q() { return QScalar::q(); }

inline size_t pairIdx(int n, int a, int b) {
  return static_cast<size_t>(a * n + b);
}

// n = 2 tensor with (th^a)^2 = 0 and th^1 th^2 + p th^2 th^1 = 0.
inline QMatrix cPair(const QScalar& p) {
  QMatrix c(4, 4);
  c.at(pairIdx(2, 0, 0), pairIdx(2, 0, 0)) = QScalar(1);
  c.at(pairIdx(2, 1, 1), pairIdx(2, 1, 1)) = QScalar(1);
  c.at(pairIdx(2, 0, 1), pairIdx(2, 1, 0)) = p;
  c.at(pairIdx(2, 1, 0), pairIdx(2, 0, 1)) = p.inverse();
  return c;
}

// n = 3 tensor shared by both completions: squares vanish and
// th^1 th^3 + q th^3 th^1 = 0, th^3 th^2 + q th^2 th^3 = 0.
// The (12)/(21) block is either the artificial completion C^{12}_{12} = -1
// or the supplementary relation th^1 th^2 + q th^2 th^1 = 0.
inline QMatrix cTriple(bool artificial) {
  QMatrix c(9, 9);
  for (int a = 0; a < 3; ++a)
    c.at(pairIdx(3, a, a), pairIdx(3, a, a)) = QScalar(1);
  c.at(pairIdx(3, 0, 2), pairIdx(3, 2, 0)) = q();
  c.at(pairIdx(3, 2, 0), pairIdx(3, 0, 2)) = q().inverse();
  c.at(pairIdx(3, 2, 1), pairIdx(3, 1, 2)) = q();
  c.at(pairIdx(3, 1, 2), pairIdx(3, 2, 1)) = q().inverse();
  if (artificial) {
    c.at(pairIdx(3, 0, 1), pairIdx(3, 0, 1)) = QScalar(-1);
    c.at(pairIdx(3, 1, 0), pairIdx(3, 1, 0)) = QScalar(-1);
  } else {
    c.at(pairIdx(3, 0, 1), pairIdx(3, 1, 0)) = q();
    c.at(pairIdx(3, 1, 0), pairIdx(3, 0, 1)) = q().inverse();
  }
  return c;
}

}  // namespace detail

inline Preset makePreset(const std::string& id,
                         std::optional<Rat> alpha = std::nullopt) {
  using detail::q;
  Preset p;
  p.id = id;
  QScalar norm2a = q() / (q() - QScalar(1));
  if (id == "calc2a" || id == "calc3a" || id == "calc3b") {
    p.spec.derivations.push_back(
        Derivation::inner(norm2a * PlaneElement::y()));
    p.spec.derivations.push_back(
        Derivation::inner(norm2a * PlaneElement::x()));
  }
  if (id == "calc2a") {
    p.spec.C = detail::cPair(q());
  } else if (id == "calc2b") {
    QScalar norm = QScalar(1) / (q().pow(4) - QScalar(1));
    p.spec.derivations.push_back(
        Derivation::inner(norm * PlaneElement::monomial(-2, 2)));
    p.spec.derivations.push_back(
        Derivation::inner(norm * PlaneElement::monomial(-2, 0)));
    p.spec.C = detail::cPair(q().pow(-4));
  } else if (id == "calc3a" || id == "calc3b") {
    Rat a = alpha.value_or(Rat(1));
    if (a == 0)
      throw std::invalid_argument(id + ": alpha must be a nonzero rational");
    p.alpha = a;
    p.spec.derivations.push_back(Derivation::inner(
        (QScalar(a) * norm2a) * (PlaneElement::x() * PlaneElement::y())));
    p.spec.C = detail::cTriple(id == "calc3a");
  } else if (id == "outer") {
    p.spec.derivations.push_back(
        Derivation::outer(PlaneElement::x(), PlaneElement()));
    p.spec.derivations.push_back(
        Derivation::outer(PlaneElement(), PlaneElement::y()));
    QMatrix c(4, 4);  // classical case: 1-forms anticommute
    c.at(detail::pairIdx(2, 0, 0), detail::pairIdx(2, 0, 0)) = QScalar(1);
    c.at(detail::pairIdx(2, 1, 1), detail::pairIdx(2, 1, 1)) = QScalar(1);
    c.at(detail::pairIdx(2, 0, 1), detail::pairIdx(2, 1, 0)) = QScalar(1);
    c.at(detail::pairIdx(2, 1, 0), detail::pairIdx(2, 0, 1)) = QScalar(1);
    p.spec.C = c;
  } else {
    throw std::invalid_argument("unknown preset: " + id);
  }
  return p;
}

}  // namespace qplane
