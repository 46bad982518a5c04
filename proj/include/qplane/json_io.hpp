#pragma once

// JSON renderings of the core values. Schemas:
//   QScalar      {"num": [[exp, coeff], ...], "den": [[exp, coeff], ...]}
//                exponent-ascending, zero coefficients omitted
//   PlaneElement [{"m": int, "n": int, "c": QScalar}, ...] lex-sorted by (m,n)
//   QMatrix      {"rows": r, "cols": c, "entries": [QScalar, ...]} row-major
//   GradedForm   {"degree": d, "terms": [{"word": [int..], "c": PlaneElement}]}

#include <json.hpp>

#include "qplane/climit.hpp"
#include "qplane/connection.hpp"

namespace qplane {

using Json = nlohmann::ordered_json;

inline Json toJson(const Int& v) {
  if (v.fits_slong_p()) return Json(v.get_si());
  return Json(v.get_str());  // arbitrary precision fallback
}

inline Json toJson(const ZPoly& p) {
  Json arr = Json::array();
  for (int e = 0; e <= p.degree(); ++e)
    if (p.coeff(e) != 0) arr.push_back(Json::array({e, toJson(p.coeff(e))}));
  return arr;
}

inline Json toJson(const QScalar& s) {
  return Json{{"num", toJson(s.num())}, {"den", toJson(s.den())}};
}

inline Json toJson(const PlaneElement& e) {
  Json arr = Json::array();
  for (const auto& [k, c] : e.terms())
    arr.push_back(Json{{"m", k.first}, {"n", k.second}, {"c", toJson(c)}});
  return arr;
}

inline Json toJson(const QMatrix& m) {
  Json entries = Json::array();
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) entries.push_back(toJson(m.at(i, j)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline Json toJson(const GradedForm& f) {
  Json terms = Json::array();
  for (const auto& [w, c] : f.coeffs()) {
    Json word = Json::array();
    for (int a : w) word.push_back(a + 1);  // 1-based frame indices
    terms.push_back(Json{{"word", word}, {"c", toJson(c)}});
  }
  return Json{{"degree", f.degree()}, {"terms", terms}};
}

inline Json toJson(const CPoly& p) {
  Json arr = Json::array();
  for (const auto& [k, c] : p.terms())
    arr.push_back(Json{{"m", k.first}, {"n", k.second}, {"c", c.get_str()}});
  return arr;
}

inline Json toJson(const CRational& r) {
  return Json{{"num", toJson(r.num())}, {"den", toJson(r.den())}};
}

inline Json toJson(const CForm& f) {
  Json coeffs = Json::array();
  for (const auto& c : f.c) coeffs.push_back(toJson(c));
  return Json{{"degree", f.degree}, {"coeffs", coeffs}};
}

// -- parsing (used by the report round-trip guarantees) -----------------------

inline Int intFromJson(const Json& j) {
  if (j.is_string()) return Int(j.get<std::string>());
  return Int(static_cast<long>(j.get<int64_t>()));
}

inline ZPoly zpolyFromJson(const Json& j) {
  ZPoly p;
  for (const auto& pair : j)
    p = p + ZPoly::monomial(pair.at(0).get<int>(), intFromJson(pair.at(1)));
  return p;
}

inline QScalar qscalarFromJson(const Json& j) {
  return QScalar(zpolyFromJson(j.at("num")), zpolyFromJson(j.at("den")));
}

inline PlaneElement planeFromJson(const Json& j) {
  PlaneElement e;
  for (const auto& t : j)
    e += PlaneElement::monomial(t.at("m").get<int>(), t.at("n").get<int>(),
                                qscalarFromJson(t.at("c")));
  return e;
}

inline QMatrix qmatrixFromJson(const Json& j) {
  QMatrix m(j.at("rows").get<size_t>(), j.at("cols").get<size_t>());
  size_t idx = 0;
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t jj = 0; jj < m.cols(); ++jj)
      m.at(i, jj) = qscalarFromJson(j.at("entries").at(idx++));
  return m;
}

}  // namespace qplane
