#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qplane/climit.hpp"
#include "qplane/presets.hpp"

using namespace qplane;

namespace {

QScalar q() { return QScalar::q(); }

CPoly randomPoly(std::mt19937& rng, int maxTerms = 2) {
  std::uniform_int_distribution<int> expo(-2, 2), coeff(-3, 3),
      nterms(1, maxTerms);
  CPoly p;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i)
    p += CPoly::monomial(expo(rng), expo(rng), Rat(coeff(rng)));
  return p;
}

SigmaTensor sigmaRegular() {
  QScalar c = QScalar(1) / (q() * q() + QScalar(1));
  QScalar two_q = QScalar(2) * q() * c;
  QScalar om = (QScalar(1) - q() * q()) * c;
  SigmaTensor s{QMatrix(4, 4)};
  s.S.at(0, 0) = two_q;
  s.S.at(0, 3) = om;
  s.S.at(1, 1) = om;
  s.S.at(1, 2) = two_q;
  s.S.at(2, 1) = two_q;
  s.S.at(2, 2) = -om;
  s.S.at(3, 0) = -om;
  s.S.at(3, 3) = two_q;
  return s;
}

SigmaTensor sigmaSingular() {
  SigmaTensor s = sigmaRegular();
  s.S.at(0, 0) = -s.S.at(0, 0);
  s.S.at(3, 3) = -s.S.at(3, 3);
  return s;
}

}  // namespace

TEST_CASE("Poisson bracket basics") {
  CHECK(poisson(CPoly::x(), CPoly::y()) == CPoly::monomial(1, 1));
  CHECK(poisson(CPoly::x(), CPoly::x()).isZero());
  CHECK(poisson(CPoly::x(2), CPoly::y()) == CPoly::monomial(2, 1, Rat(2)));
}

TEST_CASE("the two Poisson routes agree") {
  std::mt19937 rng(31);
  for (int i = 0; i < 60; ++i) {
    CPoly f = randomPoly(rng), g = randomPoly(rng);
    CHECK(poisson(f, g) == poissonViaCommutator(f, g));
  }
}

TEST_CASE("Poisson antisymmetry, Leibniz and Jacobi") {
  std::mt19937 rng(32);
  for (int i = 0; i < 60; ++i) {
    CPoly f = randomPoly(rng), g = randomPoly(rng), h = randomPoly(rng);
    CHECK(poisson(f, g) == -poisson(g, f));
    CHECK(poisson(f, g * h) == poisson(f, g) * h + g * poisson(f, h));
    CPoly jac = poisson(f, poisson(g, h)) + poisson(g, poisson(h, f)) +
                poisson(h, poisson(f, g));
    CHECK(jac.isZero());
  }
}

TEST_CASE("commutative exterior derivative squares to zero") {
  std::mt19937 rng(33);
  for (int i = 0; i < 60; ++i) {
    CForm f = CForm::scalar(CRational(randomPoly(rng)));
    CHECK(f.d().d().isZero());
    CForm w = CForm::oneForm(CRational(randomPoly(rng)),
                             CRational(randomPoly(rng)));
    CHECK(w.d().d().isZero());
  }
}

TEST_CASE("rational canonicalization") {
  // (x^2 - y^2)/(x - y) collapses to x + y
  CRational r(CPoly::x(2) - CPoly::y(2), CPoly::x() - CPoly::y());
  CHECK(r == CRational(CPoly::x() + CPoly::y()));
  CHECK(r.den() == CPoly(Rat(1)));
  // division by a Laurent monomial always collapses
  CRational m(CPoly::x(-2) + CPoly::y(-2), CPoly::monomial(-2, -2));
  CHECK(m == CRational(CPoly::y(2) + CPoly::x(2)));
}

TEST_CASE("classical chart of the first calculus") {
  Calculus cal(makePreset("calc2a").spec);
  ClassicalChart chart = classicalChart(cal);
  REQUIRE(chart.p.has_value());
  CHECK((*chart.p)[0] == CPoly::y());
  CHECK((*chart.p)[1] == CPoly::x());
  // theta^1 = -x^-1 y^-1 dx, theta^2 = x^-1 y^-1 dy
  CHECK(chart.frame[0] ==
        CForm::oneForm(CRational(CPoly::monomial(-1, -1, Rat(-1))), CRational()));
  CHECK(chart.frame[1] ==
        CForm::oneForm(CRational(), CRational(CPoly::monomial(-1, -1))));
  CHECK(frameEquationCheck(*chart.p, chart.frame));
}

TEST_CASE("classical chart of the second calculus") {
  Calculus cal(makePreset("calc2b").spec);
  ClassicalChart chart = classicalChart(cal);
  REQUIRE(chart.p.has_value());
  CHECK((*chart.p)[0] == CPoly::monomial(-2, 2, Rat(1, 4)));
  CHECK((*chart.p)[1] == CPoly::monomial(-2, 0, Rat(1, 4)));
  // theta^1 = -2 x y^-2 dx, theta^2 = 2x dx - 2 x^2 y^-1 dy
  CHECK(chart.frame[0] ==
        CForm::oneForm(CRational(CPoly::monomial(1, -2, Rat(-2))), CRational()));
  CHECK(chart.frame[1] ==
        CForm::oneForm(CRational(CPoly::monomial(1, 0, Rat(2))),
                       CRational(CPoly::monomial(2, -1, Rat(-2)))));
  CHECK(frameEquationCheck(*chart.p, chart.frame));
}

TEST_CASE("classical chart of the outer preset") {
  Calculus cal(makePreset("outer").spec);
  ClassicalChart chart = classicalChart(cal);
  CHECK(!chart.p.has_value());
  CHECK(chart.frame[0] == CForm::oneForm(CRational(CPoly::x(-1)), CRational()));
  CHECK(chart.frame[1] == CForm::oneForm(CRational(), CRational(CPoly::y(-1))));
}

TEST_CASE("three-derivation frames are singular in the limit") {
  Calculus cal(makePreset("calc3a", Rat(1)).spec);
  CHECK_THROWS_WITH_AS(classicalChart(cal),
                       doctest::Contains("singular at q = 1"),
                       std::runtime_error);
}

TEST_CASE("Cartan connection of the limit frames") {
  // calc2a: w = y^-1 dx - x^-1 dy
  Calculus cal(makePreset("calc2a").spec);
  ClassicalChart chart = classicalChart(cal);
  CForm w = cartanConnection(chart.frame);
  CHECK(w == CForm::oneForm(CRational(CPoly::y(-1)),
                            CRational(CPoly::monomial(-1, 0, Rat(-1)))));

  // flat frames have vanishing connection
  auto flat = std::vector<CForm>{
      CForm::oneForm(CRational(Rat(1)), CRational()),
      CForm::oneForm(CRational(), CRational(Rat(1)))};
  CHECK(cartanConnection(flat).isZero());
  auto rotated = std::vector<CForm>{
      CForm::oneForm(CRational(), CRational(Rat(1))),
      CForm::oneForm(CRational(Rat(-1)), CRational())};
  CHECK(cartanConnection(rotated).isZero());

  // degenerate frames are rejected
  auto degenerate = std::vector<CForm>{flat[0], flat[0]};
  CHECK_THROWS_AS(cartanConnection(degenerate), std::domain_error);
}

TEST_CASE("Gaussian curvatures of the limit metrics") {
  Calculus a(makePreset("calc2a").spec);
  CHECK(gaussCurvature(classicalChart(a).frame) ==
        CRational(CPoly::x(2) + CPoly::y(2)));

  Calculus b(makePreset("calc2b").spec);
  CHECK(gaussCurvature(classicalChart(b).frame) ==
        CRational(CPoly::monomial(-4, 0) + CPoly::monomial(-4, 4)));

  Calculus o(makePreset("outer").spec);
  CHECK(gaussCurvature(classicalChart(o).frame).isZero());
}

TEST_CASE("curvature scales as c^-2 under frame rescaling") {
  Calculus cal(makePreset("calc2a").spec);
  ClassicalChart chart = classicalChart(cal);
  CRational k = gaussCurvature(chart.frame);
  for (long c : {2L, 3L}) {
    CRational cc{Rat(c)};
    std::vector<CForm> scaled{cc * chart.frame[0], cc * chart.frame[1]};
    CHECK(gaussCurvature(scaled) == k / (cc * cc));
  }
}

TEST_CASE("curvatures are Laurent polynomials") {
  for (const char* id : {"calc2a", "calc2b"}) {
    Calculus cal(makePreset(id).spec);
    CHECK(gaussCurvature(classicalChart(cal).frame).den() == CPoly(Rat(1)));
  }
}

TEST_CASE("frame equation rejects mismatched data") {
  Calculus cal(makePreset("calc2a").spec);
  ClassicalChart chart = classicalChart(cal);
  // p = (y, x) against the flat frame: {y, x} = -xy != 1
  auto flat = std::vector<CForm>{
      CForm::oneForm(CRational(Rat(1)), CRational()),
      CForm::oneForm(CRational(), CRational(Rat(1)))};
  CHECK(!frameEquationCheck(*chart.p, flat));
  // zero candidates never satisfy the duality
  std::vector<CPoly> zeros{CPoly(), CPoly()};
  CHECK(!frameEquationCheck(zeros, chart.frame));
}

TEST_CASE("connection limit crosscheck") {
  Calculus cal(makePreset("calc2a").spec);
  LimitCrosscheck ok = connectionLimitCrosscheck(cal, sigmaRegular());
  CHECK(ok.status == LimitCrosscheck::Status::ok);
  CHECK(ok.matches);
  CHECK(ok.cartan == CForm::oneForm(CRational(CPoly::y(-1)),
                                    CRational(CPoly::monomial(-1, 0, Rat(-1)))));

  LimitCrosscheck pole = connectionLimitCrosscheck(cal, sigmaSingular());
  CHECK(pole.status == LimitCrosscheck::Status::pole);
  CHECK(pole.pole.order == 1);

  Calculus outer(makePreset("outer").spec);
  CHECK_THROWS_AS(connectionLimitCrosscheck(outer, sigmaRegular()),
                  std::domain_error);

  // the second calculus with its own regular sigma also matches
  Calculus b(makePreset("calc2b").spec);
  LimitCrosscheck okB =
      connectionLimitCrosscheck(b, sigmaRegular().subst(q().pow(-4)));
  CHECK(okB.status == LimitCrosscheck::Status::ok);
  CHECK(okB.matches);
}
