#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qplane/checks.hpp"
#include "qplane/json_io.hpp"
#include "qplane/parse.hpp"

using namespace qplane;

namespace {

QScalar q() { return QScalar::q(); }

PlaneElement randomElement(std::mt19937& rng) {
  std::uniform_int_distribution<int> expo(-2, 2), coeff(-3, 3), nterms(1, 3);
  PlaneElement e;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    QScalar c = (QScalar(coeff(rng)) + QScalar(coeff(rng)) * q()) /
                (QScalar(coeff(rng) == 0 ? 1 : coeff(rng)) + q() * q());
    e += PlaneElement::monomial(expo(rng), expo(rng), c);
  }
  return e;
}

}  // namespace

TEST_CASE("defining relation parses to zero") {
  Parsed v = parseExpression("x*y - q*y*x");
  CHECK(!v.isForm());
  CHECK(v.scalar.isZero());
}

TEST_CASE("monomial inversion in the grammar") {
  Parsed v = parseExpression("y^-1 * x^-1");
  CHECK(v.scalar == QScalar::q(-1) * PlaneElement::monomial(-1, -1));
  Parsed w = parseExpression("x^-1 * y^-1");
  CHECK(parseExpression("y^-1 * x^-1").scalar ==
        QScalar::q(-1) * w.scalar);
}

TEST_CASE("rationals, division and unary minus") {
  CHECK(parseExpression("2/3").scalar == PlaneElement(QScalar(Rat(2, 3))));
  CHECK(parseExpression("(q^2 + 1)^-1").scalar ==
        PlaneElement(QScalar(1) / (q() * q() + QScalar(1))));
  CHECK(parseExpression("-x + x").scalar.isZero());
  CHECK(parseExpression("1/(x*y)").scalar ==
        QScalar::q(-1) * PlaneElement::monomial(-1, -1));
}

TEST_CASE("form expressions need a preset") {
  CHECK_THROWS_AS(parseExpression("dx"), ParseError);
  Session s{makePreset("calc2a")};
  Parsed v = parseExpression("x * dx - q * dx * x", &s.cal);
  REQUIRE(v.isForm());
  CHECK(v.form->isZero());
  // frame symbols
  Parsed t = parseExpression("t1*t2 + q*t2*t1", &s.cal);
  CHECK(t.form->isZero());
  CHECK_THROWS_AS(parseExpression("t3", &s.cal), ParseError);
  CHECK_THROWS_AS(parseExpression("tau", &s.cal), ParseError);
  Session s3{makePreset("calc3b", Rat(1))};
  CHECK(parseExpression("x*dy - q*dy*x - tau", &s3.cal).form->isZero());
}

TEST_CASE("parse errors carry positions") {
  try {
    parseExpression("x + z");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.pos == 4);
  }
  CHECK_THROWS_AS(parseExpression("x +"), ParseError);
  CHECK_THROWS_AS(parseExpression("(x"), ParseError);
  CHECK_THROWS_AS(parseExpression("x y"), ParseError);
  CHECK_THROWS_AS(parseExpression("(x + y)^-1"), ParseError);
  Session s{makePreset("calc2a")};
  CHECK_THROWS_AS(parseExpression("dx + x", &s.cal), ParseError);
  CHECK_THROWS_AS(parseExpression("dx^-1", &s.cal), ParseError);
}

TEST_CASE("printing then parsing is the identity") {
  std::mt19937 rng(77);
  for (int i = 0; i < 200; ++i) {
    PlaneElement e = randomElement(rng);
    CHECK(parseExpression(e.toString()).scalar == e);
  }
  Session s{makePreset("calc2a")};
  std::uniform_int_distribution<int> word(0, 1);
  for (int i = 0; i < 50; ++i) {
    GradedForm f = s.cal.zeroForm(1);
    f.addTerm({word(rng)}, randomElement(rng));
    f.addTerm({word(rng)}, randomElement(rng));
    Parsed back = parseExpression(f.toString(), &s.cal);
    if (f.isZero())
      CHECK((!back.isForm() || back.form->isZero()));
    else
      CHECK(back.asForm(s.cal) == f);
  }
}

TEST_CASE("scalar JSON round trip") {
  std::mt19937 rng(78);
  for (int i = 0; i < 100; ++i) {
    PlaneElement e = randomElement(rng);
    CHECK(planeFromJson(toJson(e)) == e);
  }
  QScalar s = (q().pow(5) - QScalar(3)) / (QScalar(7) * q() + QScalar(1));
  CHECK(qscalarFromJson(toJson(s)) == s);
  // schema shape: exponent-ascending, zero-free pairs
  Json j = toJson(q().pow(2) - q().pow(2) + q() + QScalar(5));
  CHECK(j["num"].size() == 2);
  CHECK(j["num"][0][0] == 0);
  CHECK(j["num"][1][0] == 1);
}

TEST_CASE("matrix JSON round trip") {
  Session s{makePreset("calc2b")};
  CHECK(qmatrixFromJson(toJson(s.cal.C())) == s.cal.C());
}

TEST_CASE("verify reports are deterministic and round trip") {
  Session s{makePreset("calc2a")};
  Report r1;
  r1.command = "verify";
  r1.preset = "calc2a";
  r1.checks = runChecks(s, std::nullopt, std::nullopt);
  Report r2;
  r2.command = "verify";
  r2.preset = "calc2a";
  r2.checks = runChecks(s, std::nullopt, std::nullopt);
  CHECK(r1.toJson().dump() == r2.toJson().dump());
  CHECK(fromJson(r1.toJson()) == r1);
  for (const auto& c : r1.checks) CHECK(c.pass);
}

TEST_CASE("single-check filter and unknown ids") {
  Session s{makePreset("outer")};
  auto one = runChecks(s, std::string("frame_roundtrip"), std::nullopt);
  REQUIRE(one.size() == 1);
  CHECK(one[0].id == "frame_roundtrip");
  CHECK(one[0].pass);
  CHECK_THROWS_AS(runChecks(s, std::string("nope"), std::nullopt),
                  std::invalid_argument);
}

TEST_CASE("numeric layer stays consistent at sample points") {
  Session s{makePreset("calc2b")};
  for (const char* at : {"2", "5/3", "-7/2"}) {
    auto checks = runChecks(s, std::nullopt, Rat(at));
    for (const auto& c : checks) {
      CHECK(c.pass);
      CHECK(c.numeric.find("INCONSISTENT") == std::string::npos);
    }
  }
}

TEST_CASE("preset construction validates alpha") {
  CHECK_THROWS_AS(makePreset("calc3a", Rat(0)), std::invalid_argument);
  CHECK_THROWS_AS(makePreset("banana"), std::invalid_argument);
  CHECK(makePreset("calc3b", Rat(2, 3)).alpha == Rat(2, 3));
}
