// Command line workbench for the quantum-plane differential calculi.
//
//   qplane list-presets
//   qplane eval "<expr>" [preset] [--alpha a/b]
//   qplane verify <preset> [--alpha a/b] [--check id] [--q a/b] [--format f]
//   qplane structure <preset> [--alpha a/b] [--format f]
//   qplane connection <preset> [--alpha a/b] [--solve] [--format f]
//   qplane limit <preset> [--alpha a/b] [--format f]
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 parse error,
// 3 preset error.

#include <CLI11.hpp>
#include <iostream>
#include <memory>

#include "qplane/checks.hpp"

using namespace qplane;

namespace {

struct PresetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rat parseRat(const std::string& text, const std::string& what) {
  try {
    Rat r(text);
    r.canonicalize();
    return r;
  } catch (const std::exception&) {
    throw PresetError(what + " is not a rational number: " + text);
  }
}

std::unique_ptr<Session> makeSession(
    const std::string& presetId,
    const std::optional<std::string>& alphaText) {
  std::optional<Rat> alpha;
  if (alphaText) alpha = parseRat(*alphaText, "--alpha");
  try {
    return std::make_unique<Session>(makePreset(presetId, alpha));
  } catch (const std::exception& e) {
    throw PresetError(e.what());
  }
}

void emit(const Report& report, const std::string& format) {
  if (format == "json")
    std::cout << report.toJson().dump(2) << "\n";
  else
    std::cout << report.toText();
}

Json structurePayload(const Session& s) {
  const Calculus& cal = s.cal;
  const auto& st = cal.structure();
  int n = cal.n();
  Json cabc = Json::object(), d = Json::object(), k = Json::object();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        std::string key = std::to_string(a + 1) + "_" + std::to_string(b + 1) +
                          std::to_string(c + 1);
        if (!st.Cv(a, b, c).isZero()) cabc[key] = toJson(st.Cv(a, b, c));
        if (!st.Dv(a, b, c).isZero()) d[key] = toJson(st.Dv(a, b, c));
      }
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c)
      if (!st.Kv(b, c).isZero())
        k[std::to_string(b + 1) + std::to_string(c + 1)] = toJson(st.Kv(b, c));
  Json rels = Json::array();
  for (const auto& r : cal.relationReport())
    rels.push_back(r.found ? r.lhs + " = " + r.rhs : r.lhs + ": no relation");
  return Json{{"C2", toJson(cal.C())}, {"Cabc", cabc},  {"D", d},
              {"K", k},                {"theta", toJson(st.theta)},
              {"relations", rels}};
}

Json connectionPayload(const Session& s, bool solve) {
  const Calculus& cal = s.cal;
  if (!cal.hasStructure())
    throw PresetError("connection data unavailable for outer calculi");
  SigmaTensor sigma = s.defaultSigma();
  MetricTensor g = MetricTensor::euclidean(cal.n());
  ConnectionData conn = omega0(cal, sigma);
  Json omega = Json::object();
  for (int a = 0; a < cal.n(); ++a)
    for (int b = 0; b < cal.n(); ++b)
      for (int c = 0; c < cal.n(); ++c)
        if (!conn.om(a, b, c).isZero())
          omega[std::to_string(a + 1) + "_" + std::to_string(b + 1) +
                std::to_string(c + 1)] = toJson(conn.om(a, b, c));
  bool torsionFree = torsionFreeCheck(conn);
  Json checks{{"sigma", sigmaCheck(sigma, cal.C()).pass},
              {"metric", metricCheck(sigma, g).pass},
              {"torsion_free", torsionFree},
              {"symmetric_metric", sigmaSymmetryCheck(sigma, g).pass},
              {"q1_regular", omegaQ1Poles(conn).regular}};
  Json out{{"S", toJson(sigma.S)},
           {"g", toJson(g.g)},
           {"omega", omega},
           {"checks", checks}};
  if (solve) {
    Json sols = Json::array();
    for (const auto& sol : solveSigma(cal.C(), MetricTensor::euclidean(2)))
      sols.push_back(toJson(sol.S));
    out["solutions"] = sols;
  }
  return out;
}

Json limitPayload(const Session& s) {
  const Calculus& cal = s.cal;
  ClassicalChart chart = classicalChart(cal);  // throws when singular
  Json frame = Json::array();
  for (const auto& f : chart.frame) frame.push_back(toJson(f));
  Json p;
  if (chart.p) {
    p = Json::array();
    for (const auto& pa : *chart.p) p.push_back(toJson(pa));
  }
  Json out{{"p", p},
           {"frame", frame},
           {"K", toJson(gaussCurvature(chart.frame))}};
  Json cross;
  if (!cal.hasStructure()) {
    cross["status"] = "unsupported";
    cross["residual"] = "outer calculi carry no omega0";
  } else {
    LimitCrosscheck cc = connectionLimitCrosscheck(cal, s.defaultSigma());
    if (cc.status == LimitCrosscheck::Status::pole) {
      cross["status"] = "pole";
      cross["residual"] = "omega0 entry (" + std::to_string(cc.pole.a + 1) +
                          "," + std::to_string(cc.pole.b + 1) + "," +
                          std::to_string(cc.pole.c + 1) + ") has a pole of order " +
                          std::to_string(cc.pole.order);
    } else {
      cross["status"] = cc.matches ? "match" : "mismatch";
      cross["residual"] = cc.difference.toString();
    }
  }
  out["crosscheck"] = cross;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact symbolic workbench for quantum-plane differential calculi"};
  app.require_subcommand(1);

  std::string preset, format = "text", expr;
  std::optional<std::string> alphaText, qText, checkId;
  bool solve = false;

  auto addCommon = [&](CLI::App* sub, bool needsPreset) {
    if (needsPreset)
      sub->add_option("preset", preset, "preset id")->required();
    sub->add_option("--alpha", alphaText, "rational alpha for calc3 presets");
    sub->add_option("--format", format, "text|json")
        ->check(CLI::IsMember({"text", "json"}));
  };

  CLI::App* list = app.add_subcommand("list-presets", "list the built-in calculi");
  CLI::App* eval =
      app.add_subcommand("eval", "parse and normalize an expression");
  eval->add_option("expr", expr, "expression")->required();
  eval->add_option("preset", preset, "optional preset context");
  eval->add_option("--alpha", alphaText, "rational alpha for calc3 presets");
  eval->add_option("--format", format, "text|json")
      ->check(CLI::IsMember({"text", "json"}));

  CLI::App* verify = app.add_subcommand("verify", "run every check for a preset");
  addCommon(verify, true);
  verify->add_option("--check", checkId, "run a single check by id");
  verify->add_option("--q", qText,
                     "also evaluate residuals at this rational q");

  CLI::App* structure =
      app.add_subcommand("structure", "emit the structure data");
  addCommon(structure, true);
  CLI::App* connection =
      app.add_subcommand("connection", "emit the connection data and checks");
  addCommon(connection, true);
  connection->add_flag("--solve", solve, "solve the sigma ansatz system");
  CLI::App* limit = app.add_subcommand("limit", "emit the q -> 1 chart");
  addCommon(limit, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (list->parsed()) {
      for (const auto& id : presetIds()) std::cout << id << "\n";
      return 0;
    }

    if (eval->parsed()) {
      std::unique_ptr<Session> session;
      if (!preset.empty()) session = makeSession(preset, alphaText);
      Parsed value =
          parseExpression(expr, session ? &session->cal : nullptr);
      if (format == "json") {
        Json j{{"command", "eval"}, {"input", expr}, {"value", value.toString()}};
        j["data"] = value.isForm() ? toJson(*value.form) : toJson(value.scalar);
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << value.toString() << "\n";
      }
      return 0;
    }

    std::unique_ptr<Session> sessionPtr = makeSession(preset, alphaText);
    Session& session = *sessionPtr;
    Report report;
    report.preset = preset;
    report.alpha = session.preset.alpha;

    if (verify->parsed()) {
      report.command = "verify";
      if (qText) report.qValue = parseRat(*qText, "--q");
      report.checks = runChecks(session, checkId, report.qValue);
      emit(report, format);
      return report.allPass() ? 0 : 1;
    }
    if (structure->parsed()) {
      report.command = "structure";
      if (!session.cal.hasStructure())
        throw PresetError("structure data unavailable for outer calculi");
      report.payload = structurePayload(session);
      emit(report, format);
      return 0;
    }
    if (connection->parsed()) {
      report.command = "connection";
      report.payload = connectionPayload(session, solve);
      emit(report, format);
      return 0;
    }
    if (limit->parsed()) {
      report.command = "limit";
      report.payload = limitPayload(session);
      emit(report, format);
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const PresetError& e) {
    std::cerr << "preset error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
