#pragma once

#include <json.hpp>

#include <string>
#include <string_view>

#include "sumprod/numeric.hpp"
#include "sumprod/rational.hpp"

namespace sumprod {

enum class Verdict { pass, fail, report_only };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::report_only: return "report-only";
  }
  return "?";
}

inline Verdict verdict_from_string(std::string_view s) {
  if (s == "pass") return Verdict::pass;
  if (s == "fail") return Verdict::fail;
  return Verdict::report_only;
}

enum class Relation { le, ge };

/// One named inequality (or identity) evaluated on one set.
///
/// Explicit-constant statements get a pass/fail verdict; statements whose
/// constant is only implied get `report_only` and are tracked through `ratio`.
struct InequalityReport {
  std::string check;
  nlohmann::json set = nlohmann::json::object();
  std::string lhs_exact;
  std::string lhs_decimal;
  Relation relation = Relation::le;
  std::string rhs_formula;
  std::string rhs_exact;  // empty when the right side is not rational
  std::string rhs_decimal;
  std::string constant;
  std::string ratio;
  Verdict verdict = Verdict::report_only;
  nlohmann::json details = nlohmann::json::object();

  bool failed() const { return verdict == Verdict::fail; }
};

inline std::string ratio_string(const BigFloat& lhs, const BigFloat& rhs) {
  if (rhs == 0) return lhs == 0 ? "nan" : "inf";
  return decimal(lhs / rhs, 12);
}

/// Exact comparison with an explicit constant.
inline InequalityReport exact_check(std::string check, const Rational& lhs, Relation rel, const Rational& rhs,
                                    std::string formula, std::string constant) {
  InequalityReport r;
  r.check = std::move(check);
  r.lhs_exact = lhs.str();
  r.lhs_decimal = decimal(lhs);
  r.relation = rel;
  r.rhs_formula = std::move(formula);
  r.rhs_exact = rhs.str();
  r.rhs_decimal = decimal(rhs);
  r.constant = std::move(constant);
  r.ratio = ratio_string(to_float(lhs), to_float(rhs));
  bool holds = rel == Relation::le ? lhs <= rhs : lhs >= rhs;
  r.verdict = holds ? Verdict::pass : Verdict::fail;
  return r;
}

/// Implicit-constant bound: LHS against the bound's core expression.
inline InequalityReport ratio_report(std::string check, const std::string& lhs_exact, const BigFloat& lhs, Relation rel,
                                     const BigFloat& rhs, std::string formula) {
  InequalityReport r;
  r.check = std::move(check);
  r.lhs_exact = lhs_exact;
  r.lhs_decimal = decimal(lhs);
  r.relation = rel;
  r.rhs_formula = std::move(formula);
  r.rhs_decimal = decimal(rhs);
  r.constant = "implicit (constant 1 used for the core expression)";
  r.ratio = ratio_string(lhs, rhs);
  r.verdict = Verdict::report_only;
  return r;
}

inline nlohmann::json to_json(const InequalityReport& r) {
  return nlohmann::json{
      {"check", r.check},
      {"set", r.set},
      {"lhs", {{"exact", r.lhs_exact}, {"decimal", r.lhs_decimal}}},
      {"relation", r.relation == Relation::le ? "<=" : ">="},
      {"rhs", {{"formula", r.rhs_formula}, {"exact", r.rhs_exact}, {"decimal", r.rhs_decimal}}},
      {"constant", r.constant},
      {"ratio", r.ratio},
      {"verdict", std::string(to_string(r.verdict))},
      {"details", r.details},
  };
}

inline InequalityReport report_from_json(const nlohmann::json& j) {
  InequalityReport r;
  r.check = j.at("check").get<std::string>();
  r.set = j.value("set", nlohmann::json::object());
  r.lhs_exact = j.at("lhs").at("exact").get<std::string>();
  r.lhs_decimal = j.at("lhs").at("decimal").get<std::string>();
  r.relation = j.at("relation").get<std::string>() == "<=" ? Relation::le : Relation::ge;
  r.rhs_formula = j.at("rhs").at("formula").get<std::string>();
  r.rhs_exact = j.at("rhs").at("exact").get<std::string>();
  r.rhs_decimal = j.at("rhs").at("decimal").get<std::string>();
  r.constant = j.at("constant").get<std::string>();
  r.ratio = j.at("ratio").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.details = j.value("details", nlohmann::json::object());
  return r;
}

}  // namespace sumprod
