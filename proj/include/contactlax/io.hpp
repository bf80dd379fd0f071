#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "contactlax/compat.hpp"
#include "contactlax/expr.hpp"
#include "contactlax/gauge.hpp"
#include "contactlax/numeric.hpp"
#include "contactlax/rls.hpp"

namespace contactlax {

using Json = nlohmann::json;

/// Rationals travel as strings ("3", "-7/2").
Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

/// {"op":"num","value":"p/q"} | {"op":"jet","field":f,"d":[x,y,z,t]} |
/// {"op":"add"|"mul","args":[...]} | {"op":"pow","base":e,"exp":k} |
/// {"op":"diff","dir":"x","arg":e}
Json to_json(const Expr& e);
Expr expr_from_json(const Json& j);

Json to_json(const JetQuotient& q);
JetQuotient quotient_from_json(const Json& j);

/// {"num":[c0, c1, ...], "den":[{"factor":[...], "exp":k}, ...]} plus a
/// read-only "pf" block (polynomial part and residues) when available.
Json to_json(const PRational& r);
PRational prational_from_json(const Json& j);

Json to_json(const LaxPair& lax);
LaxPair laxpair_from_json(const Json& j);

Json to_json(const PDESystem& sys);
PDESystem system_from_json(const Json& j);

Json to_json(const DeterminednessReport& r);
Json to_json(const RlsReport& r);
Json to_json(const MapReport& r);
Json to_json(const Theorem1Report& r);
Json to_json(const ConvergenceReport& r);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// Subscript style: (v_{1})_{xz}, \psi_{x}, \tilde{a}_{1}. Frame XYZT prints
/// derivative letters in upper case.
std::string latex(const JetVar& v, Frame frame = Frame::xyzt);
std::string latex(const DiffPoly& p, Frame frame = Frame::xyzt);
std::string latex(const JetQuotient& q, Frame frame = Frame::xyzt);
std::string latex(const PRational& r, Frame frame = Frame::xyzt);
/// One aligned line per equation, "= 0", each tagged with its label.
std::string latex(const PDESystem& sys);

/// Machine-readable record of one CLI invocation.
struct RunReport {
  std::string command;
  /// check name -> "pass" | "fail" | "mismatch-reported"
  std::map<std::string, std::string> verdicts;
  std::vector<std::string> artifacts;
  double seconds = 0.0;
  Json details = Json::object();

  /// 1 if any verdict is "fail", else 0.
  int exit_code() const;
  Json to_json() const;
};

}  // namespace contactlax
