#include "contactlax/rls.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "contactlax/errors.hpp"
#include "contactlax/expr.hpp"

#ifndef CONTACTLAX_DATA_DIR
#define CONTACTLAX_DATA_DIR "paper-transcriptions"
#endif

namespace contactlax {

Golden parse_golden(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string("golden file: ") + e.what());
  }
  Golden g;
  g.provenance = j.value("provenance", "");
  g.note = j.value("note", "");
  for (const auto& l : j.at("lines")) {
    GoldenLine line;
    line.label = l.at("label").get<std::string>();
    line.kind = l.value("kind", "printed");
    line.index = l.at("index").get<std::string>();
    line.evolves = l.at("evolves").get<std::string>();
    line.expr = l.at("expr").get<std::string>();
    if (line.index != "i" && line.index != "j")
      throw StructuralError("golden line '" + line.label + "' has index '" + line.index + "'");
    g.lines.push_back(std::move(line));
  }
  return g;
}

Golden load_golden(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open golden file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_golden(ss.str());
}

std::string default_golden_path() {
  const char* dir = std::getenv("CONTACTLAX_DATA_DIR");
  return std::string(dir && *dir ? dir : CONTACTLAX_DATA_DIR) + "/rls_system.json";
}

std::vector<std::pair<int, JetQuotient>> instantiate(const GoldenLine& line, int m, int n) {
  std::vector<std::pair<int, JetQuotient>> out;
  const int hi = line.index == "i" ? m : n;
  for (int k = 1; k <= hi; ++k) {
    IndexEnv env{{"m", m}, {"n", n}, {line.index, k}};
    out.emplace_back(k, parse_quotient(line.expr, env));
  }
  return out;
}

namespace {

JetVar evolution_jet(const GoldenLine& line, int m, int n, int k) {
  IndexEnv env{{"m", m}, {"n", n}, {line.index, k}};
  const Expr e = parse_expr(line.evolves, env);
  if (e.op != Expr::Op::jet) throw StructuralError("evolution jet of '" + line.label + "' is not a jet");
  return e.var;
}

std::vector<std::string> term_strings(const DiffPoly& p) {
  std::vector<std::string> out;
  for (const auto& t : p.terms()) out.push_back(DiffPoly(t.mono, t.coeff).str());
  return out;
}

}  // namespace

bool RlsReport::all_printed_match() const {
  for (const auto& l : lines)
    if (l.kind == "printed" && !l.symbolic_match) return false;
  return true;
}

bool RlsReport::consistent() const {
  for (const auto& l : lines) {
    if (l.matched.empty()) return false;
    if (l.symbolic_match != l.numeric_match()) return false;
  }
  return unmatched_derived.empty();
}

std::string RlsReport::verdict() const {
  if (!consistent()) return "fail";
  return all_printed_match() ? "pass" : "mismatch-reported";
}

RlsReport match_printed_rls(const PDESystem& sys, int m, int n, const Golden& golden, int points,
                            std::uint64_t seed) {
  if (sys.provenance.form != EquationForm::residues)
    throw StructuralError("match_printed_rls needs a system in residue form");
  const auto& derived = sys.provenance.display;
  RlsReport report;
  report.m = m;
  report.n = n;
  std::vector<bool> used(derived.size(), false);
  std::mt19937_64 rng(seed);

  std::vector<JetQuotient> pole_guards;
  const auto& poles = sys.provenance.poles;
  for (std::size_t i = 0; i < poles.size(); ++i)
    for (std::size_t k = i + 1; k < poles.size(); ++k) pole_guards.push_back(JetQuotient(1) / (poles[i] - poles[k]));

  for (const auto& line : golden.lines) {
    for (const auto& [k, printed] : instantiate(line, m, n)) {
      LineMatch lm;
      lm.label = line.label;
      lm.kind = line.kind;
      lm.index_value = k;
      lm.evolves = evolution_jet(line, m, n, k);
      std::size_t idx = derived.size();
      for (std::size_t d = 0; d < derived.size(); ++d) {
        if (derived[d].variables().count(lm.evolves)) {
          idx = d;
          break;
        }
      }
      if (idx == derived.size()) {
        report.lines.push_back(std::move(lm));
        continue;
      }
      used[idx] = true;
      lm.matched = sys.provenance.labels[idx];
      const JetQuotient& R = derived[idx];
      const JetQuotient cR = R.partial(lm.evolves).reduce();
      const JetQuotient cE = printed.partial(lm.evolves).reduce();
      if (cE.is_zero()) throw StructuralError("golden line '" + line.label + "' does not contain its evolution jet");
      lm.residual = (printed / cE - R / cR).reduce();
      lm.symbolic_match = lm.residual.is_zero();
      lm.residual_terms = term_strings(lm.residual.num());

      std::set<JetVar> vars = R.variables();
      for (const auto& v : printed.variables()) vars.insert(v);
      std::vector<JetQuotient> guards = pole_guards;
      guards.push_back(R);
      guards.push_back(printed);
      guards.push_back(JetQuotient(1) / cR);
      guards.push_back(JetQuotient(1) / cE);
      for (int p = 0; p < points; ++p) {
        const JetPoint pt = sample_point(rng, vars, guards);
        ++lm.numeric_points;
        if (printed.eval(pt) / cE.eval(pt) == R.eval(pt) / cR.eval(pt)) ++lm.numeric_agree;
      }
      report.lines.push_back(std::move(lm));
    }
  }
  for (std::size_t d = 0; d < derived.size(); ++d)
    if (!used[d]) report.unmatched_derived.push_back(sys.provenance.labels[d]);
  return report;
}

}  // namespace contactlax
