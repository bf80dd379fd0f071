#include "contactlax/gauge.hpp"

#include <algorithm>

#include "contactlax/errors.hpp"

namespace contactlax {

namespace {

const FieldId kPsi("psi");
const FieldId kPsiTilde("psi~");

JetQuotient qjet(const FieldId& q, Dir d) { return JetQuotient::jet(q, unit(d)); }

FieldId tilde(const FieldId& f) { return FieldId(f.str() + "~"); }

/// First-order rules for the specialised q, plus a0, b0 forced by q_y = a0 q_z.
SubstitutionRules specialised_rules(const FieldId& q, const std::map<JetVar, JetQuotient>& values) {
  SubstitutionRules rules(false);
  auto value = [&](Dir d) {
    auto it = values.find(JetVar(q, unit(d)));
    if (it == values.end()) throw CoverageError("q specialisation misses " + JetVar(q, unit(d)).str());
    return it->second;
  };
  for (const auto& [v, val] : values) rules.set(v, val);
  const JetQuotient qz = value(Dir::z);
  if (qz.is_zero()) throw ParameterError("q_z must not vanish");
  rules.set(FieldId("a0"), value(Dir::y) / qz);
  rules.set(FieldId("b0"), value(Dir::t) / qz);
  return rules;
}

/// psi_dir = psi_z H(p) rewritten in (x~, y~, z~ = q, t~) and solved for psi~_dir.
PRational transform_one(const PRational& H, Dir dir, const ChangeOfVariables& cov, bool constrain) {
  const JetQuotient lifted = lift_to_psi(H, Dims::d3plus1, kPsi);
  SubstitutionRules chain(false);
  const JetQuotient tx = JetQuotient::jet(kPsiTilde, unit(Dir::x));
  const JetQuotient tz = JetQuotient::jet(kPsiTilde, unit(Dir::z));
  chain.set(JetVar(kPsi, unit(Dir::x)), tx + tz * qjet(cov.q, Dir::x));
  chain.set(JetVar(kPsi, unit(Dir::z)), tz * qjet(cov.q, Dir::z));
  // psi_dir = psi~_dir + psi~_z q_dir
  JetQuotient rhs = chain.apply(lifted) - tz * qjet(cov.q, dir);
  if (cov.symbolic_q()) {
    if (constrain) rhs = q_constraints(cov.q, cov.a0, cov.b0).apply(rhs);
  } else {
    rhs = specialised_rules(cov.q, cov.q_values).apply(rhs);
  }
  return dehomogenize(rhs, Dims::d3plus1, kPsiTilde);
}

bool mentions_q_yt(const PRational& r, const FieldId& q) {
  for (const auto& v : r.variables())
    if (v.field == q && (v.d[1] > 0 || v.d[3] > 0)) return true;
  return false;
}

LaxPair transform_raw(const LaxPair& lax, const ChangeOfVariables& cov) {
  if (lax.dims != Dims::d3plus1) throw StructuralError("change of variables needs a (3+1)-dimensional pair");
  const bool constrain = std::find(lax.fields.begin(), lax.fields.end(), FieldId("a0")) != lax.fields.end() ||
                         !cov.a0.same_form(JetQuotient::jet("a0"));
  LaxPair raw;
  raw.family = Family::custom;
  raw.m = lax.m;
  raw.n = lax.n;
  raw.F = transform_one(lax.F, Dir::y, cov, constrain);
  raw.G = transform_one(lax.G, Dir::t, cov, constrain);
  for (const auto& f : lax.fields)
    if (f != FieldId("a0") && f != FieldId("b0")) raw.fields.push_back(f);
  return raw;
}

/// Pole and residue of r for the factor that came from (p - <pole_field>).
struct PoleView {
  JetQuotient pole;
  JetQuotient residue;
  bool simple = true;
};

std::optional<PoleView> pole_for(const PartialFractions& pf, const FieldId& field) {
  for (const auto& t : pf.poles) {
    if (!t.pole.any_variable([&](const JetVar& v) { return v.field == field; })) continue;
    PoleView pv;
    pv.pole = t.pole;
    pv.residue = t.residues.back();
    pv.simple = t.order == 1 || std::all_of(t.residues.begin() + 1, t.residues.end(),
                                           [](const JetQuotient& c) { return c.is_zero(); });
    if (t.order > 1) pv.residue = t.residues.front();
    return pv;
  }
  return std::nullopt;
}

bool polypart_zero(const PartialFractions& pf) {
  for (const auto& c : pf.polypart.coeffs())
    if (!c.reduce().is_zero()) return false;
  return true;
}

struct Side {
  const PRational* r;
  const char* res;
  const char* pole;
  int count;
};

}  // namespace

JetQuotient check_ab(const JetQuotient& a0, const JetQuotient& b0, const SubstitutionRules* constraints) {
  JetQuotient r = a0.total_derivative(Dir::t) - b0.total_derivative(Dir::y) - b0 * a0.total_derivative(Dir::z) +
                  a0 * b0.total_derivative(Dir::z);
  if (constraints) r = constraints->apply(r);
  return r.reduce();
}

SubstitutionRules q_constraints(const FieldId& q, const JetQuotient& a0, const JetQuotient& b0) {
  SubstitutionRules rules(true);
  rules.set(JetVar(q, unit(Dir::y)), a0 * qjet(q, Dir::z));
  rules.set(JetVar(q, unit(Dir::t)), b0 * qjet(q, Dir::z));
  return rules;
}

ChangeOfVariables printed_map(int m, int n) {
  ChangeOfVariables cov;
  cov.name = "printed";
  const JetQuotient qx = qjet(cov.q, Dir::x);
  const JetQuotient qz = qjet(cov.q, Dir::z);
  for (const auto& [res, pole, count] : {std::tuple{"a", "v", m}, std::tuple{"b", "w", n}}) {
    for (int i = 1; i <= count; ++i) {
      cov.field_map[tilde(indexed(res, i))] = JetQuotient::jet(indexed(res, i)) * qz.pow(2);
      cov.field_map[tilde(indexed(pole, i))] = JetQuotient::jet(indexed(pole, i)) - qx / qz;
    }
  }
  return cov;
}

ChangeOfVariables chain_rule_map(int m, int n) {
  ChangeOfVariables cov;
  cov.name = "chain-rule";
  const JetQuotient qx = qjet(cov.q, Dir::x);
  const JetQuotient qz = qjet(cov.q, Dir::z);
  for (const auto& [res, pole, count] : {std::tuple{"a", "v", m}, std::tuple{"b", "w", n}}) {
    for (int i = 1; i <= count; ++i) {
      cov.field_map[tilde(indexed(res, i))] = JetQuotient::jet(indexed(res, i)) * qz.pow(2);
      cov.field_map[tilde(indexed(pole, i))] = JetQuotient::jet(indexed(pole, i)) * qz - qx;
    }
  }
  return cov;
}

std::map<JetVar, JetQuotient> q_equals_z() {
  const FieldId q("q");
  return {{JetVar(q, unit(Dir::x)), JetQuotient(0)},
          {JetVar(q, unit(Dir::y)), JetQuotient(0)},
          {JetVar(q, unit(Dir::z)), JetQuotient(1)},
          {JetVar(q, unit(Dir::t)), JetQuotient(0)}};
}

std::map<JetVar, JetQuotient> q_unit_z(const FieldId& f) {
  auto v = q_equals_z();
  v[JetVar(FieldId("q"), unit(Dir::x))] = JetQuotient::jet(f, unit(Dir::x));
  return v;
}

TransformResult apply_change_of_variables(const LaxPair& lax, const ChangeOfVariables& cov) {
  TransformResult out;
  out.raw = transform_raw(lax, cov);
  out.q_yt_free = !mentions_q_yt(out.raw.F, cov.q) && !mentions_q_yt(out.raw.G, cov.q);

  std::optional<SubstitutionRules> spec;
  if (!cov.symbolic_q()) spec = specialised_rules(cov.q, cov.q_values);
  auto map_value = [&](const FieldId& f) {
    auto it = cov.field_map.find(f);
    if (it == cov.field_map.end()) throw CoverageError("field map has no entry for " + f.str());
    return spec ? spec->apply(it->second) : it->second;
  };

  const auto pf_f = out.raw.F.partial_fractions();
  const auto pf_g = out.raw.G.partial_fractions();
  out.polynomial_part_zero = pf_f && pf_g && polypart_zero(*pf_f) && polypart_zero(*pf_g);
  bool poles_ok = pf_f && pf_g && static_cast<int>(pf_f->poles.size()) == lax.m &&
                  static_cast<int>(pf_g->poles.size()) == lax.n;
  const std::vector<std::pair<const std::optional<PartialFractions>*, Side>> sides = {
      {&pf_f, Side{&out.raw.F, "a", "v", lax.m}}, {&pf_g, Side{&out.raw.G, "b", "w", lax.n}}};
  for (const auto& [pf, side] : sides) {
    for (int i = 1; i <= side.count; ++i) {
      const FieldId res = indexed(side.res, i);
      const FieldId pole = indexed(side.pole, i);
      const JetQuotient want_pole = map_value(tilde(pole));
      const JetQuotient want_res = map_value(tilde(res));
      std::optional<PoleView> pv;
      if (*pf) pv = pole_for(**pf, pole);
      if (!pv) {
        poles_ok = false;
        out.residuals.push_back({tilde(pole), want_pole});
        continue;
      }
      poles_ok = poles_ok && pv->simple;
      const JetQuotient dp = (want_pole - pv->pole).reduce();
      const JetQuotient dr = (want_res - pv->residue).reduce();
      poles_ok = poles_ok && dp.is_zero() && dr.is_zero();
      out.residuals.push_back({tilde(pole), dp});
      out.residuals.push_back({tilde(res), dr});
    }
  }
  out.pole_structure_ok = poles_ok;
  if (out.polynomial_part_zero && out.pole_structure_ok && out.q_yt_free) out.lax = make_rat(lax.m, lax.n);
  return out;
}

ChangeOfVariables solve_field_map(const LaxPair& lax, const std::map<JetVar, JetQuotient>& q_values) {
  ChangeOfVariables cov;
  cov.q_values = q_values;
  return solve_field_map(lax, cov);
}

ChangeOfVariables solve_field_map(const LaxPair& lax, const ChangeOfVariables& base) {
  ChangeOfVariables cov = base;
  cov.name = "solved";
  cov.field_map.clear();
  const LaxPair raw = transform_raw(lax, cov);
  const PRational* rs[2] = {&raw.F, &raw.G};
  const char* res_stem[2] = {"a", "b"};
  const char* pole_stem[2] = {"v", "w"};
  const int counts[2] = {lax.m, lax.n};
  for (int s = 0; s < 2; ++s) {
    const auto pf = rs[s]->partial_fractions();
    if (!pf) throw TheoremVerificationError("transformed pair has poles of unsupported order");
    if (!polypart_zero(*pf)) throw TheoremVerificationError("transformed pair keeps a polynomial part");
    if (static_cast<int>(pf->poles.size()) != counts[s])
      throw TheoremVerificationError("transformed pair has the wrong number of poles");
    for (int i = 1; i <= counts[s]; ++i) {
      const auto pv = pole_for(*pf, indexed(pole_stem[s], i));
      if (!pv || !pv->simple) throw TheoremVerificationError("transformed pair has a non-simple pole");
      cov.field_map[tilde(indexed(pole_stem[s], i))] = pv->pole;
      cov.field_map[tilde(indexed(res_stem[s], i))] = pv->residue;
    }
  }
  return cov;
}

bool Theorem1Report::passes() const {
  bool ok = solved_is_chain_rule;
  for (const auto& r : maps) {
    if (r.map == "solved" && !r.passes()) ok = false;
    if (r.q_case != "general q" && !r.passes()) ok = false;
  }
  return ok;
}

Theorem1Report verify_theorem1(int m, int n) {
  const LaxPair lax = make_ratgp(m, n);
  Theorem1Report report;
  report.m = m;
  report.n = n;
  const std::vector<std::pair<std::string, std::map<JetVar, JetQuotient>>> cases = {
      {"general q", {}}, {"q_z = 1", q_unit_z()}, {"q = z", q_equals_z()}};
  for (const auto& [label, values] : cases) {
    ChangeOfVariables printed = printed_map(m, n);
    printed.q_values = values;
    const ChangeOfVariables solved = solve_field_map(lax, values);
    for (const ChangeOfVariables* cov : {static_cast<const ChangeOfVariables*>(&printed), &solved}) {
      const TransformResult t = apply_change_of_variables(lax, *cov);
      MapReport r;
      r.map = cov->name;
      r.q_case = label;
      r.polynomial_part_zero = t.polynomial_part_zero;
      r.pole_structure_ok = t.pole_structure_ok;
      r.q_yt_free = t.q_yt_free;
      r.residuals = t.residuals;
      for (const auto& fr : t.residuals) {
        if (!fr.residual.is_zero()) {
          r.residual = fr.residual;
          break;
        }
      }
      r.cov = *cov;
      if (label == "general q" && r.passes()) report.validating_general.push_back(r.map);
      report.maps.push_back(std::move(r));
    }
    if (label == "general q") {
      const ChangeOfVariables expect = chain_rule_map(m, n);
      bool same = solved.field_map.size() == expect.field_map.size();
      for (const auto& [f, v] : expect.field_map) {
        auto it = solved.field_map.find(f);
        same = same && it != solved.field_map.end() && it->second.equals(v);
      }
      report.solved_is_chain_rule = same;
    }
  }
  return report;
}

LaxPair eliminate_gauge(const LaxPair& lax, const FieldId& q, std::optional<JetQuotient> a0,
                        std::optional<JetQuotient> b0) {
  if (lax.family != Family::ratgp) throw StructuralError("eliminate_gauge expects a general-position pair");
  const JetQuotient qz = qjet(q, Dir::z);
  const JetQuotient A = a0 ? *a0 : qjet(q, Dir::y) / qz;
  const JetQuotient B = b0 ? *b0 : qjet(q, Dir::t) / qz;
  const JetQuotient residual = check_ab(A, B);
  if (!residual.is_zero())
    throw IncompatibleGaugeError("a0, b0 violate the compatibility of the constant terms: residual " + residual.str());
  SubstitutionRules put(false);
  put.set(FieldId("a0"), A);
  put.set(FieldId("b0"), B);
  LaxPair pinned = lax;
  pinned.F = lax.F.map_coefficients([&](const JetQuotient& c) { return put.apply(c); });
  pinned.G = lax.G.map_coefficients([&](const JetQuotient& c) { return put.apply(c); });
  ChangeOfVariables cov;
  cov.q = q;
  cov.a0 = A;
  cov.b0 = B;
  const TransformResult t = apply_change_of_variables(pinned, solve_field_map(pinned, cov));
  if (!t.lax) throw TheoremVerificationError("gauge elimination did not produce a rat-shaped pair");
  return *t.lax;
}

}  // namespace contactlax
