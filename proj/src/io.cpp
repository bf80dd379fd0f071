#include "contactlax/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "contactlax/errors.hpp"

namespace contactlax {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw StructuralError(std::string(what) + ": " + e.what());
  }
}

Dir dir_from_json(const Json& j) {
  auto s = j.get<std::string>();
  if (s.size() != 1) throw StructuralError("bad direction '" + s + "'");
  return dir_from_char(s[0]);
}

}  // namespace

Json to_json(const Rational& r) { return r.get_str(); }

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw StructuralError("rational must be a string or an integer");
  Rational r;
  if (r.set_str(j.get<std::string>(), 10) != 0) throw StructuralError("bad rational '" + j.get<std::string>() + "'");
  if (r.get_den() == 0) throw StructuralError("zero denominator");
  r.canonicalize();
  return r;
}

Json to_json(const Expr& e) {
  switch (e.op) {
    case Expr::Op::num: return {{"op", "num"}, {"value", to_json(e.value)}};
    case Expr::Op::jet: return {{"op", "jet"}, {"field", e.var.field.str()}, {"d", e.var.d}};
    case Expr::Op::add:
    case Expr::Op::mul: {
      Json args = Json::array();
      for (const auto& a : e.args) args.push_back(to_json(a));
      return {{"op", e.op == Expr::Op::add ? "add" : "mul"}, {"args", args}};
    }
    case Expr::Op::pow: return {{"op", "pow"}, {"base", to_json(e.args.at(0))}, {"exp", e.exp}};
    case Expr::Op::diff:
      return {{"op", "diff"}, {"dir", std::string(1, dir_char(e.dir))}, {"arg", to_json(e.args.at(0))}};
  }
  return {};
}

Expr expr_from_json(const Json& j) {
  return guarded("expression", [&]() -> Expr {
    const auto op = j.at("op").get<std::string>();
    if (op == "num") return Expr::number(rational_from_json(j.at("value")));
    if (op == "jet") {
      MultiIndex d{};
      if (j.contains("d")) {
        auto v = j.at("d").get<std::vector<int>>();
        if (v.size() != 4) throw StructuralError("jet multi-index needs 4 entries");
        for (int k = 0; k < 4; ++k) {
          if (v[k] < 0 || v[k] > kMaxJetOrder) throw StructuralError("jet order out of range");
          d[k] = static_cast<std::uint8_t>(v[k]);
        }
      }
      return Expr::jet(JetVar(FieldId(j.at("field").get<std::string>()), d));
    }
    if (op == "add" || op == "mul") {
      std::vector<Expr> args;
      for (const auto& a : j.at("args")) args.push_back(expr_from_json(a));
      if (args.empty()) throw StructuralError("empty " + op + " node");
      return op == "add" ? Expr::add(std::move(args)) : Expr::mul(std::move(args));
    }
    if (op == "pow") return Expr::power(expr_from_json(j.at("base")), j.at("exp").get<int>());
    if (op == "diff") return Expr::diff(expr_from_json(j.at("arg")), dir_from_json(j.at("dir")));
    throw StructuralError("unknown op '" + op + "'");
  });
}

Json to_json(const JetQuotient& q) { return to_json(to_expr(q)); }
JetQuotient quotient_from_json(const Json& j) { return to_quotient(expr_from_json(j)); }

namespace {

Json coeffs_json(const PPoly& p) {
  Json a = Json::array();
  for (const auto& c : p.coeffs()) a.push_back(to_json(c));
  return a;
}

PPoly coeffs_from_json(const Json& j) {
  std::vector<JetQuotient> c;
  for (const auto& e : j) c.push_back(quotient_from_json(e));
  return PPoly(std::move(c));
}

}  // namespace

Json to_json(const PRational& r) {
  Json den = Json::array();
  for (const auto& f : r.den_factors()) den.push_back({{"factor", coeffs_json(f.poly)}, {"exp", f.exp}});
  Json out{{"num", coeffs_json(r.num())}, {"den", den}};
  if (auto pf = r.partial_fractions(); pf && !r.is_polynomial()) {
    Json poles = Json::array();
    for (const auto& t : pf->poles) {
      Json res = Json::array();
      for (const auto& c : t.residues) res.push_back(to_json(c));
      poles.push_back({{"pole", to_json(t.pole)}, {"residues", res}});
    }
    out["pf"] = {{"polynomial_part", coeffs_json(pf->polypart)}, {"poles", poles}};
  }
  return out;
}

PRational prational_from_json(const Json& j) {
  return guarded("p-rational", [&] {
    std::vector<PRational::Factor> den;
    if (j.contains("den"))
      for (const auto& f : j.at("den")) {
        PPoly p = coeffs_from_json(f.at("factor"));
        if (p.degree() < 1) throw StructuralError("denominator factor must have positive degree in p");
        den.push_back({p, f.value("exp", 1u)});
      }
    return PRational::from_factors(coeffs_from_json(j.at("num")), den);
  });
}

namespace {

Json fields_json(const std::vector<FieldId>& fs) {
  Json a = Json::array();
  for (const auto& f : fs) a.push_back(f.str());
  return a;
}

std::vector<FieldId> fields_from_json(const Json& j) {
  std::vector<FieldId> out;
  for (const auto& f : j) out.emplace_back(f.get<std::string>());
  return out;
}

std::string dims_name(Dims d) { return d == Dims::d3plus1 ? "3+1" : "2+1"; }
Dims parse_dims(const std::string& s) {
  if (s == "3+1") return Dims::d3plus1;
  if (s == "2+1") return Dims::d2plus1;
  throw StructuralError("unknown dims '" + s + "'");
}

}  // namespace

Json to_json(const LaxPair& lax) {
  return {{"family", family_name(lax.family)}, {"m", lax.m},           {"n", lax.n},
          {"dims", dims_name(lax.dims)},       {"fields", fields_json(lax.fields)},
          {"F", to_json(lax.F)},               {"G", to_json(lax.G)}};
}

LaxPair laxpair_from_json(const Json& j) {
  return guarded("lax pair", [&] {
    LaxPair lax;
    lax.F = prational_from_json(j.at("F"));
    lax.G = prational_from_json(j.at("G"));
    lax.fields = fields_from_json(j.at("fields"));
    lax.family = parse_family(j.value("family", std::string("custom")));
    lax.m = j.value("m", 0);
    lax.n = j.value("n", 0);
    lax.dims = parse_dims(j.value("dims", std::string("3+1")));
    lax.validate();
    return lax;
  });
}

Json to_json(const PDESystem& sys) {
  Json eqs = Json::array(), disp = Json::array(), poles = Json::array();
  for (const auto& e : sys.equations) eqs.push_back(to_json(e));
  for (const auto& e : sys.provenance.display) disp.push_back(to_json(e));
  for (const auto& e : sys.provenance.poles) poles.push_back(to_json(e));
  const auto& p = sys.provenance;
  Json prov{{"family", p.family},
            {"m", p.m},
            {"n", p.n},
            {"dims", dims_name(p.dims)},
            {"path", p.path == CCPath::lifted ? "lifted" : "bracket"},
            {"form", form_name(p.form)},
            {"dropped_zero", p.dropped_zero},
            {"labels", p.labels},
            {"display", disp},
            {"poles", poles},
            {"transforms", p.transforms}};
  return {{"unknowns", fields_json(sys.unknowns)},
          {"independents", sys.independents()},
          {"frame", frame_name(sys.frame)},
          {"equations", eqs},
          {"provenance", prov}};
}

PDESystem system_from_json(const Json& j) {
  return guarded("system", [&] {
    PDESystem sys;
    sys.unknowns = fields_from_json(j.at("unknowns"));
    auto frame = j.value("frame", std::string("xyzt"));
    if (frame == frame_name(Frame::xyzt))
      sys.frame = Frame::xyzt;
    else if (frame == frame_name(Frame::XYZT))
      sys.frame = Frame::XYZT;
    else
      throw StructuralError("unknown frame '" + frame + "'");
    for (const auto& e : j.at("equations")) sys.equations.push_back(quotient_from_json(e));
    if (j.contains("provenance")) {
      const auto& p = j.at("provenance");
      auto& out = sys.provenance;
      out.family = p.value("family", std::string("custom"));
      out.m = p.value("m", 0);
      out.n = p.value("n", 0);
      out.dims = parse_dims(p.value("dims", std::string("3+1")));
      out.path = p.value("path", std::string("lifted")) == "bracket" ? CCPath::bracket : CCPath::lifted;
      out.form = p.value("form", std::string("coefficients")) == form_name(EquationForm::residues)
                     ? EquationForm::residues
                     : EquationForm::coefficients;
      out.dropped_zero = p.value("dropped_zero", 0);
      out.labels = p.value("labels", std::vector<std::string>{});
      if (p.contains("display"))
        for (const auto& e : p.at("display")) out.display.push_back(quotient_from_json(e));
      if (p.contains("poles"))
        for (const auto& e : p.at("poles")) out.poles.push_back(quotient_from_json(e));
      out.transforms = p.value("transforms", std::vector<std::string>{});
    }
    sys.validate();
    return sys;
  });
}

Json to_json(const DeterminednessReport& r) {
  return {{"equations", r.equations},
          {"unknowns", r.unknowns},
          {"dropped_zero", r.dropped_zero},
          {"verdict", verdict_name(r.verdict)}};
}

Json to_json(const RlsReport& r) {
  Json lines = Json::array();
  for (const auto& l : r.lines)
    lines.push_back({{"label", l.label},
                     {"kind", l.kind},
                     {"index", l.index_value},
                     {"evolves", l.evolves.str()},
                     {"matched", l.matched},
                     {"symbolic_match", l.symbolic_match},
                     {"numeric_points", l.numeric_points},
                     {"numeric_agree", l.numeric_agree},
                     {"residual", l.residual.str()},
                     {"residual_terms", l.residual_terms}});
  return {{"m", r.m},
          {"n", r.n},
          {"lines", lines},
          {"unmatched_derived", r.unmatched_derived},
          {"verdict", r.verdict()}};
}

Json to_json(const MapReport& r) {
  Json res = Json::array();
  for (const auto& f : r.residuals) res.push_back({{"field", f.field.str()}, {"residual", f.residual.str()}});
  return {{"map", r.map},
          {"q_case", r.q_case},
          {"polynomial_part_zero", r.polynomial_part_zero},
          {"pole_structure_ok", r.pole_structure_ok},
          {"q_yt_free", r.q_yt_free},
          {"residual", r.residual ? Json(r.residual->str()) : Json(nullptr)},
          {"field_residuals", res},
          {"passes", r.passes()}};
}

Json to_json(const Theorem1Report& r) {
  Json maps = Json::array();
  for (const auto& m : r.maps) maps.push_back(to_json(m));
  return {{"m", r.m},
          {"n", r.n},
          {"maps", maps},
          {"solved_is_chain_rule", r.solved_is_chain_rule},
          {"validating_general", r.validating_general},
          {"verdict", r.passes() ? "pass" : "fail"}};
}

Json to_json(const ConvergenceReport& r) {
  Json runs = Json::array();
  for (const auto& x : r.runs)
    runs.push_back({{"n", x.n},
                    {"dt", x.dt},
                    {"steps", x.steps},
                    {"error", std::isfinite(x.error) ? Json(x.error) : Json(nullptr)},
                    {"max_residual", x.max_residual}});
  return {{"kind", r.kind}, {"spatial", spatial_name(r.spatial)}, {"runs", runs}, {"orders", r.orders}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  out << text;
}

// ------------------------------------------------------------------ LaTeX

namespace {

std::string latex_name(std::string_view name) {
  bool tilde = !name.empty() && name.back() == '~';
  if (tilde) name.remove_suffix(1);
  std::size_t cut = name.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(name[cut - 1]))) --cut;
  std::string stem(name.substr(0, cut)), index(name.substr(cut));
  static const char* greek[] = {"psi", "phi", "alpha", "beta", "gamma", "lambda", "mu"};
  for (const char* g : greek)
    if (stem == g) stem = std::string("\\") + g;
  if (tilde) stem = "\\tilde{" + stem + "}";
  return index.empty() ? stem : stem + "_{" + index + "}";
}

std::string rational_latex(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  std::string s = r < 0 ? "-" : "";
  return s + "\\frac{" + mpz_class(abs(r.get_num())).get_str() + "}{" + r.get_den().get_str() + "}";
}

}  // namespace

std::string latex(const JetVar& v, Frame frame) {
  std::string base = latex_name(v.field.name());
  if (v.order() == 0) return base;
  std::string sub;
  for (Dir dir : kAllDirs) {
    char c = dir_char(dir);
    if (frame == Frame::XYZT) c = static_cast<char>(std::toupper(c));
    sub.append(v.d[static_cast<int>(dir)], c);
  }
  bool indexed = base.find('_') != std::string::npos;
  return (indexed ? "(" + base + ")" : base) + "_{" + sub + "}";
}

std::string latex(const DiffPoly& p, Frame frame) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    Rational c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    out += neg ? (first ? "-" : " - ") : (first ? "" : " + ");
    std::string mono;
    for (const auto& f : t.mono.factors()) {
      if (!mono.empty()) mono += " ";
      std::string v = latex(f.var, frame);
      if (f.power > 1) v = (v.find('_') != std::string::npos && v.front() != '(' ? "{" + v + "}" : v) + "^{" +
                           std::to_string(f.power) + "}";
      mono += v;
    }
    if (mono.empty())
      out += rational_latex(c);
    else if (c == 1)
      out += mono;
    else
      out += rational_latex(c) + " " + mono;
    first = false;
  }
  return out;
}

std::string latex(const JetQuotient& q, Frame frame) {
  if (q.is_polynomial()) return latex(q.num(), frame);
  return "\\frac{" + latex(q.num(), frame) + "}{" + latex(q.den(), frame) + "}";
}

std::string latex(const PRational& r, Frame frame) {
  auto paren = [&](const JetQuotient& c) {
    std::string s = latex(c, frame);
    return c.num().size() > 1 && c.is_polynomial() ? "\\left(" + s + "\\right)" : s;
  };
  auto poly = [&](const PPoly& p) {
    if (p.is_zero()) return std::string("0");
    std::string s;
    for (int k = p.degree(); k >= 0; --k) {
      const auto& c = p.coeffs()[k];
      if (c.is_zero()) continue;
      if (!s.empty()) s += " + ";
      std::string pk = k == 0 ? "" : k == 1 ? "p" : "p^{" + std::to_string(k) + "}";
      if (pk.empty())
        s += paren(c);
      else if (c.is_constant() && c.num().constant_value() == 1)
        s += pk;
      else
        s += paren(c) + " " + pk;
    }
    return s;
  };
  if (auto pf = r.partial_fractions(); pf && !r.is_polynomial()) {
    std::string s = pf->polypart.is_zero() ? "" : poly(pf->polypart);
    for (const auto& t : pf->poles)
      for (std::size_t k = 0; k < t.residues.size(); ++k) {
        if (t.residues[k].is_zero()) continue;
        if (!s.empty()) s += " + ";
        std::string den = "p - " + paren(t.pole);
        if (k > 0) den = "\\left(" + den + "\\right)^{" + std::to_string(k + 1) + "}";
        s += "\\frac{" + latex(t.residues[k], frame) + "}{" + den + "}";
      }
    return s.empty() ? "0" : s;
  }
  if (r.is_polynomial()) return poly(r.num());
  return "\\frac{" + poly(r.num()) + "}{" + poly(r.den()) + "}";
}

std::string latex(const PDESystem& sys) {
  std::string out = "\\begin{align*}\n";
  for (std::size_t i = 0; i < sys.equations.size(); ++i) {
    out += "  " + latex(sys.equations[i], sys.frame) + " &= 0";
    if (i < sys.provenance.labels.size()) out += " && \\text{" + sys.provenance.labels[i] + "}";
    out += i + 1 < sys.equations.size() ? " \\\\\n" : "\n";
  }
  return out + "\\end{align*}\n";
}

int RunReport::exit_code() const {
  for (const auto& [k, v] : verdicts)
    if (v == "fail") return 1;
  return 0;
}

Json RunReport::to_json() const {
  return {{"command", command},
          {"verdicts", verdicts},
          {"artifacts", artifacts},
          {"seconds", seconds},
          {"details", details}};
}

}  // namespace contactlax
