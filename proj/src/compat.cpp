#include "contactlax/compat.hpp"

#include <algorithm>

#include "contactlax/errors.hpp"

namespace contactlax {

namespace {

const FieldId kPsi("psi");

JetVar psi_jet(Dir d, const FieldId& psi = kPsi) { return JetVar(psi, unit(d)); }

/// Sum_k c_k psi_x^k psi_z^(deg - k).
JetQuotient homogenize(const PPoly& q, int deg, const FieldId& psi) {
  const JetQuotient px = JetQuotient::jet(psi, unit(Dir::x));
  const JetQuotient pz = JetQuotient::jet(psi, unit(Dir::z));
  JetQuotient out;
  for (int k = 0; k <= q.degree(); ++k) {
    const JetQuotient& c = q.coeffs()[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    out += c * px.pow(k) * pz.pow(deg - k);
  }
  return out;
}

bool is_psi(const JetVar& v) { return v.field.role() == Role::wave_function; }

/// Splits a polynomial homogeneous in (psi_x, psi_z) into its p-coefficients
/// (psi_z = 1 in 2+1). Returns the homogeneous degree through h.
PPoly dehomogenize_poly(const DiffPoly& poly, Dims dims, int& h, const FieldId& psi) {
  const JetVar px = psi_jet(Dir::x, psi);
  const JetVar pz = psi_jet(Dir::z, psi);
  h = -1;
  std::vector<std::vector<DiffPoly::Term>> by_power;
  for (const auto& t : poly.terms()) {
    int dx = 0;
    int dz = 0;
    Monomial rest;
    for (const auto& f : t.mono.factors()) {
      if (f.var == px) {
        dx = static_cast<int>(f.power);
      } else if (f.var == pz && dims == Dims::d3plus1) {
        dz = static_cast<int>(f.power);
      } else if (is_psi(f.var)) {
        throw DerivationError("jet " + f.var.str() + " of psi survives in the compatibility condition");
      } else {
        rest = rest * Monomial(f.var, f.power);
      }
    }
    if (dims == Dims::d3plus1) {
      if (h < 0) h = dx + dz;
      if (dx + dz != h) throw DerivationError("compatibility condition is not homogeneous in psi_x, psi_z");
    } else {
      h = 0;
    }
    if (by_power.size() <= static_cast<std::size_t>(dx)) by_power.resize(static_cast<std::size_t>(dx) + 1);
    by_power[static_cast<std::size_t>(dx)].push_back({rest, t.coeff});
  }
  if (h < 0) h = 0;
  std::vector<JetQuotient> coeffs;
  for (auto& terms : by_power) coeffs.emplace_back(DiffPoly::from_terms(std::move(terms)));
  return PPoly(std::move(coeffs));
}

PRational bracket(const LaxPair& lax) {
  const PRational& F = lax.F;
  const PRational& G = lax.G;
  const PRational Fp = F.pdiff();
  const PRational Gp = G.pdiff();
  PRational cc = F.total_derivative(Dir::t) - G.total_derivative(Dir::y) + Fp * G.total_derivative(Dir::x) -
                 Gp * F.total_derivative(Dir::x);
  if (lax.dims == Dims::d3plus1) {
    const PRational P(PPoly::p_power(1));
    cc += (F - P * Fp) * G.total_derivative(Dir::z) - (G - P * Gp) * F.total_derivative(Dir::z);
  }
  return cc;
}

PRational lifted(const LaxPair& lax) {
  const JetQuotient Y = lift_to_psi(lax.F, lax.dims);
  const JetQuotient T = lift_to_psi(lax.G, lax.dims);
  SubstitutionRules rules(true);
  rules.set(psi_jet(Dir::y), Y);
  rules.set(psi_jet(Dir::t), T);
  const JetQuotient cc = rules.apply(Y.total_derivative(Dir::t)) - rules.apply(T.total_derivative(Dir::y));
  const bool stray = cc.any_variable([&](const JetVar& v) {
    if (!is_psi(v)) return false;
    if (v == psi_jet(Dir::x)) return false;
    return !(lax.dims == Dims::d3plus1 && v == psi_jet(Dir::z));
  });
  if (stray) throw DerivationError("psi jets beyond psi_x, psi_z survive the rewriting: " + cc.str());
  return dehomogenize(cc, lax.dims);
}

constexpr int kNoDegree = -1000000;

int rational_degree(const PRational& r) {
  if (r.is_zero()) return kNoDegree;
  int d = r.num().degree();
  for (const auto& f : r.den_factors()) d -= f.poly.degree() * static_cast<int>(f.exp);
  return d;
}

int product_degree(const PRational& a, const PRational& b) {
  const int da = rational_degree(a);
  const int db = rational_degree(b);
  return (da == kNoDegree || db == kNoDegree) ? kNoDegree : da + db;
}

/// Largest p-degree among the individual bracket terms, before cancellation.
int nominal_degree(const LaxPair& lax) {
  const PRational& F = lax.F;
  const PRational& G = lax.G;
  const PRational Fp = F.pdiff();
  const PRational Gp = G.pdiff();
  const PRational Fx = F.total_derivative(Dir::x);
  const PRational Gx = G.total_derivative(Dir::x);
  int d = std::max({rational_degree(F.total_derivative(Dir::t)), rational_degree(G.total_derivative(Dir::y)),
                    product_degree(Fp, Gx), product_degree(Gp, Fx)});
  if (lax.dims == Dims::d3plus1) {
    const PRational P(PPoly::p_power(1));
    d = std::max({d, product_degree(F - P * Fp, G.total_derivative(Dir::z)),
                  product_degree(G - P * Gp, F.total_derivative(Dir::z))});
  }
  return d;
}

std::vector<JetQuotient> collect_poles(const LaxPair& lax) {
  std::vector<JetQuotient> out;
  for (const PRational* r : {&lax.F, &lax.G})
    for (const auto& f : r->den_factors())
      if (f.poly.degree() == 1) out.push_back(-f.poly.coeff(0));
  return out;
}

void push_equation(PDESystem& sys, const JetQuotient& value, std::string label) {
  const JetQuotient r = value.reduce();
  if (r.is_zero()) {
    ++sys.provenance.dropped_zero;
    return;
  }
  sys.equations.emplace_back(r.num());
  sys.provenance.display.push_back(r);
  sys.provenance.labels.push_back(std::move(label));
}

Rational determinant(std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && a[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

bool is_unknown(const std::vector<FieldId>& unknowns, const FieldId& f) {
  return std::find(unknowns.begin(), unknowns.end(), f) != unknowns.end();
}

/// (dT + s dY)^k expanded: entries (nY, nT, coefficient).
struct Deriv {
  int ny;
  int nt;
  Rational c;
};

std::vector<Deriv> expand_ck(int ny, int nt) {
  // d_y^ny d_t^nt = (d_T + d_Y)^ny (d_T - d_Y)^nt
  std::map<std::pair<int, int>, Rational> acc;
  acc[{0, 0}] = 1;
  auto mul = [&](int sign) {
    std::map<std::pair<int, int>, Rational> next;
    for (const auto& [k, c] : acc) {
      next[{k.first, k.second + 1}] += c;
      next[{k.first + 1, k.second}] += c * sign;
    }
    acc = std::move(next);
  };
  for (int i = 0; i < ny; ++i) mul(+1);
  for (int i = 0; i < nt; ++i) mul(-1);
  std::vector<Deriv> out;
  for (const auto& [k, c] : acc)
    if (c != 0) out.push_back({k.first, k.second, c});
  return out;
}

/// d_T = (d_y + d_t)/2, d_Y = (d_y - d_t)/2
std::vector<Deriv> expand_ck_inverse(int nY, int nT) {
  std::map<std::pair<int, int>, Rational> acc;
  acc[{0, 0}] = 1;
  auto mul = [&](int sign) {
    std::map<std::pair<int, int>, Rational> next;
    for (const auto& [k, c] : acc) {
      next[{k.first + 1, k.second}] += c / 2;
      next[{k.first, k.second + 1}] += c * sign / 2;
    }
    acc = std::move(next);
  };
  for (int i = 0; i < nT; ++i) mul(+1);
  for (int i = 0; i < nY; ++i) mul(-1);
  std::vector<Deriv> out;
  for (const auto& [k, c] : acc)
    if (c != 0) out.push_back({k.first, k.second, c});
  return out;
}

using JetMap = std::map<JetVar, DiffPoly>;

JetMap ck_jet_map(const std::set<JetVar>& vars, bool inverse) {
  JetMap map;
  for (const auto& v : vars) {
    const Role role = v.field.role();
    if (role == Role::independent) {
      const std::string_view name = v.field.name();
      const bool lower = name[0] >= 'a';
      if (lower == inverse) continue;  // coordinate of the other frame
      const Dir d = v.field.coordinate_dir();
      if (!inverse) {
        // x -> X, z -> Z, y -> (Y + T)/2, t -> (T - Y)/2
        if (d == Dir::x) map[v] = DiffPoly(JetVar(FieldId("X")));
        if (d == Dir::z) map[v] = DiffPoly(JetVar(FieldId("Z")));
        if (d == Dir::y) map[v] = (DiffPoly(JetVar(FieldId("Y"))) + DiffPoly(JetVar(FieldId("T")))).scaled(Rational(1, 2));
        if (d == Dir::t) map[v] = (DiffPoly(JetVar(FieldId("T"))) - DiffPoly(JetVar(FieldId("Y")))).scaled(Rational(1, 2));
      } else {
        if (d == Dir::x) map[v] = DiffPoly(JetVar(FieldId("x")));
        if (d == Dir::z) map[v] = DiffPoly(JetVar(FieldId("z")));
        if (d == Dir::y) map[v] = DiffPoly(JetVar(FieldId("y"))) - DiffPoly(JetVar(FieldId("t")));
        if (d == Dir::t) map[v] = DiffPoly(JetVar(FieldId("y"))) + DiffPoly(JetVar(FieldId("t")));
      }
      continue;
    }
    const int ny = v.d[1];
    const int nt = v.d[3];
    if (ny == 0 && nt == 0) continue;
    DiffPoly acc;
    for (const auto& e : inverse ? expand_ck_inverse(ny, nt) : expand_ck(ny, nt)) {
      MultiIndex d = v.d;
      d[1] = static_cast<std::uint8_t>(e.ny);
      d[3] = static_cast<std::uint8_t>(e.nt);
      acc += DiffPoly(JetVar(v.field, d)).scaled(e.c);
    }
    map[v] = acc;
  }
  return map;
}

PDESystem map_system(const PDESystem& sys, bool inverse) {
  PDESystem out = sys;
  std::set<JetVar> vars;
  for (const auto& e : sys.equations) {
    auto v = e.variables();
    vars.insert(v.begin(), v.end());
  }
  for (const auto& e : sys.provenance.display) {
    auto v = e.variables();
    vars.insert(v.begin(), v.end());
  }
  const JetMap map = ck_jet_map(vars, inverse);
  for (auto& e : out.equations) e = e.compose(map);
  for (auto& e : out.provenance.display) e = e.compose(map);
  for (auto& e : out.provenance.poles) e = e.compose(map);
  return out;
}

}  // namespace

std::string frame_name(Frame f) { return f == Frame::xyzt ? "xyzt" : "XYZT"; }
std::string form_name(EquationForm f) { return f == EquationForm::coefficients ? "coefficients" : "residues"; }

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::determined:
      return "determined";
    case Verdict::underdetermined:
      return "underdetermined";
    case Verdict::overdetermined:
      return "overdetermined";
  }
  return "determined";
}

PRational dehomogenize(const JetQuotient& q, Dims dims, const FieldId& psi) {
  int h_num = 0;
  const PPoly num = dehomogenize_poly(q.num(), dims, h_num, psi);
  if (num.is_zero()) return PRational();
  int h_den = 0;
  std::vector<PRational::Factor> factors;
  Monomial plain;
  for (const auto& f : q.den_monomial().factors()) {
    if (f.var == psi_jet(Dir::z, psi) && dims == Dims::d3plus1) {
      h_den += static_cast<int>(f.power);
    } else if (f.var == psi_jet(Dir::x, psi)) {
      h_den += static_cast<int>(f.power);
      factors.push_back({PPoly::p_power(1), f.power});
    } else if (is_psi(f.var)) {
      throw DerivationError("jet " + f.var.str() + " of psi survives in a denominator");
    } else {
      plain = plain * Monomial(f.var, f.power);
    }
  }
  for (const auto& f : q.den_factors()) {
    int h = 0;
    factors.push_back({dehomogenize_poly(f.poly, dims, h, psi), f.exp});
    h_den += h * static_cast<int>(f.exp);
  }
  if (dims == Dims::d3plus1 && h_num - h_den != 1)
    throw DerivationError("compatibility condition has psi_z-degree " + std::to_string(h_num - h_den) +
                          " instead of 1");
  PPoly scaled = num;
  if (!plain.empty()) scaled = num.scaled(JetQuotient(DiffPoly(plain, Rational(1))).inverse());
  return PRational::from_factors(scaled, factors);
}

JetQuotient lift_to_psi(const PRational& F, Dims dims, const FieldId& psi) {
  if (dims == Dims::d2plus1) {
    const JetQuotient px = JetQuotient::jet(psi, unit(Dir::x));
    JetQuotient out = F.num().at(px);
    for (const auto& f : F.den_factors()) out = out / f.poly.at(px).pow(static_cast<int>(f.exp));
    return out;
  }
  const int dn = F.num().degree();
  int excess = 1 - std::max(dn, 0);
  JetQuotient out = homogenize(F.num(), std::max(dn, 0), psi);
  for (const auto& f : F.den_factors()) {
    const int df = f.poly.degree();
    excess += df * static_cast<int>(f.exp);
    out = out / homogenize(f.poly, df, psi).pow(static_cast<int>(f.exp));
  }
  return out * JetQuotient::jet(psi, unit(Dir::z)).pow(excess);
}

PRational compatibility_condition(const LaxPair& lax, CCPath path) {
  return path == CCPath::lifted ? lifted(lax) : bracket(lax);
}

std::vector<std::string> PDESystem::independents() const {
  if (frame == Frame::xyzt) return {"x", "y", "z", "t"};
  return {"X", "Y", "Z", "T"};
}

void PDESystem::validate() const {
  const auto ind = independents();
  auto check = [&](const JetQuotient& e) {
    for (const auto& v : e.variables()) {
      if (v.field.role() == Role::independent) {
        if (std::find(ind.begin(), ind.end(), v.field.str()) == ind.end())
          throw StructuralError("coordinate " + v.field.str() + " does not belong to frame " + frame_name(frame));
        continue;
      }
      if (!is_unknown(unknowns, v.field))
        throw StructuralError("equation uses " + v.str() + ", which is not an unknown of the system");
    }
  };
  for (const auto& e : equations) check(e);
  for (const auto& e : provenance.display) check(e);
}

PDESystem extract_system(const PRational& cc, const LaxPair& lax, EquationForm form) {
  PDESystem sys;
  sys.unknowns = lax.fields;
  sys.provenance.family = family_name(lax.family);
  sys.provenance.m = lax.m;
  sys.provenance.n = lax.n;
  sys.provenance.dims = lax.dims;
  sys.provenance.form = form;
  sys.provenance.poles = collect_poles(lax);
  if (form == EquationForm::coefficients) {
    const auto [num, den] = cc.collect();
    int top = num.degree();
    if (!cc.is_zero()) {
      const int nominal = nominal_degree(lax);
      if (nominal != kNoDegree) top = std::max(top, nominal + den.degree());
    }
    for (int k = 0; k <= top; ++k) push_equation(sys, num.coeff(k), "p^" + std::to_string(k));
    return sys;
  }
  const auto pf = cc.partial_fractions();
  if (!pf) throw DerivationError("residue form needs poles of order at most 2 that are linear in p");
  for (int k = pf->polypart.degree(); k >= 0; --k)
    push_equation(sys, pf->polypart.coeff(k), "p^" + std::to_string(k) + " (polynomial part)");
  for (const auto& pole : pf->poles) {
    for (std::size_t j = pole.residues.size(); j-- > 0;)
      push_equation(sys, pole.residues[j], "res[" + pole.pole.str() + "]^" + std::to_string(j + 1));
  }
  return sys;
}

PDESystem derive(const LaxPair& lax, EquationForm form, CCPath path) {
  PDESystem sys = extract_system(compatibility_condition(lax, path), lax, form);
  sys.provenance.path = path;
  return sys;
}

DeterminednessReport determinedness_report(const PDESystem& sys) {
  DeterminednessReport r;
  r.equations = static_cast<int>(sys.equations.size());
  r.unknowns = static_cast<int>(sys.unknowns.size());
  r.dropped_zero = sys.provenance.dropped_zero;
  if (r.equations < r.unknowns) r.verdict = Verdict::underdetermined;
  if (r.equations > r.unknowns) r.verdict = Verdict::overdetermined;
  return r;
}

JetPoint sample_point(std::mt19937_64& rng, const std::set<JetVar>& vars, const std::vector<JetQuotient>& keep_away) {
  std::set<JetVar> all = vars;
  for (const auto& q : keep_away) {
    auto v = q.variables();
    all.insert(v.begin(), v.end());
  }
  std::uniform_int_distribution<int> num(-100, 100);
  std::uniform_int_distribution<int> den(1, 100);
  const Rational tenth(1, 10);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    JetPoint pt;
    for (const auto& v : all) {
      Rational r(num(rng), den(rng));
      r.canonicalize();
      pt[v] = r;
    }
    bool ok = true;
    for (const auto& q : keep_away) {
      for (const auto& f : q.den_monomial().factors()) ok = ok && abs(pt[f.var]) >= tenth;
      for (const auto& f : q.den_factors()) ok = ok && abs(f.poly.eval(pt)) >= tenth;
      if (!ok) break;
    }
    if (ok) return pt;
  }
  throw PoleError("could not sample a point away from the poles");
}

std::vector<std::vector<JetQuotient>> t_jet_matrix(const PDESystem& sys) {
  std::vector<std::vector<JetQuotient>> m;
  for (const auto& e : sys.equations) {
    std::vector<JetQuotient> row;
    for (const auto& u : sys.unknowns) row.push_back(e.partial(JetVar(u, unit(Dir::t))));
    m.push_back(std::move(row));
  }
  return m;
}

JetQuotient ck_map(const JetQuotient& e) {
  return e.compose(ck_jet_map(e.variables(), false));
}

PDESystem ck_transform(const PDESystem& sys, std::uint64_t seed, CKWitness* witness) {
  if (sys.frame != Frame::xyzt) throw StructuralError("ck_transform expects a system in (x, y, z, t)");
  PDESystem out = map_system(sys, false);
  out.frame = Frame::XYZT;
  out.provenance.transforms.push_back("ck");
  if (out.equations.size() != out.unknowns.size())
    throw TransformDegenerateError("T-jet matrix is not square: " + std::to_string(out.equations.size()) +
                                   " equations, " + std::to_string(out.unknowns.size()) + " unknowns");
  const auto m = t_jet_matrix(out);
  std::set<JetVar> vars;
  for (const auto& row : m)
    for (const auto& c : row) {
      auto v = c.variables();
      vars.insert(v.begin(), v.end());
    }
  std::vector<JetQuotient> guards = out.provenance.display;
  const auto& poles = out.provenance.poles;
  for (std::size_t i = 0; i < poles.size(); ++i)
    for (std::size_t k = i + 1; k < poles.size(); ++k)
      guards.push_back(JetQuotient(1) / (poles[i] - poles[k]));
  std::mt19937_64 rng(seed);
  const JetPoint pt = sample_point(rng, vars, guards);
  std::vector<std::vector<Rational>> a;
  for (const auto& row : m) {
    std::vector<Rational> r;
    for (const auto& c : row) r.push_back(c.eval(pt));
    a.push_back(std::move(r));
  }
  const Rational det = determinant(a);
  if (det == 0) throw TransformDegenerateError("T-jet matrix is singular at the sampled point");
  if (witness) {
    witness->point = pt;
    witness->determinant = det;
  }
  return out;
}

PDESystem ck_inverse(const PDESystem& sys) {
  if (sys.frame != Frame::XYZT) throw StructuralError("ck_inverse expects a system in (X, Y, Z, T)");
  PDESystem out = map_system(sys, true);
  out.frame = Frame::xyzt;
  out.provenance.transforms.push_back("ck^-1");
  return out;
}

JetQuotient zero_z_jets(const JetQuotient& e) {
  std::map<JetVar, DiffPoly> map;
  for (const auto& v : e.variables())
    if (v.d[2] > 0 && v.field.role() != Role::independent) map[v] = DiffPoly();
  if (map.empty()) return e;
  return e.compose(map);
}

LaxPair reduce_lax(const LaxPair& lax) {
  LaxPair out = lax;
  out.dims = Dims::d2plus1;
  out.F = lax.F.map_coefficients(zero_z_jets);
  out.G = lax.G.map_coefficients(zero_z_jets);
  return out;
}

PDESystem reduce_system(const PDESystem& sys) {
  PDESystem out;
  out.unknowns = sys.unknowns;
  out.frame = sys.frame;
  out.provenance = sys.provenance;
  out.provenance.dims = Dims::d2plus1;
  out.provenance.labels.clear();
  out.provenance.display.clear();
  for (std::size_t k = 0; k < sys.equations.size(); ++k) {
    const JetQuotient e = zero_z_jets(sys.equations[k]);
    if (e.is_zero()) {
      ++out.provenance.dropped_zero;
      continue;
    }
    out.equations.push_back(e);
    out.provenance.display.push_back(zero_z_jets(sys.provenance.display[k]).reduce());
    out.provenance.labels.push_back(sys.provenance.labels[k]);
  }
  return out;
}

Reduction reduce_2plus1(const LaxPair& lax, EquationForm form) {
  Reduction r;
  r.lax = reduce_lax(lax);
  r.system = derive(r.lax, form);
  return r;
}

bool reduction_commutes(const LaxPair& lax, EquationForm form, std::vector<std::string>* diffs) {
  const PDESystem a = reduce_system(derive(lax, form));
  const PDESystem b = derive(reduce_lax(lax), form);
  bool ok = a.equations.size() == b.equations.size();
  if (!ok && diffs) diffs->push_back("equation counts differ");
  for (std::size_t k = 0; ok && k < a.equations.size(); ++k)
    if (!a.equations[k].same_form(b.equations[k])) {
      ok = false;
      if (diffs) diffs->push_back(k < a.provenance.labels.size() ? a.provenance.labels[k] : std::to_string(k));
    }
  return ok;
}

}  // namespace contactlax
