#include <doctest.h>

#include "contactlax/compat.hpp"
#include "contactlax/errors.hpp"
#include "contactlax/expr.hpp"

using namespace contactlax;

namespace {

JetQuotient Q(const char* s) { return parse_quotient(s); }

}  // namespace

TEST_CASE("families") {
  const LaxPair p11 = make_poly(1, 1);
  CHECK(p11.size() == 3);
  CHECK(p11.F.equals(PRational(PPoly({Q("v0"), Q("v1"), JetQuotient(1)}))));
  CHECK(p11.G.equals(PRational(PPoly({Q("w0"), Q("v1"), JetQuotient(1)}))));
  CHECK(make_poly(2, 1).G.num().coeff(1).same_form(Q("v2/2")));
  CHECK_THROWS_AS(make_poly(0, 1), ParameterError);
  CHECK_THROWS_AS(make_rat(1, 0), ParameterError);
  CHECK_THROWS_AS(make_ratgp(-1, 1), ParameterError);

  const LaxPair r11 = make_rat(1, 1);
  CHECK(r11.size() == 4);
  CHECK(r11.F.equals(PRational::simple_pole(Q("a1"), Q("v1"))));
  CHECK(r11.F.partial_fractions()->polypart.is_zero());
  const LaxPair r21 = make_rat(2, 1);
  CHECK(r21.fields == std::vector<FieldId>{"a1", "a2", "v1", "v2", "b1", "w1"});

  CHECK(make_ratgp(1, 1).size() == 6);
  CHECK(make_ratgp(2, 3).fields ==
        std::vector<FieldId>{"a0", "a1", "a2", "v1", "v2", "b0", "b1", "b2", "b3", "w1", "w2", "w3"});
  for (int m = 1; m <= 3; ++m) {
    for (int n = 1; n <= 3; ++n) {
      CHECK((make_ratgp(m, n).F - PRational(Q("a0"))).equals(make_rat(m, n).F));
    }
  }
  for (int m = 1; m <= 5; ++m) {
    for (int n = 1; n <= 5; ++n) {
      for (Family f : {Family::poly, Family::rat, Family::ratgp}) {
        const LaxPair lax = make_family(f, m, n);
        CHECK(static_cast<int>(lax.size()) == roster_size(f, m, n));
        lax.validate();
        auto [num, den] = lax.F.collect();
        CHECK(PRational::ratio(num, den).equals(lax.F));
      }
    }
  }
  CHECK_THROWS_AS(make_custom(PRational(Q("v")), PRational(Q("w")), {"v"}), StructuralError);
}

TEST_CASE("trivial compatibility conditions") {
  const LaxPair vv = make_custom(PRational(Q("v")), PRational(Q("v")), {"v"});
  for (CCPath path : {CCPath::lifted, CCPath::bracket})
    CHECK(compatibility_condition(vv, path).equals(PRational(Q("v_t - v_y"))));
  const LaxPair consts = make_custom(PRational(PPoly({JetQuotient(2), JetQuotient(3)})), PRational(JetQuotient(5)), {});
  for (CCPath path : {CCPath::lifted, CCPath::bracket}) CHECK(compatibility_condition(consts, path).is_zero());
  CHECK(extract_system(PRational(), vv).equations.empty());
}

TEST_CASE("equation counts") {
  for (int m = 1; m <= 2; ++m) {
    for (int n = 1; n <= 2; ++n) {
      auto gp = determinedness_report(derive(make_ratgp(m, n)));
      CHECK(gp.equations == 2 * m + 2 * n + 1);
      CHECK(gp.unknowns == 2 * m + 2 * n + 2);
      CHECK(gp.verdict == Verdict::underdetermined);
      auto r = determinedness_report(derive(make_rat(m, n)));
      CHECK(r.equations == 2 * (m + n));
      CHECK(r.verdict == Verdict::determined);
      auto rr = determinedness_report(derive(make_rat(m, n), EquationForm::residues));
      CHECK(rr.equations == 2 * (m + n));
      auto p = determinedness_report(derive(make_poly(m, n)));
      CHECK(p.equations == m + n + 1);
      CHECK(p.verdict == Verdict::determined);
      CHECK(p.dropped_zero >= 1);
    }
  }
}

TEST_CASE("top coefficient of the general-position condition") {
  const LaxPair lax = make_ratgp(1, 1);
  auto [num, den] = compatibility_condition(lax).collect();
  CHECK(num.degree() == 4);
  CHECK(den.degree() == 4);
  CHECK(num.leading().equals(Q("a0_t - b0_y - b0*a0_z + a0*b0_z")));
}

TEST_CASE("paths agree on families") {
  for (Family f : {Family::poly, Family::rat, Family::ratgp}) {
    const LaxPair lax = make_family(f, 1, 2);
    CHECK(compatibility_condition(lax, CCPath::lifted).equals(compatibility_condition(lax, CCPath::bracket)));
  }
}

TEST_CASE("Cauchy-Kowalevski transform") {
  PDESystem s;
  s.unknowns = {"v"};
  s.equations = {Q("v_y")};
  s.provenance.display = s.equations;
  const PDESystem t = ck_transform(s);
  CHECK(t.equations[0].same_form(Q("v_t + v_y")));  // slots read as (X, Y, Z, T)
  CHECK(ck_map(Q("v_x*v_z")).same_form(Q("v_x*v_z")));
  CHECK(ck_map(Q("v_t")).same_form(Q("v_t - v_y")));
  CHECK(ck_inverse(t).equations[0].same_form(Q("v_y")));

  CKWitness w;
  const PDESystem ck = ck_transform(derive(make_rat(1, 1), EquationForm::residues), 3, &w);
  CHECK(w.determinant != 0);
  CHECK(ck.frame == Frame::XYZT);
  PDESystem degenerate;
  degenerate.unknowns = {"v"};
  degenerate.equations = {Q("v_x")};
  degenerate.provenance.display = degenerate.equations;
  CHECK_THROWS_AS(ck_transform(degenerate), TransformDegenerateError);
}

TEST_CASE("2+1 reduction") {
  const Reduction r = reduce_2plus1(make_ratgp(1, 1));
  CHECK(r.lax.dims == Dims::d2plus1);
  const JetQuotient lift = lift_to_psi(r.lax.F, Dims::d2plus1);
  CHECK(lift.equals(Q("a0 + a1/(psi_x - v1)")));
  for (const LaxPair& lax : {make_rat(1, 1), make_ratgp(1, 1)}) {
    const PDESystem a = reduce_system(derive(lax));
    const PDESystem b = derive(reduce_lax(lax));
    REQUIRE(a.equations.size() == b.equations.size());
    for (std::size_t k = 0; k < a.equations.size(); ++k) CHECK(a.equations[k].same_form(b.equations[k]));
  }
}
