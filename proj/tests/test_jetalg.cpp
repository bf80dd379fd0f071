#include <doctest.h>

#include "contactlax/errors.hpp"
#include "contactlax/expr.hpp"
#include "random_exprs.hpp"

using namespace contactlax;
using contactlax::testing::fill_point;
using contactlax::testing::random_tree;

namespace {

DiffPoly P(const char* s) { return parse_poly(s); }
JetQuotient Q(const char* s) { return parse_quotient(s); }

}  // namespace

TEST_CASE("normalize collects, cancels and expands") {
  CHECK(P("v*w + w*v") == P("2*v*w"));
  CHECK(P("v - v").is_zero());
  CHECK(P("(v + w)^2") == P("v^2 + 2*v*w + w^2"));
  CHECK(P("v/2") == DiffPoly(JetVar(FieldId("v"))).scaled(Rational(1, 2)));
  CHECK_THROWS_AS(normalize(Expr::mul({})), StructuralError);
  CHECK_THROWS_AS(normalize(Expr::power(Expr::jet(JetVar(FieldId("v"))), -1)), StructuralError);
}

TEST_CASE("total derivative bumps jets and obeys Leibniz") {
  CHECK(P("v").total_derivative(Dir::x) == P("v_x"));
  CHECK(P("v*w").total_derivative(Dir::x) == P("v_x*w + v*w_x"));
  CHECK(P("a").total_derivative(Dir::x).total_derivative(Dir::y) == P("a_xy"));
  CHECK(P("a_yx") == P("a_xy"));
  // coordinates: D_z z = 1
  CHECK(P("z^2").total_derivative(Dir::z) == P("2*z"));
  CHECK(P("z").total_derivative(Dir::x).is_zero());
}

TEST_CASE("evaluation") {
  JetPoint pt{{JetVar(FieldId("v")), 2}, {JetVar(FieldId("w")), 3}, {JetVar(FieldId("v"), unit(Dir::x)), 5}};
  CHECK(P("v*w").eval(pt) == 6);
  CHECK(P("v^2").total_derivative(Dir::x).eval(pt) == 20);
  CHECK_THROWS_AS(P("a").eval(pt), CoverageError);
  CHECK_THROWS_AS(Q("1/(v-2)").eval(pt), PoleError);
}

TEST_CASE("quotients") {
  CHECK(Q("v*q_z/q_z").same_form(Q("v")));
  CHECK(Q("(v^2 - w^2)/(v - w)").reduce().same_form(Q("v + w")));
  CHECK(Q("1/(v-w) - 1/(v-w)").is_zero());
  CHECK(Q("1/(w-v) + 1/(v-w)").is_zero());
  CHECK(Q("a/(2*v - 2*w)").equals(Q("(a/2)/(v-w)")));
  CHECK(Q("D_x(a/(v-w))").equals(Q("a_x/(v-w) - a*(v_x-w_x)/(v-w)^2")));
  // d/dx of 1/q_z
  CHECK(Q("D_x(1/q_z)").equals(Q("-q_xz/q_z^2")));
}

TEST_CASE("substitution") {
  SubstitutionRules direct;
  direct.set(FieldId("v"), Q("q_y/q_z"));
  CHECK(direct.apply(P("v*q_z")).same_form(Q("q_y")));

  SubstitutionRules none;
  CHECK(none.apply(P("v_x + w")).same_form(Q("v_x + w")));

  // prolongation against a hand-prolonged rule
  SubstitutionRules pro(true);
  pro.set(JetVar(FieldId("psi"), unit(Dir::y)), Q("psi_z*a/(psi_x - v*psi_z)"));
  const JetQuotient got = pro.apply(P("psi_xy"));
  const JetQuotient hand = Q("(psi_xz*a + psi_z*a_x)/(psi_x - v*psi_z)"
                             " - psi_z*a*(psi_xx - v_x*psi_z - v*psi_xz)/(psi_x - v*psi_z)^2");
  CHECK(got.equals(hand));

  SubstitutionRules strict(false);
  strict.set(FieldId("v"), Q("w"));
  CHECK_THROWS_AS(strict.apply(P("v_x")), CoverageError);
  strict.set(JetVar(FieldId("v"), unit(Dir::x)), Q("w_x"));
  CHECK(strict.apply(P("v_x*v")).same_form(Q("w_x*w")));
}

TEST_CASE("parser handles indices and sums") {
  IndexEnv env{{"m", 2}};
  CHECK(parse_poly("sum(i=1..m: v[i]_x)", env) == P("v1_x + v2_x"));
  CHECK(parse_poly("v[i+1]", {{"i", 1}}) == P("v2"));
  CHECK(parse_quotient("D_xz(a~)").same_form(Q("a~_xz")));
}

TEST_CASE("property: normal forms under random trees") {
  std::mt19937_64 rng(7);
  const auto pool = contactlax::testing::small_jet_pool();
  for (int iter = 0; iter < 200; ++iter) {
    const Expr e1 = random_tree(rng, 3, pool);
    const Expr e2 = random_tree(rng, 3, pool);
    const DiffPoly p1 = normalize(e1);
    const DiffPoly p2 = normalize(e2);
    CHECK(normalize(to_expr(p1)) == p1);
    const Dir d1 = kAllDirs[rng() % 4];
    const Dir d2 = kAllDirs[rng() % 4];
    CHECK(p1.total_derivative(d1).total_derivative(d2) == p1.total_derivative(d2).total_derivative(d1));
    CHECK((p1 * p2).total_derivative(d1) == p1.total_derivative(d1) * p2 + p1 * p2.total_derivative(d1));
    JetPoint pt;
    fill_point(rng, p1.variables(), pt);
    fill_point(rng, p2.variables(), pt);
    for (const auto& v : pool) fill_point(rng, {v}, pt);
    CHECK(p1.eval(pt) == eval_tree(e1, pt));
    CHECK((p1 * p2).eval(pt) == p1.eval(pt) * p2.eval(pt));
    CHECK((p1 + p2).eval(pt) == p1.eval(pt) + p2.eval(pt));
  }
}
