#include <doctest.h>

#include "contactlax/errors.hpp"
#include "contactlax/expr.hpp"
#include "contactlax/gauge.hpp"

using namespace contactlax;

namespace {

JetQuotient Q(const char* s) { return parse_quotient(s); }

}  // namespace

TEST_CASE("check_ab") {
  CHECK(check_ab(Q("q_y/q_z"), Q("q_t/q_z")).is_zero());
  CHECK(check_ab(Q("3"), Q("-1/2")).is_zero());
  CHECK(check_ab(Q("z"), Q("t")).same_form(Q("-t")));
  // a0 = b0 = v: v_t - v_y
  CHECK(check_ab(Q("v"), Q("v")).same_form(Q("v_t - v_y")));
}

TEST_CASE("q = z is the identity gauge") {
  const LaxPair lax = make_ratgp(1, 1);
  ChangeOfVariables cov = printed_map(1, 1);
  cov.q_values = q_equals_z();
  const TransformResult t = apply_change_of_variables(lax, cov);
  CHECK(t.raw.F.equals(make_rat(1, 1).F));
  CHECK(t.raw.G.equals(make_rat(1, 1).G));
  REQUIRE(t.lax.has_value());
  CHECK(t.lax->F.equals(make_rat(1, 1).F));
}

TEST_CASE("q_z = 1 shifts the poles by q_x") {
  const LaxPair lax = make_ratgp(2, 1);
  ChangeOfVariables cov = printed_map(2, 1);
  cov.q_values = q_unit_z();
  const TransformResult t = apply_change_of_variables(lax, cov);
  CHECK(t.polynomial_part_zero);
  CHECK(t.pole_structure_ok);
  const PRational expect =
      PRational::simple_pole(Q("a1"), Q("v1 - f_x")) + PRational::simple_pole(Q("a2"), Q("v2 - f_x"));
  CHECK(t.raw.F.equals(expect));
}

TEST_CASE("general q: the chain rule decides the pole map") {
  const LaxPair lax = make_ratgp(1, 1);
  const TransformResult raw = apply_change_of_variables(lax, chain_rule_map(1, 1));
  CHECK(raw.polynomial_part_zero);
  CHECK(raw.pole_structure_ok);
  CHECK(raw.q_yt_free);
  // the transformed F is q_z (F((p + q_x)/q_z) - a0), computed directly
  const PRational direct = PRational::simple_pole(Q("a1*q_z^2"), Q("v1*q_z - q_x"));
  CHECK(raw.raw.F.equals(direct));

  const TransformResult printed = apply_change_of_variables(lax, printed_map(1, 1));
  CHECK(printed.polynomial_part_zero);
  CHECK_FALSE(printed.pole_structure_ok);

  ChangeOfVariables partial = chain_rule_map(1, 1);
  partial.field_map.erase(FieldId("w1~"));
  CHECK_THROWS_AS(apply_change_of_variables(lax, partial), CoverageError);
}

TEST_CASE("verify_theorem1 report") {
  for (int m = 1; m <= 2; ++m) {
    const Theorem1Report r = verify_theorem1(m, 1);
    CHECK(r.passes());
    CHECK(r.solved_is_chain_rule);
    CHECK(r.validating_general == std::vector<std::string>{"solved"});
    for (const auto& x : r.maps) {
      if (x.q_case != "general q") CHECK(x.passes());
      CHECK(x.q_yt_free);
    }
  }
}

TEST_CASE("eliminate_gauge") {
  const LaxPair out = eliminate_gauge(make_ratgp(1, 2));
  CHECK(out.F.equals(make_rat(1, 2).F));
  CHECK(out.G.equals(make_rat(1, 2).G));
  const PDESystem a = derive(out);
  const PDESystem b = derive(make_rat(1, 2));
  REQUIRE(a.equations.size() == b.equations.size());
  for (std::size_t k = 0; k < a.equations.size(); ++k) CHECK(a.equations[k].same_form(b.equations[k]));
  CHECK_THROWS_AS(eliminate_gauge(make_ratgp(1, 1), FieldId("q"), Q("z"), Q("t")), IncompatibleGaugeError);
  // constant gauge: q_y = 2 q_z, q_t = -q_z
  CHECK(eliminate_gauge(make_ratgp(1, 1), FieldId("q"), Q("2"), Q("-1")).F.equals(make_rat(1, 1).F));
}
