#include <doctest.h>

#include "contactlax/errors.hpp"
#include "contactlax/expr.hpp"
#include "contactlax/pfield.hpp"
#include "random_exprs.hpp"

using namespace contactlax;
using contactlax::testing::random_rational;

namespace {

JetQuotient Q(const char* s) { return parse_quotient(s); }
const PPoly p1 = PPoly::p_power(1);

PRational pole(const char* c, const char* s, unsigned k = 1) { return PRational::simple_pole(Q(c), Q(s), k); }

/// Random rational function with symbolic poles v1.., w1.. of order <= 2.
PRational random_pf(std::mt19937_64& rng, int npoles) {
  PRational r(PPoly(std::vector<JetQuotient>{JetQuotient(random_rational(rng, 5)) * Q("a0")}));
  for (int i = 1; i <= npoles; ++i) {
    const std::string s = "v" + std::to_string(i);
    const std::string a = "a" + std::to_string(i);
    r += PRational::simple_pole(Q(a.c_str()), Q(s.c_str()), 1);
    if (rng() % 2) r += PRational::simple_pole(Q(a.c_str()) * Q("w1"), Q(s.c_str()), 2);
  }
  return r;
}

JetPoint random_point(std::mt19937_64& rng, const std::set<JetVar>& vars) {
  JetPoint pt;
  contactlax::testing::fill_point(rng, vars, pt);
  return pt;
}

}  // namespace

TEST_CASE("pdiff") {
  CHECK(pole("1", "v").pdiff().equals(-pole("1", "v", 2)));
  CHECK(PRational(PPoly::p_power(2)).pdiff().equals(PRational(PPoly::p_power(1, 2))));
  CHECK(PRational(Q("a0")).pdiff().is_zero());
}

TEST_CASE("collect brings to a common denominator") {
  auto [n, d] = (pole("1", "v") + pole("1", "w")).collect();
  const PRational expect = PRational::ratio(PPoly({-Q("v") - Q("w"), JetQuotient(2)}),
                                            PPoly::linear(Q("v")) * PPoly::linear(Q("w")));
  CHECK(PRational::ratio(n, d).equals(expect));
  CHECK(n.degree() == 1);
  CHECK(d.degree() == 2);

  auto [n0, d0] = PRational(Q("a0")).collect();
  CHECK(n0.same_form(PPoly(Q("a0"))));
  CHECK(d0.same_form(PPoly(JetQuotient(1))));

  // common powers of p cancel
  auto [n2, d2] = PRational::ratio(PPoly::p_power(2), PPoly::p_power(1) * PPoly::linear(Q("v"))).collect();
  CHECK(n2.degree() == 1);
  CHECK(d2.degree() == 1);
}

TEST_CASE("coefficients") {
  const PPoly q({-Q("v") - Q("w"), JetQuotient(2)});
  const auto c = coefficients(q);
  REQUIRE(c.size() == 2);
  CHECK(c[0].same_form(Q("-v-w")));
  CHECK(c[1].same_form(JetQuotient(2)));
  CHECK(coefficients(PPoly()).empty());
}

TEST_CASE("partial fractions reject higher orders") {
  CHECK_FALSE(pole("1", "v", 3).partial_fractions().has_value());
  CHECK_FALSE(PRational::ratio(PPoly(JetQuotient(1)), PPoly::p_power(2) + PPoly(Q("v"))).partial_fractions());
}

TEST_CASE("property: partial-fraction round trip and pdiff agreement") {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 40; ++iter) {
    const int npoles = 1 + static_cast<int>(rng() % 3);
    const PRational r = random_pf(rng, npoles);
    auto pf = r.partial_fractions();
    REQUIRE(pf.has_value());
    const PRational back = PRational::from_partial_fractions(*pf);
    CHECK(back.equals(r));
    auto [n, d] = r.collect();
    std::vector<JetQuotient> cands;
    for (int i = 1; i <= npoles; ++i) cands.push_back(Q(("v" + std::to_string(i)).c_str()));
    auto pf2 = PRational::ratio_over_poles(n, d, cands).partial_fractions();
    REQUIRE(pf2.has_value());
    REQUIRE(pf2->poles.size() == pf->poles.size());
    for (std::size_t k = 0; k < pf->poles.size(); ++k) {
      // pole order of the factored view can be lower when a residue vanishes
      const auto& a = pf->poles[k];
      bool found = false;
      for (const auto& b : pf2->poles) {
        if (!b.pole.equals(a.pole)) continue;
        found = true;
        REQUIRE(a.residues.size() == b.residues.size());
        for (std::size_t j = 0; j < a.residues.size(); ++j) CHECK(a.residues[j].equals(b.residues[j]));
      }
      CHECK(found);
    }
    // d/dp through the pf view (termwise) vs quotient rule
    PRational termwise(pf->polypart.pdiff());
    for (const auto& t : pf->poles)
      for (std::size_t j = 0; j < t.residues.size(); ++j)
        termwise += PRational::simple_pole(t.residues[j] * JetQuotient(-static_cast<long>(j + 1)), t.pole,
                                           static_cast<unsigned>(j + 2));
    CHECK(termwise.equals(r.pdiff()));
  }
}

TEST_CASE("property: evaluation commutes with pfield operations") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 40; ++iter) {
    const PRational r1 = random_pf(rng, 2);
    const PRational r2 = random_pf(rng, 1) + PRational(PPoly::p_power(1, Q("w1")));
    auto vars = r1.variables();
    for (const auto& v : r2.variables()) vars.insert(v);
    const JetPoint pt = random_point(rng, vars);
    Rational p = random_rational(rng);
    try {
      const Rational x1 = r1.eval(p, pt);
      const Rational x2 = r2.eval(p, pt);
      CHECK((r1 * r2).eval(p, pt) == x1 * x2);
      CHECK((r1 + r2).eval(p, pt) == x1 + x2);
      CHECK((r1 - r2).eval(p, pt) == x1 - x2);
      auto [n, d] = (r1 * r2).collect();
      CHECK(n.eval(p, pt) / d.eval(p, pt) == x1 * x2);
      CHECK(n.degree() <= r1.num().degree() + r2.num().degree());
    } catch (const PoleError&) {
      // sampled on a pole; skip
    }
  }
}
