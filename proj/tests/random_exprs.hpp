#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "contactlax/expr.hpp"
#include "contactlax/laxpair.hpp"

namespace contactlax::testing {

inline Rational random_rational(std::mt19937_64& rng, int bound = 100) {
  std::uniform_int_distribution<int> num(-bound, bound);
  std::uniform_int_distribution<int> den(1, bound);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

inline std::vector<JetVar> small_jet_pool() {
  std::vector<JetVar> pool;
  for (const char* f : {"v", "w", "a"}) {
    pool.emplace_back(FieldId(f));
    pool.emplace_back(FieldId(f), MultiIndex{1, 0, 0, 0});
    pool.emplace_back(FieldId(f), MultiIndex{0, 0, 1, 1});
  }
  return pool;
}

/// Random raw tree of +, *, small powers, rationals and jets.
inline Expr random_tree(std::mt19937_64& rng, int depth, const std::vector<JetVar>& pool) {
  std::uniform_int_distribution<int> pick(0, 9);
  const int k = depth <= 0 ? pick(rng) % 2 : pick(rng);
  if (k == 0) return Expr::number(random_rational(rng, 9));
  if (k <= 2) return Expr::jet(pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)]);
  if (k <= 5) {
    std::vector<Expr> args;
    const int n = 2 + static_cast<int>(rng() % 2);
    for (int i = 0; i < n; ++i) args.push_back(random_tree(rng, depth - 1, pool));
    return Expr::add(std::move(args));
  }
  if (k <= 8) {
    std::vector<Expr> args;
    for (int i = 0; i < 2; ++i) args.push_back(random_tree(rng, depth - 1, pool));
    return Expr::mul(std::move(args));
  }
  return Expr::power(random_tree(rng, depth - 1, pool), static_cast<int>(rng() % 3));
}

/// Assigns random rationals to every jet in vars (and keeps earlier values).
inline void fill_point(std::mt19937_64& rng, const std::set<JetVar>& vars, JetPoint& point) {
  for (const auto& v : vars)
    if (!point.count(v)) point[v] = random_rational(rng);
}

/// F, G with a polynomial part of degree <= 2 and up to two poles of order
/// <= 2 each, coefficients and poles drawn from the fields u1..u4.
inline LaxPair random_custom_pair(std::mt19937_64& rng) {
  std::vector<FieldId> fields{"u1", "u2", "u3", "u4"};
  std::vector<JetVar> pool(fields.begin(), fields.end());
  auto coeff = [&] {
    for (;;) {
      JetQuotient c = to_quotient(random_tree(rng, 2, pool));
      if (!c.is_zero()) return c;
    }
  };
  auto side = [&] {
    const int deg = static_cast<int>(rng() % 3);
    std::vector<JetQuotient> cs;
    for (int k = 0; k <= deg; ++k) cs.push_back(coeff());
    PRational r{PPoly(std::move(cs))};
    const int poles = static_cast<int>(rng() % 3);
    std::vector<std::size_t> used;
    for (int k = 0; k < poles; ++k) {
      std::size_t f = rng() % fields.size();
      if (std::find(used.begin(), used.end(), f) != used.end()) continue;
      used.push_back(f);
      const unsigned order = 1 + static_cast<unsigned>(rng() % 2);
      const JetQuotient s = JetQuotient::jet(fields[f]);
      for (unsigned e = 1; e <= order; ++e) r += PRational::simple_pole(coeff(), s, e);
    }
    return r;
  };
  return make_custom(side(), side(), fields);
}

}  // namespace contactlax::testing
