#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "contactlax/quotient.hpp"

namespace contactlax {

/// Raw (un-normalised) expression tree. `diff` and negative powers are only
/// meaningful when the tree is turned into a JetQuotient.
struct Expr {
  enum class Op { num, jet, add, mul, pow, diff };

  Op op = Op::num;
  Rational value;         // num
  JetVar var;             // jet
  std::vector<Expr> args; // add, mul; pow and diff use args[0]
  int exp = 0;            // pow
  Dir dir = Dir::x;       // diff

  static Expr number(const Rational& v);
  static Expr jet(const JetVar& v);
  static Expr add(std::vector<Expr> a);
  static Expr mul(std::vector<Expr> a);
  static Expr power(Expr base, int e);
  static Expr diff(Expr e, Dir d);
};

/// Unique normal form of a polynomial tree. Throws StructuralError on
/// negative powers or empty add/mul nodes.
DiffPoly normalize(const Expr& e);
/// Normal form of a tree that may contain divisions and total derivatives.
JetQuotient to_quotient(const Expr& e);
/// Direct evaluation of the tree without normalising it first.
Rational eval_tree(const Expr& e, const JetPoint& point);

Expr to_expr(const DiffPoly& p);
Expr to_expr(const JetQuotient& q);

/// Integer bindings for index variables in parsed text (`v[i]`, `sum`).
using IndexEnv = std::map<std::string, int, std::less<>>;

/// Infix parser.
///
///   expr  := term (('+'|'-') term)*
///   term  := unary (('*'|'/') unary)*
///   unary := '-' unary | atom ('^' ['-'] int)?
///   atom  := int | '(' expr ')' | D_<dirs>(expr) | sum(i=lo..hi: expr) | jet
///   jet   := name ['[' index ']'] ['_' <dirs>]
///
/// `v[i]` appends the value of index i to the name ("v" + "2" = "v2").
/// Directions are the letters x, y, z, t.
Expr parse_expr(std::string_view text, const IndexEnv& env = {});
inline JetQuotient parse_quotient(std::string_view text, const IndexEnv& env = {}) {
  return to_quotient(parse_expr(text, env));
}
inline DiffPoly parse_poly(std::string_view text, const IndexEnv& env = {}) {
  return normalize(parse_expr(text, env));
}

}  // namespace contactlax
