#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contactlax/jet.hpp"

namespace contactlax {

/// Product of jet variables with positive integer powers, factors sorted by
/// the jet-variable order.
class Monomial {
 public:
  struct Factor {
    JetVar var;
    unsigned power;
    friend bool operator==(const Factor&, const Factor&) = default;
  };

  Monomial() = default;
  explicit Monomial(JetVar v, unsigned power = 1);

  const std::vector<Factor>& factors() const { return f_; }
  bool empty() const { return f_.empty(); }
  unsigned degree() const;
  unsigned degree_in(const JetVar& v) const;
  bool divides(const Monomial& other) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Requires b | a.
  friend Monomial operator/(const Monomial& a, const Monomial& b);
  static Monomial gcd(const Monomial& a, const Monomial& b);
  static Monomial lcm(const Monomial& a, const Monomial& b);

  Monomial without(const JetVar& v) const;

  /// Lexicographic monomial order: smaller jet variables are more significant.
  /// Compatible with multiplication.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  friend class DiffPoly;
  std::vector<Factor> f_;
};

/// Point assignment for exact evaluation.
using JetPoint = std::map<JetVar, Rational>;

class JetQuotient;
class SubstitutionRules;

/// Exact multivariate polynomial in jet variables with rational coefficients.
/// Terms are kept sorted in decreasing monomial order with nonzero
/// coefficients, so structural equality is mathematical equality.
class DiffPoly {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
  };

  DiffPoly() = default;
  DiffPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  DiffPoly(long c) : DiffPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  DiffPoly(int c) : DiffPoly(Rational(c)) {}   // NOLINT(google-explicit-constructor)
  explicit DiffPoly(const JetVar& v);
  DiffPoly(Monomial m, Rational c);

  /// Jet of a symbol; coordinates are resolved (D_z z = 1, higher jets 0).
  static DiffPoly jet(const FieldId& f, MultiIndex d = {});
  static DiffPoly jet(const JetVar& v) { return jet(v.field, v.d); }
  /// Build from arbitrary terms (combines and sorts).
  static DiffPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value of a constant polynomial.
  Rational constant_value() const;
  bool is_monomial() const { return terms_.size() == 1; }
  const Term& leading() const { return terms_.front(); }
  unsigned total_degree() const;
  unsigned degree_in(const JetVar& v) const;

  std::set<JetVar> variables() const;
  bool contains_field(const FieldId& f) const;
  template <class Pred>
  bool any_variable(Pred&& pred) const {
    for (const auto& t : terms_)
      for (const auto& f : t.mono.factors())
        if (pred(f.var)) return true;
    return false;
  }

  /// gcd of all monomials.
  Monomial monomial_content() const;

  DiffPoly operator-() const;
  friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  DiffPoly& operator+=(const DiffPoly& b) { return *this = *this + b; }
  DiffPoly& operator-=(const DiffPoly& b) { return *this = *this - b; }
  DiffPoly& operator*=(const DiffPoly& b) { return *this = *this * b; }
  DiffPoly scaled(const Rational& c) const;
  DiffPoly times(const Monomial& m) const;
  /// Requires m | every term.
  DiffPoly divided_by(const Monomial& m) const;
  DiffPoly pow(unsigned k) const;

  /// Exact quotient if divisor divides *this, nullopt otherwise.
  std::optional<DiffPoly> exact_divide(const DiffPoly& divisor) const;

  DiffPoly total_derivative(Dir dir) const;
  /// Ordinary partial derivative with respect to one jet variable.
  DiffPoly partial(const JetVar& v) const;

  Rational eval(const JetPoint& point) const;
  double eval_double(const std::map<JetVar, double>& point) const;

  /// Coefficients with respect to powers of v (index = power of v).
  std::vector<DiffPoly> coefficients_in(const JetVar& v) const;
  /// Replace every jet var by a polynomial (no denominators); vars absent
  /// from the map are kept.
  DiffPoly compose(const std::map<JetVar, DiffPoly>& values) const;
  /// Keep only the terms for which pred(monomial) holds.
  template <class Pred>
  DiffPoly filter(Pred&& pred) const {
    DiffPoly out;
    for (const auto& t : terms_)
      if (pred(t.mono)) out.terms_.push_back(t);
    return out;
  }

  std::string str() const;

  friend bool operator==(const DiffPoly& a, const DiffPoly& b);
  /// Total order on polynomials (term by term), used to sort factor lists.
  friend std::strong_ordering compare(const DiffPoly& a, const DiffPoly& b);

 private:
  std::vector<Term> terms_;
};

}  // namespace contactlax
