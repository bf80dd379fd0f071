#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contactlax/diffpoly.hpp"

namespace contactlax {

/// Quotient of differential polynomials with a factored denominator.
///
/// The denominator is a monomial part times a list of non-monomial factors
/// with multiplicities. Each factor is normalised to leading coefficient 1
/// and stripped of monomial content. Equal factors are merged when quotients
/// are added or multiplied; monomial content shared with the numerator is
/// cancelled eagerly. Full multivariate gcd is never attempted: equality is
/// decided by cross-multiplication, and reduce() cancels a factor only when it
/// divides the numerator exactly.
class JetQuotient {
 public:
  struct Factor {
    DiffPoly poly;
    unsigned exp;
  };

  JetQuotient() = default;
  JetQuotient(DiffPoly num);  // NOLINT(google-explicit-constructor)
  JetQuotient(const Rational& c) : JetQuotient(DiffPoly(c)) {}  // NOLINT
  JetQuotient(long c) : JetQuotient(DiffPoly(c)) {}             // NOLINT
  JetQuotient(int c) : JetQuotient(DiffPoly(c)) {}              // NOLINT

  /// num / den; throws PoleError when den is the zero polynomial.
  static JetQuotient ratio(const DiffPoly& num, const DiffPoly& den);
  static JetQuotient jet(const FieldId& f, MultiIndex d = {}) { return DiffPoly::jet(f, d); }

  const DiffPoly& num() const { return num_; }
  const Monomial& den_monomial() const { return den_mono_; }
  const std::vector<Factor>& den_factors() const { return den_; }
  /// Expanded denominator.
  DiffPoly den() const;
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_mono_.empty() && den_.empty(); }
  /// Numerator when the denominator is 1.
  const DiffPoly& as_polynomial() const;
  bool is_constant() const { return is_polynomial() && num_.is_constant(); }

  JetQuotient operator-() const;
  friend JetQuotient operator+(const JetQuotient& a, const JetQuotient& b);
  friend JetQuotient operator-(const JetQuotient& a, const JetQuotient& b);
  friend JetQuotient operator*(const JetQuotient& a, const JetQuotient& b);
  friend JetQuotient operator/(const JetQuotient& a, const JetQuotient& b);
  JetQuotient& operator+=(const JetQuotient& b) { return *this = *this + b; }
  JetQuotient& operator-=(const JetQuotient& b) { return *this = *this - b; }
  JetQuotient& operator*=(const JetQuotient& b) { return *this = *this * b; }
  JetQuotient inverse() const;
  JetQuotient pow(int k) const;

  JetQuotient total_derivative(Dir dir) const;
  /// Partial derivative with respect to one jet variable (quotient rule).
  JetQuotient partial(const JetVar& v) const;

  /// Cancels every denominator factor that divides the numerator exactly.
  JetQuotient reduce() const;

  /// Mathematical equality by cross-multiplication.
  bool equals(const JetQuotient& other) const;
  /// Representation equality (same normalised num and den).
  bool same_form(const JetQuotient& other) const;

  Rational eval(const JetPoint& point) const;
  double eval_double(const std::map<JetVar, double>& point) const;

  std::set<JetVar> variables() const;
  template <class Pred>
  bool any_variable(Pred&& pred) const {
    if (num_.any_variable(pred)) return true;
    for (const auto& f : den_mono_.factors())
      if (pred(f.var)) return true;
    for (const auto& f : den_)
      if (f.poly.any_variable(pred)) return true;
    return false;
  }

  JetQuotient substitute(const SubstitutionRules& rules) const;
  /// Polynomial replacement of jet variables in numerator and denominator.
  JetQuotient compose(const std::map<JetVar, DiffPoly>& values) const;

  std::string str() const;

 private:
  void cancel_monomial_content();
  void add_den_factor(const DiffPoly& poly, unsigned exp);
  friend class SubstitutionRules;

  DiffPoly num_;
  Monomial den_mono_;
  std::vector<Factor> den_;  // sorted by compare(), no duplicates
};

/// Replacement rules from jet patterns to quotients.
///
/// A rule attaches a value to a base jet (field, d0). The jet itself is
/// replaced by the value. With prolongation enabled, any jet (field, d) with
/// d >= d0 componentwise is replaced by the corresponding total derivative of
/// the value. Without prolongation such a jet is a coverage error. Jets of the
/// same field not above any rule pattern are left untouched.
class SubstitutionRules {
 public:
  SubstitutionRules() = default;
  explicit SubstitutionRules(bool prolong) : prolong_(prolong) {}

  SubstitutionRules& set(const JetVar& base, JetQuotient value);
  SubstitutionRules& set(const FieldId& f, JetQuotient value) { return set(JetVar(f), std::move(value)); }
  void set_prolong(bool on) { prolong_ = on; }
  bool prolong() const { return prolong_; }
  bool empty() const { return rules_.empty(); }

  /// Value for v, or nullopt when v is untouched.
  std::optional<JetQuotient> lookup(const JetVar& v) const;

  JetQuotient apply(const DiffPoly& e) const;
  JetQuotient apply(const JetQuotient& e) const { return e.substitute(*this); }

 private:
  struct Rule {
    JetVar base;
    JetQuotient value;
  };
  bool prolong_ = false;
  std::vector<Rule> rules_;
  mutable std::map<JetVar, JetQuotient> cache_;
};

}  // namespace contactlax
