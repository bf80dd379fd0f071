#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "contactlax/quotient.hpp"

namespace contactlax {

/// Polynomial in the formal indeterminate p = psi_x / psi_z with JetQuotient
/// coefficients, stored by ascending degree with a nonzero leading coefficient.
class PPoly {
 public:
  PPoly() = default;
  PPoly(JetQuotient c);  // NOLINT(google-explicit-constructor)
  explicit PPoly(std::vector<JetQuotient> coeffs);
  static PPoly p_power(unsigned k, JetQuotient c = JetQuotient(1));
  /// p - s
  static PPoly linear(const JetQuotient& s);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<JetQuotient>& coeffs() const { return c_; }
  JetQuotient coeff(int k) const;
  const JetQuotient& leading() const { return c_.back(); }

  PPoly operator-() const;
  friend PPoly operator+(const PPoly& a, const PPoly& b);
  friend PPoly operator-(const PPoly& a, const PPoly& b);
  friend PPoly operator*(const PPoly& a, const PPoly& b);
  PPoly& operator+=(const PPoly& b) { return *this = *this + b; }
  PPoly& operator*=(const PPoly& b) { return *this = *this * b; }
  PPoly scaled(const JetQuotient& c) const;
  PPoly pow(unsigned k) const;

  /// d/dp
  PPoly pdiff() const;
  /// Coefficientwise total derivative (p held fixed).
  PPoly total_derivative(Dir dir) const;
  /// Value at p = s.
  JetQuotient at(const JetQuotient& s) const;
  Rational eval(const Rational& p, const JetPoint& point) const;
  /// Long division by a polynomial with invertible leading coefficient.
  std::pair<PPoly, PPoly> divmod(const PPoly& d) const;
  PPoly monic() const;
  PPoly map(const std::function<JetQuotient(const JetQuotient&)>& f) const;
  PPoly reduce() const;

  bool equals(const PPoly& other) const;
  bool same_form(const PPoly& other) const;
  std::string str() const;

 private:
  void trim();
  std::vector<JetQuotient> c_;
};

/// Coefficient sequence by ascending degree (length degree + 1).
std::vector<JetQuotient> coefficients(const PPoly& q);

struct PoleTerm {
  JetQuotient pole;
  unsigned order = 1;
  /// residues[k] multiplies 1/(p - pole)^(k+1).
  std::vector<JetQuotient> residues;
};

struct PartialFractions {
  PPoly polypart;
  std::vector<PoleTerm> poles;
};

/// Rational function of p: a numerator over a product of monic factors of
/// positive degree in p. Coefficient-level denominators live inside the
/// JetQuotient coefficients.
class PRational {
 public:
  struct Factor {
    PPoly poly;  // monic, degree >= 1
    unsigned exp;
  };

  PRational() = default;
  PRational(PPoly num);  // NOLINT(google-explicit-constructor)
  PRational(JetQuotient c) : PRational(PPoly(std::move(c))) {}  // NOLINT
  /// num / den for an arbitrary nonzero den.
  static PRational ratio(const PPoly& num, const PPoly& den);
  /// c / (p - s)^k
  static PRational simple_pole(const JetQuotient& c, const JetQuotient& s, unsigned k = 1);
  static PRational from_partial_fractions(const PartialFractions& pf);
  /// num / den with den split into linear factors (p - s) over the given
  /// candidate poles; whatever is left of den must be free of p.
  static PRational ratio_over_poles(const PPoly& num, const PPoly& den, const std::vector<JetQuotient>& poles);
  /// num / prod factors^exp; factors of degree 0 are folded into num.
  static PRational from_factors(PPoly num, const std::vector<Factor>& factors);

  const PPoly& num() const { return num_; }
  const std::vector<Factor>& den_factors() const { return den_; }
  PPoly den() const;
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }

  PRational operator-() const;
  friend PRational operator+(const PRational& a, const PRational& b);
  friend PRational operator-(const PRational& a, const PRational& b);
  friend PRational operator*(const PRational& a, const PRational& b);
  PRational& operator+=(const PRational& b) { return *this = *this + b; }

  /// d/dp by the quotient rule.
  PRational pdiff() const;
  /// Derivative through the coefficients only, p held fixed.
  PRational total_derivative(Dir dir) const;
  PRational map_coefficients(const std::function<JetQuotient(const JetQuotient&)>& f) const;

  /// Single fraction (numerator, expanded denominator); common powers of p
  /// are cancelled.
  std::pair<PPoly, PPoly> collect() const;
  /// Partial-fraction view; nullopt unless every denominator factor is
  /// linear in p with multiplicity at most 2.
  std::optional<PartialFractions> partial_fractions() const;

  Rational eval(const Rational& p, const JetPoint& point) const;
  bool equals(const PRational& other) const;
  std::set<JetVar> variables() const;
  std::string str() const;

 private:
  void add_factor(PPoly monic_poly, unsigned exp);
  PPoly num_;
  std::vector<Factor> den_;
};

}  // namespace contactlax
