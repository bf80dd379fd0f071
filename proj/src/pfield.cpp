#include "contactlax/pfield.hpp"

#include <sstream>
#include <stdexcept>

#include "contactlax/errors.hpp"

namespace contactlax {

// ---------------------------------------------------------------- PPoly

PPoly::PPoly(JetQuotient c) {
  c_.push_back(std::move(c));
  trim();
}

PPoly::PPoly(std::vector<JetQuotient> coeffs) : c_(std::move(coeffs)) { trim(); }

PPoly PPoly::p_power(unsigned k, JetQuotient c) {
  std::vector<JetQuotient> v(k + 1);
  v[k] = std::move(c);
  return PPoly(std::move(v));
}

PPoly PPoly::linear(const JetQuotient& s) { return PPoly({-s, JetQuotient(1)}); }

void PPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

JetQuotient PPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return JetQuotient();
  return c_[static_cast<std::size_t>(k)];
}

PPoly PPoly::operator-() const {
  PPoly out = *this;
  for (auto& c : out.c_) c = -c;
  return out;
}

PPoly operator+(const PPoly& a, const PPoly& b) {
  std::vector<JetQuotient> v(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k < a.c_.size() && k < b.c_.size()) {
      v[k] = a.c_[k] + b.c_[k];
    } else if (k < a.c_.size()) {
      v[k] = a.c_[k];
    } else {
      v[k] = b.c_[k];
    }
  }
  return PPoly(std::move(v));
}

PPoly operator-(const PPoly& a, const PPoly& b) { return a + (-b); }

PPoly operator*(const PPoly& a, const PPoly& b) {
  if (a.is_zero() || b.is_zero()) return PPoly();
  std::vector<JetQuotient> v(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j].is_zero()) continue;
      v[i + j] += a.c_[i] * b.c_[j];
    }
  }
  return PPoly(std::move(v));
}

PPoly PPoly::scaled(const JetQuotient& c) const {
  PPoly out = *this;
  for (auto& x : out.c_) x *= c;
  out.trim();
  return out;
}

PPoly PPoly::pow(unsigned k) const {
  PPoly r(JetQuotient(1));
  for (unsigned i = 0; i < k; ++i) r *= *this;
  return r;
}

PPoly PPoly::pdiff() const {
  std::vector<JetQuotient> v;
  for (std::size_t k = 1; k < c_.size(); ++k) v.push_back(c_[k] * JetQuotient(static_cast<long>(k)));
  return PPoly(std::move(v));
}

PPoly PPoly::total_derivative(Dir dir) const {
  return map([dir](const JetQuotient& c) { return c.total_derivative(dir); });
}

JetQuotient PPoly::at(const JetQuotient& s) const {
  JetQuotient acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Rational PPoly::eval(const Rational& p, const JetPoint& point) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * p + it->eval(point);
  return acc;
}

std::pair<PPoly, PPoly> PPoly::divmod(const PPoly& d) const {
  if (d.is_zero()) throw PoleError("polynomial division by zero");
  PPoly rem = *this;
  std::vector<JetQuotient> q(std::max(0, degree() - d.degree() + 1));
  const JetQuotient lead_inv = d.leading().inverse();
  while (!rem.is_zero() && rem.degree() >= d.degree()) {
    const int shift = rem.degree() - d.degree();
    JetQuotient c = rem.leading() * lead_inv;
    q[static_cast<std::size_t>(shift)] = c;
    std::vector<JetQuotient> sub(static_cast<std::size_t>(rem.degree() + 1));
    for (int k = 0; k <= d.degree(); ++k) sub[static_cast<std::size_t>(k + shift)] = d.c_[static_cast<std::size_t>(k)] * c;
    std::vector<JetQuotient> r = rem.c_;
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= sub[k];
    r.pop_back();  // leading term cancels by construction
    rem = PPoly(std::move(r));
  }
  return {PPoly(std::move(q)), rem};
}

PPoly PPoly::monic() const {
  if (is_zero()) throw PoleError("monic of zero polynomial");
  if (leading().is_constant() && leading().num().constant_value() == 1) return *this;
  return scaled(leading().inverse());
}

PPoly PPoly::map(const std::function<JetQuotient(const JetQuotient&)>& f) const {
  std::vector<JetQuotient> v;
  v.reserve(c_.size());
  for (const auto& c : c_) v.push_back(f(c));
  return PPoly(std::move(v));
}

PPoly PPoly::reduce() const {
  return map([](const JetQuotient& c) { return c.reduce(); });
}

bool PPoly::equals(const PPoly& other) const { return (*this - other).is_zero(); }

bool PPoly::same_form(const PPoly& other) const {
  if (c_.size() != other.c_.size()) return false;
  for (std::size_t k = 0; k < c_.size(); ++k)
    if (!c_[k].same_form(other.c_[k])) return false;
  return true;
}

std::string PPoly::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const auto& c = c_[static_cast<std::size_t>(k)];
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    if (k >= 1) os << "*p";
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

std::vector<JetQuotient> coefficients(const PPoly& q) { return q.coeffs(); }

// ---------------------------------------------------------------- PRational

namespace {

bool same_den(const std::vector<PRational::Factor>& a, const std::vector<PRational::Factor>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& f : a) {
    bool found = false;
    for (const auto& g : b) {
      if (g.exp == f.exp && g.poly.same_form(f.poly)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

}  // namespace

PRational::PRational(PPoly num) : num_(std::move(num)) {}

void PRational::add_factor(PPoly poly, unsigned exp) {
  if (exp == 0) return;
  if (poly.is_zero()) throw PoleError("zero denominator in p");
  if (poly.degree() == 0) {
    num_ = num_.scaled(poly.leading().inverse().pow(static_cast<int>(exp)));
    return;
  }
  const JetQuotient lc = poly.leading();
  if (!(lc.is_constant() && lc.num().constant_value() == 1)) {
    num_ = num_.scaled(lc.inverse().pow(static_cast<int>(exp)));
    poly = poly.monic();
  }
  for (auto& f : den_) {
    if (f.poly.same_form(poly)) {
      f.exp += exp;
      return;
    }
  }
  den_.push_back({std::move(poly), exp});
}

PRational PRational::ratio(const PPoly& num, const PPoly& den) {
  PRational r(num);
  r.add_factor(den, 1);
  if (r.num_.is_zero()) r.den_.clear();
  return r;
}

PRational PRational::simple_pole(const JetQuotient& c, const JetQuotient& s, unsigned k) {
  PRational r{PPoly(c)};
  if (c.is_zero()) return r;
  r.add_factor(PPoly::linear(s), k);
  return r;
}

PRational PRational::from_partial_fractions(const PartialFractions& pf) {
  PRational r(pf.polypart);
  for (const auto& pole : pf.poles) {
    for (std::size_t k = 0; k < pole.residues.size(); ++k) {
      if (pole.residues[k].is_zero()) continue;
      r += simple_pole(pole.residues[k], pole.pole, static_cast<unsigned>(k + 1));
    }
  }
  return r;
}

PRational PRational::ratio_over_poles(const PPoly& num, const PPoly& den,
                                       const std::vector<JetQuotient>& poles) {
  if (den.is_zero()) throw PoleError("zero denominator in p");
  PPoly rest = den;
  std::vector<Factor> factors;
  for (const auto& s : poles) {
    const PPoly lin = PPoly::linear(s);
    unsigned e = 0;
    while (rest.degree() >= 1 && rest.at(s).is_zero()) {
      rest = rest.divmod(lin).first.reduce();
      ++e;
    }
    if (e > 0) factors.push_back({lin, e});
  }
  if (rest.degree() >= 1) throw PoleError("denominator does not split over the given poles");
  factors.push_back({rest, 1});
  return from_factors(num, factors);
}

PRational PRational::from_factors(PPoly num, const std::vector<Factor>& factors) {
  PRational r(std::move(num));
  if (r.is_zero()) return r;
  for (const auto& f : factors) r.add_factor(f.poly, f.exp);
  return r;
}

PPoly PRational::den() const {
  PPoly d(JetQuotient(1));
  for (const auto& f : den_) d *= f.poly.pow(f.exp);
  return d;
}

PRational PRational::operator-() const {
  PRational out = *this;
  out.num_ = -out.num_;
  return out;
}

PRational operator+(const PRational& a, const PRational& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (same_den(a.den_, b.den_)) {
    PRational out = a;
    out.num_ = a.num_ + b.num_;
    if (out.num_.is_zero()) out.den_.clear();
    return out;
  }
  PRational out;
  PPoly ma(JetQuotient(1)), mb(JetQuotient(1));
  out.den_ = a.den_;
  for (const auto& fb : b.den_) {
    bool found = false;
    for (std::size_t k = 0; k < out.den_.size(); ++k) {
      auto& fo = out.den_[k];
      if (fo.poly.same_form(fb.poly)) {
        found = true;
        if (fb.exp > fo.exp) {
          ma *= fb.poly.pow(fb.exp - fo.exp);
          fo.exp = fb.exp;
        } else if (fo.exp > fb.exp) {
          mb *= fo.poly.pow(fo.exp - fb.exp);
        }
        break;
      }
    }
    if (!found) {
      out.den_.push_back(fb);
      ma *= fb.poly.pow(fb.exp);
    }
  }
  for (const auto& fa : a.den_) {
    bool in_b = false;
    for (const auto& fb : b.den_) in_b = in_b || fb.poly.same_form(fa.poly);
    if (!in_b) mb *= fa.poly.pow(fa.exp);
  }
  out.num_ = a.num_ * ma + b.num_ * mb;
  if (out.num_.is_zero()) out.den_.clear();
  return out;
}

PRational operator-(const PRational& a, const PRational& b) { return a + (-b); }

PRational operator*(const PRational& a, const PRational& b) {
  if (a.is_zero() || b.is_zero()) return PRational();
  PRational out(a.num_ * b.num_);
  out.den_ = a.den_;
  for (const auto& f : b.den_) out.add_factor(f.poly, f.exp);
  return out;
}

namespace {

template <class Deriv>
PRational quotient_rule(const PPoly& num, const std::vector<PRational::Factor>& den, Deriv&& d,
                        const std::function<PRational(PPoly, std::vector<PRational::Factor>)>& build) {
  PPoly radical(JetQuotient(1));
  for (const auto& f : den) radical *= f.poly;
  PPoly sum;
  for (std::size_t k = 0; k < den.size(); ++k) {
    PPoly dg = d(den[k].poly);
    if (dg.is_zero()) continue;
    PPoly rest = dg.scaled(JetQuotient(static_cast<long>(den[k].exp)));
    for (std::size_t l = 0; l < den.size(); ++l)
      if (l != k) rest *= den[l].poly;
    sum += rest;
  }
  PPoly new_num = d(num) * radical - num * sum;
  std::vector<PRational::Factor> new_den = den;
  for (auto& f : new_den) f.exp += 1;
  return build(std::move(new_num), std::move(new_den));
}

}  // namespace

PRational PRational::pdiff() const {
  auto build = [](PPoly n, std::vector<Factor> d) {
    PRational r(std::move(n));
    if (!r.is_zero()) r.den_ = std::move(d);
    return r;
  };
  if (den_.empty()) return PRational(num_.pdiff());
  return quotient_rule(num_, den_, [](const PPoly& q) { return q.pdiff(); }, build);
}

PRational PRational::total_derivative(Dir dir) const {
  auto build = [](PPoly n, std::vector<Factor> d) {
    PRational r(std::move(n));
    if (!r.is_zero()) r.den_ = std::move(d);
    return r;
  };
  auto d = [dir](const PPoly& q) { return q.total_derivative(dir); };
  if (den_.empty()) return PRational(num_.total_derivative(dir));
  return quotient_rule(num_, den_, d, build);
}

PRational PRational::map_coefficients(const std::function<JetQuotient(const JetQuotient&)>& f) const {
  PRational out(num_.map(f));
  for (const auto& g : den_) out.add_factor(g.poly.map(f), g.exp);
  if (out.num_.is_zero()) out.den_.clear();
  return out;
}

std::pair<PPoly, PPoly> PRational::collect() const {
  PPoly n = num_;
  PPoly d = den();
  // Cancel common powers of p.
  while (!n.is_zero() && d.degree() > 0 && n.coeff(0).is_zero() && d.coeff(0).is_zero()) {
    std::vector<JetQuotient> nc(n.coeffs().begin() + 1, n.coeffs().end());
    std::vector<JetQuotient> dc(d.coeffs().begin() + 1, d.coeffs().end());
    n = PPoly(std::move(nc));
    d = PPoly(std::move(dc));
  }
  if (n.is_zero()) d = PPoly(JetQuotient(1));
  return {n, d};
}

std::optional<PartialFractions> PRational::partial_fractions() const {
  for (const auto& f : den_) {
    if (f.poly.degree() != 1 || f.exp > 2) return std::nullopt;
  }
  PartialFractions pf;
  pf.polypart = den_.empty() ? num_ : num_.divmod(den()).first.reduce();
  const PPoly dnum = num_.pdiff();
  for (std::size_t i = 0; i < den_.size(); ++i) {
    const JetQuotient s = -den_[i].poly.coeff(0);
    // Q(s) = prod_{k != i} (s - s_k)^e_k, Q'(s)/Q(s) = sum e_k / (s - s_k).
    std::vector<JetQuotient> gaps;
    JetQuotient log_deriv;
    for (std::size_t k = 0; k < den_.size(); ++k) {
      if (k == i) continue;
      const JetQuotient gap = s + den_[k].poly.coeff(0);
      if (gap.is_zero()) throw PoleError("coincident poles in partial fractions");
      for (unsigned e = 0; e < den_[k].exp; ++e) gaps.push_back(gap);
      log_deriv += JetQuotient(static_cast<long>(den_[k].exp)) / gap;
    }
    // Dividing gap by gap keeps equal factors merged in the quotient.
    auto over_q = [&gaps](JetQuotient x) {
      for (const auto& g : gaps) x = x / g;
      return x.reduce();
    };
    PoleTerm term;
    term.pole = s;
    term.order = den_[i].exp;
    const JetQuotient n_at = num_.at(s);
    const JetQuotient top = over_q(n_at);
    if (term.order == 1) {
      term.residues = {top};
    } else {
      term.residues = {over_q(dnum.at(s) - n_at * log_deriv), top};
    }
    pf.poles.push_back(std::move(term));
  }
  return pf;
}

Rational PRational::eval(const Rational& p, const JetPoint& point) const {
  Rational d = 1;
  for (const auto& f : den_) {
    Rational v = f.poly.eval(p, point);
    for (unsigned k = 0; k < f.exp; ++k) d *= v;
  }
  if (d == 0) throw PoleError("pole hit in PRational evaluation");
  return num_.eval(p, point) / d;
}

bool PRational::equals(const PRational& other) const { return (*this - other).is_zero(); }

std::set<JetVar> PRational::variables() const {
  std::set<JetVar> out;
  auto grab = [&](const PPoly& q) {
    for (const auto& c : q.coeffs()) {
      auto v = c.variables();
      out.insert(v.begin(), v.end());
    }
  };
  grab(num_);
  for (const auto& f : den_) grab(f.poly);
  return out;
}

std::string PRational::str() const {
  if (den_.empty()) return num_.str();
  std::ostringstream os;
  os << "[" << num_.str() << "] / [";
  bool first = true;
  for (const auto& f : den_) {
    if (!first) os << " * ";
    first = false;
    os << "(" << f.poly.str() << ")";
    if (f.exp > 1) os << "^" << f.exp;
  }
  os << "]";
  return os.str();
}

}  // namespace contactlax
