#include "contactlax/quotient.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "contactlax/errors.hpp"

namespace contactlax {

namespace {

bool same_factors(const std::vector<JetQuotient::Factor>& a, const std::vector<JetQuotient::Factor>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a[k].exp != b[k].exp || !(a[k].poly == b[k].poly)) return false;
  return true;
}

DiffPoly monomial_poly(const Monomial& m) { return DiffPoly(m, Rational(1)); }

}  // namespace

JetQuotient::JetQuotient(DiffPoly num) : num_(std::move(num)) {}

JetQuotient JetQuotient::ratio(const DiffPoly& num, const DiffPoly& den) {
  if (den.is_zero()) throw PoleError("zero denominator");
  JetQuotient q(num);
  q.add_den_factor(den, 1);
  q.cancel_monomial_content();
  return q;
}

void JetQuotient::add_den_factor(const DiffPoly& poly_in, unsigned exp) {
  if (exp == 0) return;
  if (poly_in.is_zero()) throw PoleError("zero denominator factor");
  DiffPoly poly = poly_in;
  Monomial content = poly.monomial_content();
  if (!content.empty()) {
    Monomial p;
    for (unsigned k = 0; k < exp; ++k) p = p * content;
    den_mono_ = den_mono_ * p;
    poly = poly.divided_by(content);
  }
  const Rational lc = poly.leading().coeff;
  if (lc != 1) {
    Rational s = 1;
    for (unsigned k = 0; k < exp; ++k) s *= lc;
    num_ = num_.scaled(Rational(1) / s);
    poly = poly.scaled(Rational(1) / lc);
  }
  if (poly.is_constant()) return;
  auto it = std::lower_bound(den_.begin(), den_.end(), poly,
                             [](const Factor& f, const DiffPoly& p) { return compare(f.poly, p) < 0; });
  if (it != den_.end() && it->poly == poly) {
    it->exp += exp;
  } else {
    den_.insert(it, Factor{std::move(poly), exp});
  }
}

void JetQuotient::cancel_monomial_content() {
  if (num_.is_zero()) {
    den_mono_ = Monomial();
    den_.clear();
    return;
  }
  if (den_mono_.empty()) return;
  Monomial g = Monomial::gcd(num_.monomial_content(), den_mono_);
  if (g.empty()) return;
  num_ = num_.divided_by(g);
  den_mono_ = den_mono_ / g;
}

DiffPoly JetQuotient::den() const {
  DiffPoly d = monomial_poly(den_mono_);
  for (const auto& f : den_) d *= f.poly.pow(f.exp);
  return d;
}

const DiffPoly& JetQuotient::as_polynomial() const {
  if (!is_polynomial()) throw std::logic_error("quotient has a nontrivial denominator: " + str());
  return num_;
}

JetQuotient JetQuotient::operator-() const {
  JetQuotient out = *this;
  out.num_ = -out.num_;
  return out;
}

JetQuotient operator+(const JetQuotient& a, const JetQuotient& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den_mono_ == b.den_mono_ && same_factors(a.den_, b.den_)) {
    JetQuotient out = a;
    out.num_ = a.num_ + b.num_;
    out.cancel_monomial_content();
    return out;
  }
  JetQuotient out;
  out.den_mono_ = Monomial::lcm(a.den_mono_, b.den_mono_);
  DiffPoly ma = monomial_poly(out.den_mono_ / a.den_mono_);
  DiffPoly mb = monomial_poly(out.den_mono_ / b.den_mono_);
  // Merge the sorted factor lists, taking the larger multiplicity.
  std::size_t i = 0, j = 0;
  while (i < a.den_.size() || j < b.den_.size()) {
    std::strong_ordering c = std::strong_ordering::equal;
    if (i == a.den_.size()) {
      c = std::strong_ordering::greater;
    } else if (j == b.den_.size()) {
      c = std::strong_ordering::less;
    } else {
      c = compare(a.den_[i].poly, b.den_[j].poly);
    }
    if (c < 0) {
      out.den_.push_back(a.den_[i]);
      mb *= a.den_[i].poly.pow(a.den_[i].exp);
      ++i;
    } else if (c > 0) {
      out.den_.push_back(b.den_[j]);
      ma *= b.den_[j].poly.pow(b.den_[j].exp);
      ++j;
    } else {
      const unsigned ea = a.den_[i].exp, eb = b.den_[j].exp;
      out.den_.push_back({a.den_[i].poly, std::max(ea, eb)});
      if (ea < eb) ma *= a.den_[i].poly.pow(eb - ea);
      if (eb < ea) mb *= b.den_[j].poly.pow(ea - eb);
      ++i;
      ++j;
    }
  }
  out.num_ = a.num_ * ma + b.num_ * mb;
  out.cancel_monomial_content();
  return out;
}

JetQuotient operator-(const JetQuotient& a, const JetQuotient& b) { return a + (-b); }

JetQuotient operator*(const JetQuotient& a, const JetQuotient& b) {
  if (a.is_zero() || b.is_zero()) return JetQuotient();
  JetQuotient out;
  out.num_ = a.num_ * b.num_;
  out.den_mono_ = a.den_mono_ * b.den_mono_;
  out.den_ = a.den_;
  for (const auto& f : b.den_) {
    auto it = std::lower_bound(out.den_.begin(), out.den_.end(), f.poly,
                               [](const JetQuotient::Factor& g, const DiffPoly& p) { return compare(g.poly, p) < 0; });
    if (it != out.den_.end() && it->poly == f.poly) {
      it->exp += f.exp;
    } else {
      out.den_.insert(it, f);
    }
  }
  out.cancel_monomial_content();
  return out;
}

JetQuotient JetQuotient::inverse() const {
  if (is_zero()) throw PoleError("inverse of zero");
  JetQuotient out(den());
  out.add_den_factor(num_, 1);
  out.cancel_monomial_content();
  return out;
}

JetQuotient operator/(const JetQuotient& a, const JetQuotient& b) {
  if (b.is_zero()) throw PoleError("division by zero");
  if (a.is_zero()) return JetQuotient();
  // a * b.den / b.num, keeping b.num as a single denominator factor.
  JetQuotient out = a * JetQuotient(b.den());
  out.add_den_factor(b.num_, 1);
  out.cancel_monomial_content();
  return out;
}

JetQuotient JetQuotient::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  JetQuotient out = *this;
  out.num_ = num_.pow(static_cast<unsigned>(k));
  Monomial m;
  for (int i = 0; i < k; ++i) m = m * den_mono_;
  out.den_mono_ = m;
  for (auto& f : out.den_) f.exp *= static_cast<unsigned>(k);
  if (k == 0) {
    out.den_.clear();
    out.num_ = DiffPoly(1);
  }
  return out;
}

JetQuotient JetQuotient::total_derivative(Dir dir) const {
  auto d = [dir](const DiffPoly& p) { return p.total_derivative(dir); };
  if (is_polynomial()) return JetQuotient(num_.total_derivative(dir));
  // d(n/D) = (n' R - n sum_k e_k g_k' R/g_k) / (D R) with R the radical of D.
  Monomial rad_mono;
  for (const auto& f : den_mono_.factors()) rad_mono = rad_mono * Monomial(f.var);
  DiffPoly sum;
  // Monomial factors.
  for (const auto& f : den_mono_.factors()) {
    DiffPoly dv = d(DiffPoly(f.var));
    if (dv.is_zero()) continue;
    DiffPoly rest = monomial_poly(rad_mono / Monomial(f.var));
    for (const auto& g : den_) rest *= g.poly;
    sum += (dv * rest).scaled(f.power);
  }
  for (std::size_t k = 0; k < den_.size(); ++k) {
    DiffPoly dg = d(den_[k].poly);
    if (dg.is_zero()) continue;
    DiffPoly rest = monomial_poly(rad_mono);
    for (std::size_t l = 0; l < den_.size(); ++l)
      if (l != k) rest *= den_[l].poly;
    sum += (dg * rest).scaled(den_[k].exp);
  }
  if (sum.is_zero()) {
    JetQuotient out = *this;
    out.num_ = d(num_);
    out.cancel_monomial_content();
    return out;
  }
  DiffPoly radical = monomial_poly(rad_mono);
  for (const auto& g : den_) radical *= g.poly;
  JetQuotient out;
  out.num_ = d(num_) * radical - num_ * sum;
  out.den_mono_ = den_mono_ * rad_mono;
  out.den_ = den_;
  for (auto& g : out.den_) g.exp += 1;
  out.cancel_monomial_content();
  return out;
}

JetQuotient JetQuotient::partial(const JetVar& v) const {
  if (is_polynomial()) return JetQuotient(num_.partial(v));
  Monomial rad_mono;
  for (const auto& f : den_mono_.factors()) rad_mono = rad_mono * Monomial(f.var);
  DiffPoly sum;
  for (const auto& f : den_mono_.factors()) {
    if (f.var != v) continue;
    DiffPoly rest = monomial_poly(rad_mono / Monomial(f.var));
    for (const auto& g : den_) rest *= g.poly;
    sum += rest.scaled(f.power);
  }
  for (std::size_t k = 0; k < den_.size(); ++k) {
    DiffPoly dg = den_[k].poly.partial(v);
    if (dg.is_zero()) continue;
    DiffPoly rest = monomial_poly(rad_mono);
    for (std::size_t l = 0; l < den_.size(); ++l)
      if (l != k) rest *= den_[l].poly;
    sum += (dg * rest).scaled(den_[k].exp);
  }
  if (sum.is_zero()) {
    JetQuotient out = *this;
    out.num_ = num_.partial(v);
    out.cancel_monomial_content();
    return out;
  }
  DiffPoly radical = monomial_poly(rad_mono);
  for (const auto& g : den_) radical *= g.poly;
  JetQuotient out;
  out.num_ = num_.partial(v) * radical - num_ * sum;
  out.den_mono_ = den_mono_ * rad_mono;
  out.den_ = den_;
  for (auto& g : out.den_) g.exp += 1;
  out.cancel_monomial_content();
  return out;
}

JetQuotient JetQuotient::reduce() const {
  JetQuotient out = *this;
  if (out.num_.is_zero()) {
    out.cancel_monomial_content();
    return out;
  }
  std::vector<Factor> kept;
  for (auto& f : out.den_) {
    while (f.exp > 0) {
      auto q = out.num_.exact_divide(f.poly);
      if (!q) break;
      out.num_ = std::move(*q);
      --f.exp;
    }
    if (f.exp > 0) kept.push_back(std::move(f));
  }
  out.den_ = std::move(kept);
  out.cancel_monomial_content();
  return out;
}

bool JetQuotient::equals(const JetQuotient& other) const { return (*this - other).is_zero(); }

bool JetQuotient::same_form(const JetQuotient& other) const {
  return num_ == other.num_ && den_mono_ == other.den_mono_ && same_factors(den_, other.den_);
}

Rational JetQuotient::eval(const JetPoint& point) const {
  Rational d = DiffPoly(den_mono_, Rational(1)).eval(point);
  for (const auto& f : den_) {
    Rational v = f.poly.eval(point);
    for (unsigned k = 0; k < f.exp; ++k) d *= v;
  }
  if (d == 0) throw PoleError("denominator vanishes at evaluation point");
  return num_.eval(point) / d;
}

double JetQuotient::eval_double(const std::map<JetVar, double>& point) const {
  double d = DiffPoly(den_mono_, Rational(1)).eval_double(point);
  for (const auto& f : den_) {
    double v = f.poly.eval_double(point);
    for (unsigned k = 0; k < f.exp; ++k) d *= v;
  }
  return num_.eval_double(point) / d;
}

std::set<JetVar> JetQuotient::variables() const {
  auto out = num_.variables();
  for (const auto& f : den_mono_.factors()) out.insert(f.var);
  for (const auto& f : den_) {
    auto v = f.poly.variables();
    out.insert(v.begin(), v.end());
  }
  return out;
}

JetQuotient JetQuotient::substitute(const SubstitutionRules& rules) const {
  JetQuotient out = rules.apply(num_);
  if (is_polynomial()) return out;
  for (const auto& f : den_mono_.factors()) {
    auto val = rules.lookup(f.var);
    JetQuotient base = val ? *val : JetQuotient(DiffPoly(f.var));
    for (unsigned k = 0; k < f.power; ++k) out = out / base;
  }
  for (const auto& f : den_) {
    JetQuotient s = rules.apply(f.poly);
    if (s.is_polynomial()) {
      if (s.num_.is_zero()) throw PoleError("substitution annihilates a denominator factor");
      out.add_den_factor(s.num_, f.exp);
      out.cancel_monomial_content();
    } else {
      for (unsigned k = 0; k < f.exp; ++k) out = out / s;
    }
  }
  return out;
}

JetQuotient JetQuotient::compose(const std::map<JetVar, DiffPoly>& values) const {
  JetQuotient out(num_.compose(values));
  for (const auto& f : den_mono_.factors())
    out.add_den_factor(DiffPoly(f.var).compose(values), f.power);
  for (const auto& f : den_) out.add_den_factor(f.poly.compose(values), f.exp);
  out.cancel_monomial_content();
  return out;
}

std::string JetQuotient::str() const {
  if (is_polynomial()) return num_.str();
  std::ostringstream os;
  os << "(" << num_.str() << ")/(";
  bool first = true;
  for (const auto& f : den_mono_.factors()) {
    if (!first) os << "*";
    first = false;
    os << f.var.str();
    if (f.power > 1) os << "^" << f.power;
  }
  for (const auto& f : den_) {
    if (!first) os << "*";
    first = false;
    os << "(" << f.poly.str() << ")";
    if (f.exp > 1) os << "^" << f.exp;
  }
  os << ")";
  return os.str();
}

// ---------------------------------------------------------------- rules

SubstitutionRules& SubstitutionRules::set(const JetVar& base, JetQuotient value) {
  rules_.push_back({base, std::move(value)});
  cache_.clear();
  return *this;
}

std::optional<JetQuotient> SubstitutionRules::lookup(const JetVar& v) const {
  if (auto it = cache_.find(v); it != cache_.end()) return it->second;
  for (const auto& r : rules_)
    if (r.base == v) return r.value;
  for (const auto& r : rules_) {
    if (r.base.field != v.field) continue;
    bool above = true;
    for (int k = 0; k < 4; ++k) above = above && v.d[k] >= r.base.d[k];
    if (!above) continue;
    if (!prolong_) {
      throw CoverageError("jet " + v.str() + " needs prolongation of the rule for " + r.base.str());
    }
    JetQuotient value = r.value;
    for (Dir dir : kAllDirs) {
      const int k = static_cast<int>(dir);
      for (int n = r.base.d[k]; n < v.d[k]; ++n) value = value.total_derivative(dir);
    }
    cache_.emplace(v, value);
    return value;
  }
  return std::nullopt;
}

JetQuotient SubstitutionRules::apply(const DiffPoly& e) const {
  if (rules_.empty()) return JetQuotient(e);
  struct Bucket {
    JetQuotient den_holder;  // numerator 1, denominator of the bucket
    std::vector<DiffPoly::Term> terms;
  };
  std::vector<DiffPoly::Term> untouched;
  std::vector<Bucket> buckets;
  std::map<std::pair<JetVar, unsigned>, JetQuotient> powers;

  for (const auto& t : e.terms()) {
    Monomial keep;
    std::optional<JetQuotient> acc;
    for (const auto& f : t.mono.factors()) {
      auto val = lookup(f.var);
      if (!val) {
        keep = keep * Monomial(f.var, f.power);
        continue;
      }
      auto key = std::make_pair(f.var, f.power);
      auto it = powers.find(key);
      if (it == powers.end()) it = powers.emplace(key, val->pow(static_cast<int>(f.power))).first;
      acc = acc ? (*acc * it->second) : it->second;
    }
    if (!acc) {
      untouched.push_back(t);
      continue;
    }
    JetQuotient term = *acc * JetQuotient(DiffPoly(keep, t.coeff));
    if (term.is_zero()) continue;
    Bucket* target = nullptr;
    for (auto& b : buckets) {
      if (b.den_holder.den_mono_ == term.den_mono_ && same_factors(b.den_holder.den_, term.den_)) {
        target = &b;
        break;
      }
    }
    if (!target) {
      Bucket b;
      b.den_holder = term;
      b.den_holder.num_ = DiffPoly(1);
      buckets.push_back(std::move(b));
      target = &buckets.back();
    }
    target->terms.insert(target->terms.end(), term.num_.terms().begin(), term.num_.terms().end());
  }
  JetQuotient out(DiffPoly::from_terms(std::move(untouched)));
  for (auto& b : buckets) {
    JetQuotient q = b.den_holder;
    q.num_ = DiffPoly::from_terms(std::move(b.terms));
    q.cancel_monomial_content();
    out += q;
  }
  return out;
}

}  // namespace contactlax
