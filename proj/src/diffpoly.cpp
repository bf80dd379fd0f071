#include "contactlax/diffpoly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "contactlax/errors.hpp"

namespace contactlax {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(JetVar v, unsigned power) {
  if (power > 0) f_.push_back({v, power});
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& f : f_) d += f.power;
  return d;
}

unsigned Monomial::degree_in(const JetVar& v) const {
  for (const auto& f : f_)
    if (f.var == v) return f.power;
  return 0;
}

bool Monomial::divides(const Monomial& other) const {
  auto it = other.f_.begin();
  for (const auto& f : f_) {
    while (it != other.f_.end() && it->var < f.var) ++it;
    if (it == other.f_.end() || it->var != f.var || it->power < f.power) return false;
  }
  return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.f_.reserve(a.f_.size() + b.f_.size());
  auto i = a.f_.begin();
  auto j = b.f_.begin();
  while (i != a.f_.end() && j != b.f_.end()) {
    if (i->var < j->var) {
      out.f_.push_back(*i++);
    } else if (j->var < i->var) {
      out.f_.push_back(*j++);
    } else {
      out.f_.push_back({i->var, i->power + j->power});
      ++i;
      ++j;
    }
  }
  out.f_.insert(out.f_.end(), i, a.f_.end());
  out.f_.insert(out.f_.end(), j, b.f_.end());
  return out;
}

Monomial operator/(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto j = b.f_.begin();
  for (const auto& f : a.f_) {
    if (j != b.f_.end() && j->var == f.var) {
      if (j->power > f.power) throw std::logic_error("monomial division not exact");
      if (j->power < f.power) out.f_.push_back({f.var, f.power - j->power});
      ++j;
    } else {
      out.f_.push_back(f);
    }
  }
  if (j != b.f_.end()) throw std::logic_error("monomial division not exact");
  return out;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto j = b.f_.begin();
  for (const auto& f : a.f_) {
    while (j != b.f_.end() && j->var < f.var) ++j;
    if (j != b.f_.end() && j->var == f.var) out.f_.push_back({f.var, std::min(f.power, j->power)});
  }
  return out;
}

Monomial Monomial::lcm(const Monomial& a, const Monomial& b) {
  Monomial out;
  auto i = a.f_.begin();
  auto j = b.f_.begin();
  while (i != a.f_.end() && j != b.f_.end()) {
    if (i->var < j->var) {
      out.f_.push_back(*i++);
    } else if (j->var < i->var) {
      out.f_.push_back(*j++);
    } else {
      out.f_.push_back({i->var, std::max(i->power, j->power)});
      ++i;
      ++j;
    }
  }
  out.f_.insert(out.f_.end(), i, a.f_.end());
  out.f_.insert(out.f_.end(), j, b.f_.end());
  return out;
}

Monomial Monomial::without(const JetVar& v) const {
  Monomial out;
  for (const auto& f : f_)
    if (f.var != v) out.f_.push_back(f);
  return out;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  const std::size_t n = std::min(a.f_.size(), b.f_.size());
  for (std::size_t k = 0; k < n; ++k) {
    const auto& fa = a.f_[k];
    const auto& fb = b.f_[k];
    if (fa.var != fb.var) {
      // The monomial holding the more significant (smaller) variable wins.
      return fa.var < fb.var ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (fa.power != fb.power) return fa.power <=> fb.power;
  }
  return a.f_.size() <=> b.f_.size();
}

// ---------------------------------------------------------------- DiffPoly

namespace {

void combine_sorted(std::vector<DiffPoly::Term>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const DiffPoly::Term& a, const DiffPoly::Term& b) { return a.mono > b.mono; });
  std::size_t w = 0;
  for (std::size_t r = 0; r < terms.size();) {
    std::size_t s = r + 1;
    Rational c = terms[r].coeff;
    while (s < terms.size() && terms[s].mono == terms[r].mono) c += terms[s++].coeff;
    if (c != 0) {
      if (w != r) terms[w].mono = std::move(terms[r].mono);
      terms[w].coeff = c;
      ++w;
    }
    r = s;
  }
  terms.resize(w);
}

}  // namespace

DiffPoly::DiffPoly(const Rational& c) {
  Rational k = c;
  k.canonicalize();
  if (k != 0) terms_.push_back({Monomial(), std::move(k)});
}

DiffPoly::DiffPoly(const JetVar& v) { terms_.push_back({Monomial(v), Rational(1)}); }

DiffPoly::DiffPoly(Monomial m, Rational c) {
  c.canonicalize();
  if (c != 0) terms_.push_back({std::move(m), std::move(c)});
}

DiffPoly DiffPoly::jet(const FieldId& f, MultiIndex d) {
  if (f.role() == Role::independent) {
    const int o = order(d);
    if (o == 0) return DiffPoly(JetVar(f));
    if (o == 1 && d[static_cast<int>(f.coordinate_dir())] == 1) return DiffPoly(1);
    return DiffPoly();
  }
  if (order(d) > kMaxJetOrder) throw std::logic_error("jet order cap exceeded");
  return DiffPoly(JetVar(f, d));
}

DiffPoly DiffPoly::from_terms(std::vector<Term> terms) {
  DiffPoly p;
  combine_sorted(terms);
  p.terms_ = std::move(terms);
  return p;
}

bool DiffPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty());
}

Rational DiffPoly::constant_value() const {
  if (!is_constant()) throw std::logic_error("polynomial is not constant: " + str());
  return terms_.empty() ? Rational(0) : terms_[0].coeff;
}

unsigned DiffPoly::total_degree() const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

unsigned DiffPoly::degree_in(const JetVar& v) const {
  unsigned d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree_in(v));
  return d;
}

std::set<JetVar> DiffPoly::variables() const {
  std::set<JetVar> out;
  for (const auto& t : terms_)
    for (const auto& f : t.mono.factors()) out.insert(f.var);
  return out;
}

bool DiffPoly::contains_field(const FieldId& fid) const {
  return any_variable([&](const JetVar& v) { return v.field == fid; });
}

Monomial DiffPoly::monomial_content() const {
  if (terms_.empty()) return Monomial();
  Monomial g = terms_[0].mono;
  for (std::size_t k = 1; k < terms_.size() && !g.empty(); ++k) g = Monomial::gcd(g, terms_[k].mono);
  return g;
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  DiffPoly out;
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  auto i = a.terms_.begin();
  auto j = b.terms_.begin();
  while (i != a.terms_.end() && j != b.terms_.end()) {
    const auto c = i->mono <=> j->mono;
    if (c > 0) {
      out.terms_.push_back(*i++);
    } else if (c < 0) {
      out.terms_.push_back(*j++);
    } else {
      Rational s = i->coeff + j->coeff;
      if (s != 0) out.terms_.push_back({i->mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  out.terms_.insert(out.terms_.end(), i, a.terms_.end());
  out.terms_.insert(out.terms_.end(), j, b.terms_.end());
  return out;
}

DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) { return a + (-b); }

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  if (a.is_zero() || b.is_zero()) return DiffPoly();
  if (b.is_constant()) return a.scaled(b.constant_value());
  if (a.is_constant()) return b.scaled(a.constant_value());
  std::vector<DiffPoly::Term> prod;
  prod.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) prod.push_back({ta.mono * tb.mono, ta.coeff * tb.coeff});
  return DiffPoly::from_terms(std::move(prod));
}

DiffPoly DiffPoly::scaled(const Rational& c) const {
  if (c == 0) return DiffPoly();
  DiffPoly out = *this;
  for (auto& t : out.terms_) t.coeff *= c;
  return out;
}

DiffPoly DiffPoly::times(const Monomial& m) const {
  DiffPoly out = *this;
  for (auto& t : out.terms_) t.mono = t.mono * m;
  return out;  // multiplication by a monomial preserves the order
}

DiffPoly DiffPoly::divided_by(const Monomial& m) const {
  DiffPoly out = *this;
  for (auto& t : out.terms_) t.mono = t.mono / m;
  return out;
}

DiffPoly DiffPoly::pow(unsigned k) const {
  DiffPoly result(1);
  DiffPoly base = *this;
  while (k > 0) {
    if (k & 1U) result *= base;
    k >>= 1U;
    if (k > 0) base = base * base;
  }
  return result;
}

std::optional<DiffPoly> DiffPoly::exact_divide(const DiffPoly& divisor) const {
  if (divisor.is_zero()) throw PoleError("division by the zero polynomial");
  if (is_zero()) return DiffPoly();
  const auto& lt = divisor.terms_.front();
  const auto& tt = divisor.terms_.back();
  // Leading and trailing terms of a product are the products of the factors' ones.
  if (!lt.mono.divides(terms_.front().mono) || !tt.mono.divides(terms_.back().mono)) {
    return std::nullopt;
  }
  if (divisor.total_degree() > total_degree()) return std::nullopt;

  std::map<Monomial, Rational, std::greater<>> rem;
  for (const auto& t : terms_) rem.emplace(t.mono, t.coeff);
  std::vector<Term> quot;
  while (!rem.empty()) {
    auto top = rem.begin();
    if (!lt.mono.divides(top->first)) return std::nullopt;
    Monomial qm = top->first / lt.mono;
    Rational qc = top->second / lt.coeff;
    for (const auto& dt : divisor.terms_) {
      Monomial m = dt.mono * qm;
      auto [it, inserted] = rem.try_emplace(std::move(m), 0);
      it->second -= dt.coeff * qc;
      if (it->second == 0) rem.erase(it);
    }
    quot.push_back({std::move(qm), std::move(qc)});
  }
  DiffPoly q;
  q.terms_ = std::move(quot);
  return q;
}

DiffPoly DiffPoly::total_derivative(Dir dir) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    for (const auto& f : t.mono.factors()) {
      if (f.var.field.role() == Role::independent) {
        if (f.var.field.coordinate_dir() != dir) continue;
        Monomial rest = t.mono.without(f.var);
        if (f.power > 1) rest = rest * Monomial(f.var, f.power - 1);
        out.push_back({std::move(rest), t.coeff * f.power});
        continue;
      }
      Monomial rest = t.mono.without(f.var);
      if (f.power > 1) rest = rest * Monomial(f.var, f.power - 1);
      out.push_back({rest * Monomial(f.var.bumped(dir)), t.coeff * f.power});
    }
  }
  return from_terms(std::move(out));
}

DiffPoly DiffPoly::partial(const JetVar& v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    const unsigned k = t.mono.degree_in(v);
    if (k == 0) continue;
    Monomial rest = t.mono.without(v);
    if (k > 1) rest = rest * Monomial(v, k - 1);
    out.push_back({std::move(rest), t.coeff * k});
  }
  return from_terms(std::move(out));
}

Rational DiffPoly::eval(const JetPoint& point) const {
  Rational sum = 0;
  for (const auto& t : terms_) {
    Rational prod = t.coeff;
    for (const auto& f : t.mono.factors()) {
      auto it = point.find(f.var);
      if (it == point.end()) throw CoverageError("no value for jet " + f.var.str());
      for (unsigned k = 0; k < f.power; ++k) prod *= it->second;
    }
    sum += prod;
  }
  return sum;
}

double DiffPoly::eval_double(const std::map<JetVar, double>& point) const {
  double sum = 0;
  for (const auto& t : terms_) {
    double prod = t.coeff.get_d();
    for (const auto& f : t.mono.factors()) {
      auto it = point.find(f.var);
      if (it == point.end()) throw CoverageError("no value for jet " + f.var.str());
      for (unsigned k = 0; k < f.power; ++k) prod *= it->second;
    }
    sum += prod;
  }
  return sum;
}

std::vector<DiffPoly> DiffPoly::coefficients_in(const JetVar& v) const {
  std::vector<std::vector<Term>> buckets(degree_in(v) + 1);
  for (const auto& t : terms_) {
    const unsigned k = t.mono.degree_in(v);
    buckets[k].push_back({t.mono.without(v), t.coeff});
  }
  std::vector<DiffPoly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  if (is_zero()) out.clear();
  return out;
}

DiffPoly DiffPoly::compose(const std::map<JetVar, DiffPoly>& values) const {
  std::map<std::pair<JetVar, unsigned>, DiffPoly> powers;
  auto power_of = [&](const JetVar& v, unsigned k) -> const DiffPoly& {
    auto key = std::make_pair(v, k);
    auto it = powers.find(key);
    if (it == powers.end()) it = powers.emplace(key, values.at(v).pow(k)).first;
    return it->second;
  };
  DiffPoly out;
  std::vector<Term> untouched;
  for (const auto& t : terms_) {
    Monomial keep;
    DiffPoly acc(t.coeff);
    bool touched = false;
    for (const auto& f : t.mono.factors()) {
      if (values.count(f.var)) {
        acc *= power_of(f.var, f.power);
        touched = true;
      } else {
        keep = keep * Monomial(f.var, f.power);
      }
    }
    if (!touched) {
      untouched.push_back(t);
    } else {
      out += acc.times(keep);
    }
  }
  return out + from_terms(std::move(untouched));
}

std::string DiffPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    const bool unit = (c == 1);
    if (!unit || t.mono.empty()) {
      os << c.get_str();
      if (!t.mono.empty()) os << "*";
    }
    bool firstf = true;
    for (const auto& f : t.mono.factors()) {
      if (!firstf) os << "*";
      firstf = false;
      os << f.var.str();
      if (f.power > 1) os << "^" << f.power;
    }
  }
  return os.str();
}

bool operator==(const DiffPoly& a, const DiffPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t k = 0; k < a.terms_.size(); ++k) {
    if (a.terms_[k].coeff != b.terms_[k].coeff || !(a.terms_[k].mono == b.terms_[k].mono)) return false;
  }
  return true;
}

std::strong_ordering compare(const DiffPoly& a, const DiffPoly& b) {
  const std::size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (auto c = a.terms_[k].mono <=> b.terms_[k].mono; c != 0) return c;
    const int cc = cmp(a.terms_[k].coeff, b.terms_[k].coeff);
    if (cc != 0) return cc < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return a.terms_.size() <=> b.terms_.size();
}

}  // namespace contactlax
