#include "contactlax/expr.hpp"

#include <cctype>

#include "contactlax/errors.hpp"

namespace contactlax {

Expr Expr::number(const Rational& v) {
  Expr e;
  e.op = Op::num;
  e.value = v;
  e.value.canonicalize();
  return e;
}

Expr Expr::jet(const JetVar& v) {
  Expr e;
  e.op = Op::jet;
  e.var = v;
  return e;
}

Expr Expr::add(std::vector<Expr> a) {
  Expr e;
  e.op = Op::add;
  e.args = std::move(a);
  return e;
}

Expr Expr::mul(std::vector<Expr> a) {
  Expr e;
  e.op = Op::mul;
  e.args = std::move(a);
  return e;
}

Expr Expr::power(Expr base, int ex) {
  Expr e;
  e.op = Op::pow;
  e.args.push_back(std::move(base));
  e.exp = ex;
  return e;
}

Expr Expr::diff(Expr inner, Dir d) {
  Expr e;
  e.op = Op::diff;
  e.args.push_back(std::move(inner));
  e.dir = d;
  return e;
}

DiffPoly normalize(const Expr& e) {
  switch (e.op) {
    case Expr::Op::num:
      return DiffPoly(e.value);
    case Expr::Op::jet:
      return DiffPoly::jet(e.var);
    case Expr::Op::add: {
      if (e.args.empty()) throw StructuralError("empty add node");
      DiffPoly s;
      for (const auto& a : e.args) s += normalize(a);
      return s;
    }
    case Expr::Op::mul: {
      if (e.args.empty()) throw StructuralError("empty mul node");
      DiffPoly p(1);
      for (const auto& a : e.args) p *= normalize(a);
      return p;
    }
    case Expr::Op::pow:
      if (e.args.size() != 1) throw StructuralError("pow node needs one base");
      if (e.exp < 0) {
        DiffPoly base = normalize(e.args[0]);
        if (!base.is_constant() || base.is_zero()) {
          throw StructuralError("negative power of a non-constant in a polynomial expression");
        }
        Rational inv = 1 / base.constant_value();
        return DiffPoly(inv).pow(static_cast<unsigned>(-e.exp));
      }
      return normalize(e.args[0]).pow(static_cast<unsigned>(e.exp));
    case Expr::Op::diff:
      if (e.args.size() != 1) throw StructuralError("diff node needs one argument");
      return normalize(e.args[0]).total_derivative(e.dir);
  }
  throw StructuralError("unknown node");
}

JetQuotient to_quotient(const Expr& e) {
  switch (e.op) {
    case Expr::Op::num:
    case Expr::Op::jet:
      return JetQuotient(normalize(e));
    case Expr::Op::add: {
      if (e.args.empty()) throw StructuralError("empty add node");
      JetQuotient s;
      for (const auto& a : e.args) s += to_quotient(a);
      return s;
    }
    case Expr::Op::mul: {
      if (e.args.empty()) throw StructuralError("empty mul node");
      JetQuotient p(1);
      for (const auto& a : e.args) p *= to_quotient(a);
      return p;
    }
    case Expr::Op::pow:
      if (e.args.size() != 1) throw StructuralError("pow node needs one base");
      return to_quotient(e.args[0]).pow(e.exp);
    case Expr::Op::diff:
      if (e.args.size() != 1) throw StructuralError("diff node needs one argument");
      return to_quotient(e.args[0]).total_derivative(e.dir);
  }
  throw StructuralError("unknown node");
}

Rational eval_tree(const Expr& e, const JetPoint& point) {
  switch (e.op) {
    case Expr::Op::num:
      return e.value;
    case Expr::Op::jet: {
      if (e.var.field.role() == Role::independent && e.var.order() > 0) return normalize(e).eval(point);
      auto it = point.find(e.var);
      if (it == point.end()) throw CoverageError("no value for jet " + e.var.str());
      return it->second;
    }
    case Expr::Op::add: {
      Rational s = 0;
      for (const auto& a : e.args) s += eval_tree(a, point);
      return s;
    }
    case Expr::Op::mul: {
      Rational p = 1;
      for (const auto& a : e.args) p *= eval_tree(a, point);
      return p;
    }
    case Expr::Op::pow: {
      Rational b = eval_tree(e.args.at(0), point);
      if (e.exp < 0 && b == 0) throw PoleError("negative power of zero");
      Rational r = 1;
      for (int k = 0; k < std::abs(e.exp); ++k) r *= b;
      return e.exp < 0 ? Rational(1 / r) : r;
    }
    case Expr::Op::diff:
      throw StructuralError("derivative nodes cannot be evaluated pointwise");
  }
  throw StructuralError("unknown node");
}

namespace {

Expr factor_expr(const JetVar& v, int power) {
  Expr j = Expr::jet(v);
  return power == 1 ? j : Expr::power(j, power);
}

Expr term_expr(const DiffPoly::Term& t) {
  std::vector<Expr> args;
  if (t.coeff != 1 || t.mono.empty()) args.push_back(Expr::number(t.coeff));
  for (const auto& f : t.mono.factors()) args.push_back(factor_expr(f.var, static_cast<int>(f.power)));
  if (args.size() == 1) return args[0];
  return Expr::mul(std::move(args));
}

}  // namespace

Expr to_expr(const DiffPoly& p) {
  if (p.is_zero()) return Expr::number(0);
  if (p.size() == 1) return term_expr(p.leading());
  std::vector<Expr> args;
  for (const auto& t : p.terms()) args.push_back(term_expr(t));
  return Expr::add(std::move(args));
}

Expr to_expr(const JetQuotient& q) {
  if (q.is_polynomial()) return to_expr(q.num());
  std::vector<Expr> args{to_expr(q.num())};
  for (const auto& f : q.den_monomial().factors()) args.push_back(factor_expr(f.var, -static_cast<int>(f.power)));
  for (const auto& f : q.den_factors()) args.push_back(Expr::power(to_expr(f.poly), -static_cast<int>(f.exp)));
  return Expr::mul(std::move(args));
}

// ---------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  Parser(std::string_view s, IndexEnv env) : s_(s), env_(std::move(env)) {}

  Expr parse_all() {
    Expr e = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw StructuralError("parse error at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "': " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool accept_str(std::string_view w) {
    skip_ws();
    if (s_.substr(pos_, w.size()) == w) {
      pos_ += w.size();
      return true;
    }
    return false;
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (peek_minus()) {
        ++pos_;
        terms.push_back(Expr::mul({Expr::number(-1), term()}));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms[0] : Expr::add(std::move(terms));
  }

  bool peek_minus() {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == '-';
  }

  Expr term() {
    std::vector<Expr> factors{unary()};
    for (;;) {
      if (accept('*')) {
        factors.push_back(unary());
      } else if (accept('/')) {
        factors.push_back(Expr::power(unary(), -1));
      } else {
        break;
      }
    }
    return factors.size() == 1 ? factors[0] : Expr::mul(std::move(factors));
  }

  Expr unary() {
    if (accept('-')) return Expr::mul({Expr::number(-1), unary()});
    Expr base = atom();
    if (accept('^')) {
      const bool neg = accept('-');
      const int k = integer();
      return Expr::power(std::move(base), neg ? -k : k);
    }
    return base;
  }

  int integer() {
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("expected integer");
    int v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) v = v * 10 + (s_[pos_++] - '0');
    return v;
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_]))) fail("expected identifier");
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '~'))
      ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  int index_value() {
    skip_ws();
    int v = 0;
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = integer();
    } else {
      const std::string name = ident();
      auto it = env_.find(name);
      if (it == env_.end()) fail("unbound index '" + name + "'");
      v = it->second;
    }
    if (accept('+')) v += integer();
    else if (accept('-')) v -= integer();
    return v;
  }

  MultiIndex dirs() {
    MultiIndex d{};
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::string_view("xyzt").find(s_[pos_]) != std::string_view::npos) {
      ++d[static_cast<int>(dir_from_char(s_[pos_]))];
      ++pos_;
    }
    if (pos_ == start) fail("expected derivative directions");
    return d;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return Expr::number(integer());
    if (accept('(')) {
      Expr e = expr();
      expect(')');
      return e;
    }
    const std::string name = ident();
    if (name == "D" && pos_ < s_.size() && s_[pos_] == '_') {
      ++pos_;
      MultiIndex d = dirs();
      expect('(');
      Expr e = expr();
      expect(')');
      for (Dir dir : kAllDirs)
        for (int k = 0; k < d[static_cast<int>(dir)]; ++k) e = Expr::diff(std::move(e), dir);
      return e;
    }
    if (name == "sum") {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '(') return sum();
    }
    std::string full = name;
    if (pos_ < s_.size() && s_[pos_] == '[') {
      ++pos_;
      full += std::to_string(index_value());
      expect(']');
    }
    MultiIndex d{};
    if (pos_ < s_.size() && s_[pos_] == '_') {
      ++pos_;
      d = dirs();
    }
    return Expr::jet(JetVar(FieldId(full), d));
  }

  Expr sum() {
    expect('(');
    const std::string var = ident();
    expect('=');
    const int lo = index_value();
    if (!accept_str("..")) fail("expected '..' in sum range");
    const int hi = index_value();
    expect(':');
    const std::size_t body = pos_;
    std::vector<Expr> terms;
    const auto saved = env_;
    std::size_t end = body;
    for (int k = lo; k <= hi; ++k) {
      env_[var] = k;
      pos_ = body;
      terms.push_back(expr());
      end = pos_;
    }
    if (lo > hi) {
      env_[var] = lo;
      pos_ = body;
      (void)expr();
      end = pos_;
    }
    env_ = saved;
    pos_ = end;
    expect(')');
    if (terms.empty()) return Expr::number(0);
    return terms.size() == 1 ? terms[0] : Expr::add(std::move(terms));
  }

  std::string_view s_;
  IndexEnv env_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, const IndexEnv& env) { return Parser(text, env).parse_all(); }

}  // namespace contactlax
