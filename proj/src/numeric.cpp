#include "contactlax/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "contactlax/errors.hpp"

namespace contactlax {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kOverflow = 1e8;

bool is_t_jet(const JetVar& v) { return v.d[3] > 0; }

}  // namespace

// ---------------------------------------------------------------- Program

int Program::push(Instr i) {
  code_.push_back(i);
  return static_cast<int>(code_.size()) - 1;
}

int Program::input(const JetVar& v) {
  auto it = input_index_.find(v);
  if (it != input_index_.end()) return it->second;
  int idx = static_cast<int>(inputs_.size());
  inputs_.push_back(v);
  input_index_.emplace(v, idx);
  return idx;
}

int Program::power(const JetVar& v, unsigned k) {
  if (k == 1) {
    auto it = load_reg_.find(v);
    if (it != load_reg_.end()) return it->second;
    int r = push({Op::input, input(v), 0, 0.0});
    load_reg_.emplace(v, r);
    return r;
  }
  auto key = std::make_pair(v, k);
  auto it = pow_reg_.find(key);
  if (it != pow_reg_.end()) return it->second;
  int lo = power(v, k / 2);
  int r = push({Op::mul, lo, k % 2 ? power(v, k - k / 2) : lo, 0.0});
  pow_reg_.emplace(key, r);
  return r;
}

int Program::emit(const DiffPoly& p) {
  if (p.is_zero()) return push({Op::constant, 0, 0, 0.0});
  int acc = -1;
  for (const auto& t : p.terms()) {
    int prod = -1;
    for (const auto& f : t.mono.factors()) {
      int r = power(f.var, f.power);
      prod = prod < 0 ? r : push({Op::mul, prod, r, 0.0});
    }
    double c = t.coeff.get_d();
    int term;
    if (prod < 0)
      term = push({Op::constant, 0, 0, c});
    else if (c == 1.0)
      term = prod;
    else
      term = push({Op::scale, prod, 0, c});
    acc = acc < 0 ? term : push({Op::add, acc, term, 0.0});
  }
  return acc;
}

int Program::emit(const JetQuotient& q) {
  int n = emit(q.num());
  if (q.is_polynomial()) return n;
  return push({Op::div, n, emit(q.den()), 0.0});
}

int Program::sub(int a, int b) { return push({Op::sub, a, b, 0.0}); }

void Program::run(const double* in, double* regs) const {
  const std::size_t n = code_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Instr& c = code_[i];
    switch (c.op) {
      case Op::input: regs[i] = in[c.a]; break;
      case Op::constant: regs[i] = c.c; break;
      case Op::add: regs[i] = regs[c.a] + regs[c.b]; break;
      case Op::sub: regs[i] = regs[c.a] - regs[c.b]; break;
      case Op::mul: regs[i] = regs[c.a] * regs[c.b]; break;
      case Op::div: regs[i] = regs[c.a] / regs[c.b]; break;
      case Op::scale: regs[i] = c.c * regs[c.a]; break;
    }
  }
}

// ---------------------------------------------------------- CompiledSystem

CompiledSystem compile_system(const PDESystem& sys) {
  if (sys.frame != Frame::XYZT) throw CompileError("system is not in (X, Y, Z, T) form");
  if (sys.equations.size() != sys.unknowns.size())
    throw CompileError("system is not square: " + std::to_string(sys.equations.size()) + " equations, " +
                       std::to_string(sys.unknowns.size()) + " unknowns");
  CompiledSystem cs;
  cs.unknowns_ = sys.unknowns;
  const std::size_t N = sys.unknowns.size();
  std::vector<JetVar> tjets;
  for (const auto& u : sys.unknowns) tjets.emplace_back(u, unit(Dir::t));

  // T-jets first so that equations_at can fill them by position.
  for (const auto& tj : tjets) cs.program_.input(tj);

  std::vector<DiffPoly> A(N * N), R(N);
  for (std::size_t i = 0; i < N; ++i) {
    const JetQuotient& e = sys.equations[i];
    if (!e.is_polynomial()) throw CompileError("equation " + std::to_string(i) + " has a denominator");
    const DiffPoly& p = e.num();
    for (const auto& v : p.variables()) {
      if (v.field.role() == Role::independent) continue;
      if (std::find(sys.unknowns.begin(), sys.unknowns.end(), v.field) == sys.unknowns.end())
        throw CompileError("jet " + v.str() + " is not a jet of an unknown");
      if (is_t_jet(v) && v.d != unit(Dir::t))
        throw CompileError("jet " + v.str() + " is a higher or mixed T-derivative");
    }
    for (const auto& t : p.terms()) {
      unsigned deg = 0;
      for (const auto& f : t.mono.factors())
        if (is_t_jet(f.var)) deg += f.power;
      if (deg > 1) throw CompileError("equation " + std::to_string(i) + " is nonlinear in T-derivatives");
    }
    R[i] = p.filter([](const Monomial& m) {
      return std::none_of(m.factors().begin(), m.factors().end(), [](const auto& f) { return is_t_jet(f.var); });
    });
    for (std::size_t j = 0; j < N; ++j) A[i * N + j] = p.partial(tjets[j]);
  }
  for (const auto& a : A) cs.a_regs_.push_back(cs.program_.emit(a));
  for (const auto& r : R) cs.r_regs_.push_back(cs.program_.emit(r));

  const auto& poles = sys.provenance.poles;
  std::vector<int> pr;
  for (const auto& s : poles) pr.push_back(cs.program_.emit(s));
  for (std::size_t i = 0; i < pr.size(); ++i)
    for (std::size_t k = i + 1; k < pr.size(); ++k) cs.pole_regs_.push_back(cs.program_.sub(pr[i], pr[k]));

  // Residual program on the original-frame equations; needs at most one
  // y- or t-derivative per jet.
  PDESystem orig = ck_inverse(sys);
  bool ok = true;
  for (const auto& e : orig.equations)
    for (const auto& v : e.variables())
      if (v.field.role() != Role::independent && v.d[1] + v.d[3] > 1) ok = false;
  if (ok) {
    for (const auto& e : orig.equations) cs.original_regs_.push_back(cs.original_.emit(e));
    cs.has_original_ = true;
  }
  return cs;
}

std::size_t CompiledSystem::register_count() const { return std::max(program_.size(), original_.size()) + 1; }

void CompiledSystem::eval_point(const double* jets, double* A, double* R, double* pole_gaps, double* regs) const {
  program_.run(jets, regs);
  const std::size_t N = size();
  if (A)
    for (std::size_t k = 0; k < N * N; ++k) A[k] = regs[a_regs_[k]];
  if (R)
    for (std::size_t k = 0; k < N; ++k) R[k] = regs[r_regs_[k]];
  if (pole_gaps)
    for (std::size_t k = 0; k < pole_regs_.size(); ++k) pole_gaps[k] = regs[pole_regs_[k]];
}

bool CompiledSystem::solve_point(const double* jets, const double* f, double* uT, double* regs) const {
  const std::size_t N = size();
  double A[64], b[8];
  if (N > 8) throw CompileError("more than 8 unknowns");
  eval_point(jets, A, b, nullptr, regs);
  double scale = 0.0;
  for (std::size_t k = 0; k < N * N; ++k) scale = std::max(scale, std::abs(A[k]));
  for (std::size_t i = 0; i < N; ++i) b[i] = (f ? f[i] : 0.0) - b[i];
  if (scale == 0.0 || !std::isfinite(scale)) return false;
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < N; ++r)
      if (std::abs(A[r * N + c]) > std::abs(A[piv * N + c])) piv = r;
    if (std::abs(A[piv * N + c]) < 1e-13 * scale) return false;
    if (piv != c) {
      for (std::size_t k = 0; k < N; ++k) std::swap(A[c * N + k], A[piv * N + k]);
      std::swap(b[c], b[piv]);
    }
    for (std::size_t r = c + 1; r < N; ++r) {
      double m = A[r * N + c] / A[c * N + c];
      if (m == 0.0) continue;
      for (std::size_t k = c; k < N; ++k) A[r * N + k] -= m * A[c * N + k];
      b[r] -= m * b[c];
    }
  }
  for (std::size_t i = N; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < N; ++k) s -= A[i * N + k] * uT[k];
    uT[i] = s / A[i * N + i];
  }
  return true;
}

std::vector<double> CompiledSystem::equations_at(const std::map<JetVar, double>& point) const {
  std::vector<double> in;
  for (const auto& v : program_.inputs()) {
    auto it = point.find(v);
    if (it == point.end()) throw CoverageError("no value for " + v.str());
    in.push_back(it->second);
  }
  std::vector<double> regs(register_count());
  const std::size_t N = size();
  std::vector<double> A(N * N), R(N);
  eval_point(in.data(), A.data(), R.data(), nullptr, regs.data());
  std::vector<double> out(N);
  for (std::size_t i = 0; i < N; ++i) {
    out[i] = R[i];
    for (std::size_t j = 0; j < N; ++j) out[i] += A[i * N + j] * in[j];
  }
  return out;
}

void CompiledSystem::eval_original(const double* jets, double* out, double* regs) const {
  original_.run(jets, regs);
  for (std::size_t i = 0; i < original_regs_.size(); ++i) out[i] = regs[original_regs_[i]];
}

// -------------------------------------------------------------------- Grid

std::string spatial_name(Spatial s) { return s == Spatial::spectral ? "spectral" : "fd2"; }

Spatial parse_spatial(std::string_view s) {
  if (s == "spectral") return Spatial::spectral;
  if (s == "fd2") return Spatial::fd2;
  throw ParameterError("unknown spatial scheme '" + std::string(s) + "'");
}

Grid::Grid(std::array<int, 3> dims, std::size_t nfields) : n(dims) {
  for (int d : n)
    if (d < 8) throw ParameterError("grid needs at least 8 points per direction");
  fields.assign(nfields, std::vector<double>(points(), 0.0));
}

double Grid::spacing(int d) const { return kTwoPi / n[d]; }

std::array<double, 3> Grid::coord(std::size_t idx) const {
  std::size_t k = idx % n[2];
  std::size_t j = (idx / n[2]) % n[1];
  std::size_t i = idx / (static_cast<std::size_t>(n[1]) * n[2]);
  return {i * spacing(0), j * spacing(1), k * spacing(2)};
}

namespace {

std::vector<double> spectral_matrix(int N) {
  if (N % 2) throw ParameterError("spectral derivative needs an even number of points");
  std::vector<double> D(static_cast<std::size_t>(N) * N, 0.0);
  const double h = kTwoPi / N;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) {
        int k = i - j;
        D[i * N + j] = 0.5 * ((k % 2) ? -1.0 : 1.0) / std::tan(k * h / 2.0);
      }
  return D;
}

void derivative_once(const Grid& g, const double* u, int d, Spatial s, double* out) {
  const int N = g.n[d];
  const std::size_t stride = d == 0 ? static_cast<std::size_t>(g.n[1]) * g.n[2] : d == 1 ? g.n[2] : 1;
  const std::size_t total = g.points();
  std::vector<double> D;
  if (s == Spatial::spectral) D = spectral_matrix(N);
  const double inv2h = 1.0 / (2.0 * g.spacing(d));
  std::vector<double> line(N), res(N);
  for (std::size_t base = 0; base < total; ++base) {
    // base is the first point of a line iff its d-th coordinate is zero
    if ((base / stride) % N != 0) continue;
    // Shift by the first value so that constant lines differentiate to an
    // exact zero.
    const double shift = u[base];
    for (int i = 0; i < N; ++i) line[i] = u[base + i * stride] - shift;
    if (s == Spatial::spectral) {
      for (int i = 0; i < N; ++i) {
        double acc = 0.0;
        const double* row = &D[static_cast<std::size_t>(i) * N];
        for (int j = 0; j < N; ++j) acc += row[j] * line[j];
        res[i] = acc;
      }
    } else {
      for (int i = 0; i < N; ++i) res[i] = (line[(i + 1) % N] - line[(i + N - 1) % N]) * inv2h;
    }
    for (int i = 0; i < N; ++i) out[base + i * stride] = res[i];
  }
}

}  // namespace

void differentiate(const Grid& g, const std::vector<double>& u, int d, int k, Spatial s, std::vector<double>& out) {
  out = u;
  std::vector<double> tmp(u.size());
  for (int i = 0; i < k; ++i) {
    derivative_once(g, out.data(), d, s, tmp.data());
    out.swap(tmp);
  }
}

// ---------------------------------------------------------- initial data

double FieldProfile::jet(const MultiIndex& d, const std::array<double, 3>& x, double T) const {
  const int n = order(d);
  double v = n == 0 ? constant : 0.0;
  for (const auto& m : modes) {
    const double kappa[4] = {double(m.k[0]), double(m.k[1]), double(m.k[2]), m.omega};
    double f = 1.0;
    for (int i = 0; i < 4; ++i) f *= std::pow(kappa[i], d[i]);
    if (f == 0.0) continue;
    double th = m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2] + m.omega * T + n * std::numbers::pi / 2.0;
    v += f * (m.cos * std::cos(th) + m.sin * std::sin(th));
  }
  return v;
}

InitialData parse_initial_data(const std::string& text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw StructuralError(std::string("initial data: ") + e.what());
  }
  const json& fields = j.contains("fields") ? j.at("fields") : j;
  if (!fields.is_object()) throw StructuralError("initial data must be an object of fields");
  InitialData out;
  try {
    for (const auto& [name, spec] : fields.items()) {
      FieldProfile p;
      if (spec.is_number()) {
        p.constant = spec.get<double>();
      } else {
        p.constant = spec.value("constant", 0.0);
        if (spec.contains("fourier"))
          for (const auto& m : spec.at("fourier")) {
            Mode md;
            md.k = m.at("k").get<std::array<int, 3>>();
            md.omega = m.value("omega", 0.0);
            md.cos = m.value("cos", 0.0);
            md.sin = m.value("sin", 0.0);
            p.modes.push_back(md);
          }
      }
      out.emplace(name, std::move(p));
    }
  } catch (const json::exception& e) {
    throw StructuralError(std::string("initial data: ") + e.what());
  }
  return out;
}

std::string initial_data_json(const InitialData& data) {
  nlohmann::json f = nlohmann::json::object();
  for (const auto& [name, p] : data) {
    nlohmann::json e{{"constant", p.constant}};
    if (!p.modes.empty()) {
      e["fourier"] = nlohmann::json::array();
      for (const auto& m : p.modes)
        e["fourier"].push_back({{"k", m.k}, {"omega", m.omega}, {"cos", m.cos}, {"sin", m.sin}});
    }
    f[name] = e;
  }
  return nlohmann::json{{"fields", f}}.dump(2);
}

void fill_grid(Grid& g, const CompiledSystem& cs, const InitialData& data, double T) {
  g.fields.assign(cs.size(), std::vector<double>(g.points()));
  for (std::size_t u = 0; u < cs.size(); ++u) {
    auto it = data.find(cs.unknowns()[u].str());
    if (it == data.end()) throw ParameterError("no initial data for " + cs.unknowns()[u].str());
    for (std::size_t p = 0; p < g.points(); ++p) g.fields[u][p] = it->second.jet({}, g.coord(p), T);
  }
}

// ------------------------------------------------------------- integrator

namespace {

class JetCache {
 public:
  JetCache(const Grid& g, const CompiledSystem& cs, Spatial s) : g_(g), cs_(cs), s_(s) {
    for (int d = 0; d < 3; ++d) {
      coords_[d].resize(g.points());
      for (std::size_t p = 0; p < g.points(); ++p) coords_[d][p] = g.coord(p)[d];
    }
  }

  void reset(const std::vector<std::vector<double>>* fields) {
    fields_ = fields;
    cache_.clear();
  }

  const std::vector<double>& coord(int d) const { return coords_[d]; }

  /// Spatial jet (d[3] must be zero) of unknown u.
  const std::vector<double>& get(std::size_t u, MultiIndex d) {
    if (order(d) == 0) return (*fields_)[u];
    auto key = std::make_pair(u, d);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    int dir = d[0] ? 0 : d[1] ? 1 : 2;
    MultiIndex lower = d;
    --lower[dir];
    std::vector<double> out(g_.points());
    derivative_once(g_, get(u, lower).data(), dir, s_, out.data());
    return cache_.emplace(key, std::move(out)).first->second;
  }

 private:
  const Grid& g_;
  const CompiledSystem& cs_;
  Spatial s_;
  const std::vector<std::vector<double>>* fields_ = nullptr;
  std::map<std::pair<std::size_t, MultiIndex>, std::vector<double>> cache_;
  std::array<std::vector<double>, 3> coords_;
};

std::size_t unknown_index(const CompiledSystem& cs, const FieldId& f) {
  auto it = std::find(cs.unknowns().begin(), cs.unknowns().end(), f);
  return static_cast<std::size_t>(it - cs.unknowns().begin());
}

struct Stepper {
  const CompiledSystem& cs;
  const Grid& grid;
  const IntegrateOptions& opt;
  JetCache cache;
  JetCache aux;  // second cache for the residual's time differences
  std::vector<double> regs;
  std::vector<double> tvals;
  long step = 0;

  Stepper(const CompiledSystem& c, const Grid& g, const IntegrateOptions& o)
      : cs(c), grid(g), opt(o), cache(g, c, o.spatial), aux(g, c, o.spatial), regs(c.register_count()) {}

  /// Pointers to the input arrays of the main program (T-jets excluded).
  std::vector<const double*> inputs(JetCache& jc, double T) {
    const auto& jets = cs.jets();
    std::vector<const double*> ptr(jets.size(), nullptr);
    tvals.assign(grid.points(), T);
    for (std::size_t k = cs.size(); k < jets.size(); ++k) {
      const JetVar& v = jets[k];
      if (v.field.role() == Role::independent) {
        Dir dir = v.field.coordinate_dir();
        ptr[k] = dir == Dir::t ? tvals.data() : jc.coord(static_cast<int>(dir)).data();
        if (v.order() > 0) throw CompileError("derivative of a coordinate in a compiled system");
      } else {
        ptr[k] = jc.get(unknown_index(cs, v.field), v.d).data();
      }
    }
    return ptr;
  }

  void rhs(const std::vector<std::vector<double>>& u, double T, std::vector<std::vector<double>>& out) {
    cache.reset(&u);
    auto ptr = inputs(cache, T);
    const std::size_t J = ptr.size(), N = cs.size();
    std::vector<double> in(J, 0.0), f(N, 0.0), uT(N);
    out.assign(N, std::vector<double>(grid.points()));
    for (std::size_t p = 0; p < grid.points(); ++p) {
      for (std::size_t k = N; k < J; ++k) in[k] = ptr[k][p];
      if (opt.forcing) opt.forcing(grid.coord(p), T, f.data());
      if (!cs.solve_point(in.data(), opt.forcing ? f.data() : nullptr, uT.data(), regs.data()))
        throw NumericalAbort("T-jet matrix singular at grid point " + std::to_string(p), step);
      for (std::size_t i = 0; i < N; ++i) out[i][p] = uT[i];
    }
  }

  double min_pole_gap(const std::vector<std::vector<double>>& u, double T) {
    if (cs.pole_pairs() == 0) return std::numeric_limits<double>::infinity();
    cache.reset(&u);
    auto ptr = inputs(cache, T);
    const std::size_t J = ptr.size(), N = cs.size();
    std::vector<double> in(J, 0.0), gaps(cs.pole_pairs());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < grid.points(); ++p) {
      for (std::size_t k = N; k < J; ++k) in[k] = ptr[k][p];
      cs.eval_point(in.data(), nullptr, nullptr, gaps.data(), regs.data());
      for (double g : gaps) best = std::min(best, std::abs(g));
    }
    return best;
  }

  /// RMS of the original-frame equations at the midpoint of a step, with
  /// the T-derivative taken as a centred difference of the two states.
  double residual(const std::vector<std::vector<double>>& u0, const std::vector<std::vector<double>>& u1, double T,
                  double dt) {
    const std::size_t N = cs.size(), P = grid.points();
    std::vector<std::vector<double>> mid(N, std::vector<double>(P)), dT(N, std::vector<double>(P));
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t p = 0; p < P; ++p) {
        mid[i][p] = 0.5 * (u0[i][p] + u1[i][p]);
        dT[i][p] = (u1[i][p] - u0[i][p]) / dt;
      }
    const double Tm = T + 0.5 * dt;
    cache.reset(&mid);
    aux.reset(&dT);
    const auto& jets = cs.original_jets();
    // Each original jet is a combination of at most two arrays.
    std::vector<const double*> a(jets.size(), nullptr), b(jets.size(), nullptr);
    std::vector<double> sign(jets.size(), 0.0);
    std::vector<double> yv(P), tv(P);
    for (std::size_t p = 0; p < P; ++p) {
      yv[p] = 0.5 * (Tm + cache.coord(1)[p]);
      tv[p] = 0.5 * (Tm - cache.coord(1)[p]);
    }
    for (std::size_t k = 0; k < jets.size(); ++k) {
      const JetVar& v = jets[k];
      if (v.field.role() == Role::independent) {
        Dir dir = v.field.coordinate_dir();
        a[k] = dir == Dir::y ? yv.data() : dir == Dir::t ? tv.data() : cache.coord(static_cast<int>(dir)).data();
        continue;
      }
      std::size_t u = unknown_index(cs, v.field);
      MultiIndex sp{v.d[0], 0, v.d[2], 0};
      if (v.d[1] + v.d[3] == 0) {
        a[k] = cache.get(u, sp).data();
      } else {
        a[k] = aux.get(u, sp).data();
        MultiIndex spy = sp;
        spy[1] = 1;
        b[k] = cache.get(u, spy).data();
        sign[k] = v.d[1] ? 1.0 : -1.0;
      }
    }
    std::vector<double> in(jets.size()), out(N), f(N, 0.0);
    double sum = 0.0;
    for (std::size_t p = 0; p < P; ++p) {
      for (std::size_t k = 0; k < jets.size(); ++k) in[k] = a[k][p] + (b[k] ? sign[k] * b[k][p] : 0.0);
      cs.eval_original(in.data(), out.data(), regs.data());
      if (opt.forcing) opt.forcing(grid.coord(p), Tm, f.data());
      for (std::size_t i = 0; i < N; ++i) {
        double r = out[i] - f[i];
        sum += r * r;
      }
    }
    return std::sqrt(sum / double(P * N));
  }
};

double max_abs(const std::vector<std::vector<double>>& u, long step) {
  double m = 0.0;
  for (const auto& f : u)
    for (double x : f) {
      if (!std::isfinite(x)) throw NumericalAbort("non-finite field value", step);
      m = std::max(m, std::abs(x));
    }
  if (m > kOverflow) throw NumericalAbort("field overflow", step);
  return m;
}

}  // namespace

Trajectory integrate(const CompiledSystem& cs, Grid grid, const IntegrateOptions& opt) {
  if (grid.fields.size() != cs.size()) throw ParameterError("grid does not carry one array per unknown");
  if (opt.dt <= 0.0 || opt.steps < 0) throw ParameterError("dt must be positive and steps non-negative");
  Stepper st(cs, grid, opt);
  Trajectory tr;
  auto& u = grid.fields;
  const std::size_t N = cs.size(), P = grid.points();
  double T = opt.T0;

  auto record = [&](MonitorRow row) {
    tr.monitors.push_back(row);
    if (opt.on_monitor) opt.on_monitor(row);
  };
  auto guard = [&](double gap) {
    if (gap < opt.pole_guard)
      throw NumericalAbort("pole distance " + std::to_string(gap) + " below guard", st.step);
  };

  MonitorRow first{0, T, st.min_pole_gap(u, T), std::numeric_limits<double>::quiet_NaN(), max_abs(u, 0)};
  record(first);
  guard(first.min_pole_dist);

  std::vector<std::vector<double>> k1, k2, k3, k4, tmp(N, std::vector<double>(P)), prev;
  const double dt = opt.dt;
  auto axpy = [&](const std::vector<std::vector<double>>& k, double c) {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t p = 0; p < P; ++p) tmp[i][p] = u[i][p] + c * k[i][p];
  };
  const bool want_residual = opt.residual && cs.has_residual_program();
  for (long s = 1; s <= opt.steps; ++s) {
    st.step = s;
    st.rhs(u, T, k1);
    axpy(k1, dt / 2);
    st.rhs(tmp, T + dt / 2, k2);
    axpy(k2, dt / 2);
    st.rhs(tmp, T + dt / 2, k3);
    axpy(k3, dt);
    st.rhs(tmp, T + dt, k4);
    if (want_residual) prev = u;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t p = 0; p < P; ++p) u[i][p] += dt / 6.0 * (k1[i][p] + 2.0 * k2[i][p] + 2.0 * k3[i][p] + k4[i][p]);
    MonitorRow row;
    row.step = s;
    row.max_field = max_abs(u, s);
    row.residual_l2 = want_residual ? st.residual(prev, u, T, dt) : std::numeric_limits<double>::quiet_NaN();
    T = opt.T0 + s * dt;
    row.T = T;
    row.min_pole_dist = st.min_pole_gap(u, T);
    record(row);
    guard(row.min_pole_dist);
  }
  tr.state = std::move(grid);
  return tr;
}

std::string monitor_csv(const std::vector<MonitorRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "step,T,min_pole_dist,residual_L2,max_field\n";
  for (const auto& r : rows)
    os << r.step << ',' << r.T << ',' << r.min_pole_dist << ',' << r.residual_l2 << ',' << r.max_field << '\n';
  return os.str();
}

// ----------------------------------------------------- manufactured runs

Forcing manufactured_forcing(const CompiledSystem& cs, const InitialData& exact) {
  std::vector<std::pair<const FieldProfile*, MultiIndex>> src;
  std::vector<int> coord_dir;
  for (const auto& v : cs.jets()) {
    if (v.field.role() == Role::independent) {
      src.emplace_back(nullptr, MultiIndex{});
      coord_dir.push_back(static_cast<int>(v.field.coordinate_dir()));
      continue;
    }
    auto it = exact.find(v.field.str());
    if (it == exact.end()) throw ParameterError("no manufactured profile for " + v.field.str());
    src.emplace_back(&it->second, v.d);
    coord_dir.push_back(-1);
  }
  const std::size_t N = cs.size();
  auto regs = std::make_shared<std::vector<double>>(cs.register_count());
  return [&cs, src, coord_dir, regs, N](const std::array<double, 3>& x, double T, double* f) {
    double in[128];
    for (std::size_t k = 0; k < src.size(); ++k)
      in[k] = src[k].first ? src[k].first->jet(src[k].second, x, T) : coord_dir[k] == 3 ? T : x[coord_dir[k]];
    double A[64], R[8];
    cs.eval_point(in, A, R, nullptr, regs->data());
    for (std::size_t i = 0; i < N; ++i) {
      f[i] = R[i];
      for (std::size_t j = 0; j < N; ++j) f[i] += A[i * N + j] * in[j];
    }
  };
}

namespace {

ConvergenceRun run_manufactured(const CompiledSystem& cs, const InitialData& exact, int n, double T_end, long steps,
                                Spatial spatial) {
  Grid g({n, n, n}, cs.size());
  fill_grid(g, cs, exact, 0.0);
  IntegrateOptions opt;
  opt.steps = steps;
  opt.dt = T_end / steps;
  opt.spatial = spatial;
  opt.forcing = manufactured_forcing(cs, exact);
  opt.residual = true;
  auto tr = integrate(cs, std::move(g), opt);
  Grid ref({n, n, n}, cs.size());
  fill_grid(ref, cs, exact, T_end);
  double err = 0.0;
  for (std::size_t i = 0; i < cs.size(); ++i)
    for (std::size_t p = 0; p < ref.points(); ++p)
      err = std::max(err, std::abs(tr.state.fields[i][p] - ref.fields[i][p]));
  ConvergenceRun run{n, opt.dt, steps, err, 0.0};
  for (const auto& m : tr.monitors)
    if (std::isfinite(m.residual_l2)) run.max_residual = std::max(run.max_residual, m.residual_l2);
  return run;
}

}  // namespace

ConvergenceReport temporal_convergence(const CompiledSystem& cs, const InitialData& exact, int n, double T_end,
                                       const std::vector<long>& steps, Spatial spatial) {
  ConvergenceReport rep{"temporal", spatial, {}, {}};
  for (long s : steps) rep.runs.push_back(run_manufactured(cs, exact, n, T_end, s, spatial));
  for (std::size_t k = 0; k + 1 < rep.runs.size(); ++k)
    rep.orders.push_back(std::log(rep.runs[k].error / rep.runs[k + 1].error) /
                         std::log(rep.runs[k].dt / rep.runs[k + 1].dt));
  return rep;
}

ConvergenceReport spatial_convergence(const CompiledSystem& cs, const InitialData& exact, const std::vector<int>& ns,
                                      double T_end, long steps, Spatial spatial) {
  ConvergenceReport rep{"spatial", spatial, {}, {}};
  for (int n : ns) rep.runs.push_back(run_manufactured(cs, exact, n, T_end, steps, spatial));
  for (std::size_t k = 0; k + 1 < rep.runs.size(); ++k)
    rep.orders.push_back(std::log(rep.runs[k].error / rep.runs[k + 1].error) /
                         std::log(double(rep.runs[k + 1].n) / rep.runs[k].n));
  return rep;
}

ConvergenceReport residual_refinement(const CompiledSystem& cs, const InitialData& data, const std::vector<int>& ns,
                                      double T_end, long base_steps, Spatial spatial) {
  if (!cs.has_residual_program()) throw CompileError("system has no original-form residual program");
  ConvergenceReport rep{"residual", spatial, {}, {}};
  for (int n : ns) {
    long steps = static_cast<long>(std::llround(double(base_steps) * n / ns.front()));
    Grid g({n, n, n}, cs.size());
    fill_grid(g, cs, data, 0.0);
    IntegrateOptions opt;
    opt.steps = steps;
    opt.dt = T_end / steps;
    opt.spatial = spatial;
    auto tr = integrate(cs, std::move(g), opt);
    ConvergenceRun run{n, opt.dt, steps, std::numeric_limits<double>::quiet_NaN(), 0.0};
    for (const auto& m : tr.monitors)
      if (std::isfinite(m.residual_l2)) run.max_residual = std::max(run.max_residual, m.residual_l2);
    rep.runs.push_back(run);
  }
  for (std::size_t k = 0; k + 1 < rep.runs.size(); ++k)
    rep.orders.push_back(std::log(rep.runs[k].max_residual / rep.runs[k + 1].max_residual) /
                         std::log(double(rep.runs[k + 1].n) / rep.runs[k].n));
  return rep;
}

bool residual_decreasing(const ConvergenceReport& r) {
  for (std::size_t k = 0; k + 1 < r.runs.size(); ++k)
    if (!(r.runs[k + 1].max_residual < r.runs[k].max_residual)) return false;
  return !r.runs.empty();
}

PDESystem rat11_ck_system() { return ck_transform(derive(make_rat(1, 1), EquationForm::residues)); }

}  // namespace contactlax
