#include <doctest.h>

#include <cmath>
#include <random>

#include "contactlax/errors.hpp"
#include "contactlax/expr.hpp"
#include "contactlax/numeric.hpp"
#include "random_exprs.hpp"

using namespace contactlax;

namespace {

FieldProfile mode(double c, std::array<int, 3> k, double omega, double co, double si) {
  FieldProfile p;
  p.constant = c;
  p.modes.push_back({k, omega, co, si});
  return p;
}

InitialData smooth_solution() {
  InitialData ex;
  ex["a1"] = mode(1.0, {1, 0, 0}, 1.0, 0.1, 0.0);
  ex["b1"] = mode(1.0, {0, 0, 1}, -1.0, 0.0, 0.1);
  ex["v1"] = mode(0.0, {0, 1, 0}, 0.5, 0.1, 0.0);
  ex["w1"] = mode(2.0, {1, 1, 0}, 1.0, 0.0, 0.1);
  return ex;
}

const CompiledSystem& rat11() {
  static const CompiledSystem cs = compile_system(rat11_ck_system());
  return cs;
}

}  // namespace

TEST_CASE("compiled program agrees with exact polynomial evaluation") {
  std::mt19937_64 rng(7);
  auto pool = testing::small_jet_pool();
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int it = 0; it < 200; ++it) {
    DiffPoly p = normalize(testing::random_tree(rng, 4, pool));
    Program prog;
    int out = prog.emit(p);
    std::map<JetVar, double> pt;
    std::vector<double> in;
    for (const auto& v : prog.inputs()) {
      double x = U(rng);
      pt[v] = x;
      in.push_back(x);
    }
    std::vector<double> regs(prog.size());
    prog.run(in.data(), regs.data());
    double exact = p.eval_double(pt);
    CHECK(std::abs(regs[out] - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
  }
}

TEST_CASE("compiled rat(1,1) system matches the symbolic equations") {
  PDESystem sys = rat11_ck_system();
  const auto& cs = rat11();
  CHECK(cs.size() == 4);
  CHECK(cs.has_residual_program());
  CHECK(cs.pole_pairs() == 1);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int it = 0; it < 100; ++it) {
    std::map<JetVar, double> pt;
    for (const auto& v : cs.jets()) pt[v] = U(rng);
    auto got = cs.equations_at(pt);
    for (std::size_t i = 0; i < sys.equations.size(); ++i) {
      double exact = sys.equations[i].eval_double(pt);
      CHECK(std::abs(got[i] - exact) <= 1e-12 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("compile_system rejects unsuitable systems") {
  PDESystem sys = rat11_ck_system();
  PDESystem xyzt = derive(make_rat(1, 1), EquationForm::residues);
  CHECK_THROWS_AS(compile_system(xyzt), CompileError);

  PDESystem short_sys = sys;
  short_sys.equations.pop_back();
  CHECK_THROWS_AS(compile_system(short_sys), CompileError);

  PDESystem nonlinear = sys;
  nonlinear.equations[0] = JetQuotient(parse_poly("a1_t*v1_t + a1"));
  CHECK_THROWS_AS(compile_system(nonlinear), CompileError);

  PDESystem mixed = sys;
  mixed.equations[0] = JetQuotient(parse_poly("a1_xt + a1"));
  CHECK_THROWS_AS(compile_system(mixed), CompileError);

  PDESystem stranger = sys;
  stranger.equations[0] = JetQuotient(parse_poly("c_x + a1_t"));
  CHECK_THROWS_AS(compile_system(stranger), CompileError);
}

TEST_CASE("spatial derivatives") {
  Grid g({16, 12, 8}, 1);
  std::vector<double> u(g.points()), du;
  for (std::size_t p = 0; p < g.points(); ++p) {
    auto x = g.coord(p);
    u[p] = std::sin(3 * x[0]) + std::cos(2 * x[1]) * std::sin(x[2]);
  }
  differentiate(g, u, 0, 1, Spatial::spectral, du);
  double err = 0;
  for (std::size_t p = 0; p < g.points(); ++p) err = std::max(err, std::abs(du[p] - 3 * std::cos(3 * g.coord(p)[0])));
  CHECK(err < 1e-12);
  differentiate(g, u, 1, 2, Spatial::spectral, du);
  err = 0;
  for (std::size_t p = 0; p < g.points(); ++p) {
    auto x = g.coord(p);
    err = std::max(err, std::abs(du[p] + 4 * std::cos(2 * x[1]) * std::sin(x[2])));
  }
  CHECK(err < 1e-11);

  SUBCASE("fd2 error falls by four when h halves") {
    auto fd_err = [](int n) {
      Grid h({n, 8, 8}, 1);
      std::vector<double> w(h.points()), dw;
      for (std::size_t p = 0; p < h.points(); ++p) w[p] = std::sin(h.coord(p)[0]);
      differentiate(h, w, 0, 1, Spatial::fd2, dw);
      double e = 0;
      for (std::size_t p = 0; p < h.points(); ++p) e = std::max(e, std::abs(dw[p] - std::cos(h.coord(p)[0])));
      return e;
    };
    CHECK(std::log2(fd_err(16) / fd_err(32)) == doctest::Approx(2.0).epsilon(0.02));
  }
  CHECK_THROWS_AS(Grid({4, 8, 8}, 1), ParameterError);
  Grid odd({9, 8, 8}, 1);
  std::vector<double> w(odd.points(), 1.0), dw;
  CHECK_THROWS_AS(differentiate(odd, w, 0, 1, Spatial::spectral, dw), ParameterError);
}

TEST_CASE("profile jets match finite differences") {
  FieldProfile p = mode(0.5, {1, 2, -1}, 0.7, 0.3, -0.2);
  p.modes.push_back({{0, 1, 1}, -0.4, 0.1, 0.05});
  std::array<double, 3> x{0.3, 1.1, -0.4};
  const double h = 1e-5;
  for (int d = 0; d < 4; ++d) {
    MultiIndex idx = unit(static_cast<Dir>(d));
    auto shifted = [&](double s) {
      auto y = x;
      double T = 0.2;
      if (d < 3)
        y[d] += s;
      else
        T += s;
      return p.jet({}, y, T);
    };
    double fd = (shifted(h) - shifted(-h)) / (2 * h);
    CHECK(p.jet(idx, x, 0.2) == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("initial data JSON") {
  auto data = parse_initial_data(R"({"fields": {"a1": {"constant": 1.5,
      "fourier": [{"k": [1, 0, 2], "cos": 0.25, "sin": -0.5}]}, "b1": 2}})");
  REQUIRE(data.size() == 2);
  CHECK(data["a1"].constant == 1.5);
  CHECK(data["a1"].modes[0].k == std::array<int, 3>{1, 0, 2});
  CHECK(data["b1"].constant == 2.0);
  auto again = parse_initial_data(initial_data_json(data));
  CHECK(again["a1"].modes[0].sin == -0.5);
  CHECK_THROWS_AS(parse_initial_data("{"), StructuralError);
  CHECK_THROWS_AS(parse_initial_data(R"({"a1": {"fourier": [{"cos": 1}]}})"), StructuralError);

  Grid g({8, 8, 8}, 4);
  InitialData partial;
  partial["a1"].constant = 1;
  CHECK_THROWS_AS(fill_grid(g, rat11(), partial), ParameterError);
}

TEST_CASE("constant data is a steady state") {
  InitialData c;
  c["a1"].constant = 0.7;
  c["b1"].constant = -1.3;
  c["v1"].constant = 0.1;
  c["w1"].constant = 2.9;
  for (Spatial s : {Spatial::spectral, Spatial::fd2}) {
    Grid g({8, 8, 8}, 4);
    fill_grid(g, rat11(), c);
    IntegrateOptions opt;
    opt.steps = 100;
    opt.dt = 0.01;
    opt.spatial = s;
    auto tr = integrate(rat11(), g, opt);
    double drift = 0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t p = 0; p < g.points(); ++p)
        drift = std::max(drift, std::abs(tr.state.fields[i][p] - g.fields[i][p]));
    CHECK(drift <= 1e-13);
    CHECK(tr.monitors.size() == 101);
    CHECK(tr.monitors.back().min_pole_dist == doctest::Approx(2.8));
  }
}

TEST_CASE("pole guard aborts the integration") {
  InitialData c;
  c["a1"].constant = 1;
  c["b1"].constant = 1;
  c["v1"].constant = 0;
  c["w1"].constant = 0.05;
  Grid g({8, 8, 8}, 4);
  fill_grid(g, rat11(), c);
  IntegrateOptions opt;
  try {
    integrate(rat11(), g, opt);
    FAIL("no abort");
  } catch (const NumericalAbort& e) {
    CHECK(e.step() == 0);
  }

  // w1 = 0.3 - 0.25 sin T reaches the guard near T = 0.93.
  InitialData ex;
  ex["a1"].constant = 1;
  ex["b1"].constant = 1;
  ex["v1"].constant = 0;
  ex["w1"] = mode(0.3, {0, 0, 0}, 1.0, 0.0, -0.25);
  fill_grid(g, rat11(), ex);
  opt.steps = 100;
  opt.dt = 0.02;
  opt.forcing = manufactured_forcing(rat11(), ex);
  long rows = 0;
  opt.on_monitor = [&](const MonitorRow&) { ++rows; };
  try {
    integrate(rat11(), g, opt);
    FAIL("no abort");
  } catch (const NumericalAbort& e) {
    CHECK(e.step() == 47);
    CHECK(rows == 48);
  }
}

TEST_CASE("manufactured solution converges at fourth order in time") {
  auto rep = temporal_convergence(rat11(), smooth_solution(), 8, 0.5, {10, 20, 40});
  REQUIRE(rep.orders.size() == 2);
  CHECK(rep.observed_order() == doctest::Approx(4.0).epsilon(0.125));
  CHECK(rep.runs.back().error < 1e-8);
}

TEST_CASE("original-form residual decreases under refinement") {
  auto data = smooth_solution();
  for (auto& [name, p] : data) p.modes[0].omega = 0;
  auto rep = residual_refinement(rat11(), data, {8, 12, 16}, 0.1, 4, Spatial::fd2);
  CHECK(residual_decreasing(rep));
}

TEST_CASE("monitor CSV") {
  std::vector<MonitorRow> rows{{0, 0.0, 1.0, std::nan(""), 2.0}, {1, 0.5, 0.9, 1e-3, 2.5}};
  auto csv = monitor_csv(rows);
  CHECK(csv.rfind("step,T,min_pole_dist,residual_L2,max_field\n", 0) == 0);
  CHECK(csv.find("1,0.5,0.90000000000000002,0.001,2.5") != std::string::npos);
}
