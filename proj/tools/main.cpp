// contactlax command-line driver.
//
// Exit codes: 0 pass, 1 verification failure, 2 usage error, 3 numerical abort.

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "contactlax/errors.hpp"
#include "contactlax/io.hpp"

using namespace contactlax;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;
constexpr int kAbort = 3;

struct FamilyArgs {
  std::string family = "rat";
  int m = 1;
  int n = 1;
  std::string lax_file;

  void add(CLI::App* c) {
    c->add_option("--family", family, "poly | rat | ratgp");
    c->add_option("-m", m, "first family parameter");
    c->add_option("-n", n, "second family parameter");
    c->add_option("--lax", lax_file, "Lax pair JSON (overrides --family)");
  }

  LaxPair build() const {
    if (!lax_file.empty()) return laxpair_from_json(Json::parse(read_file(lax_file)));
    return make_family(parse_family(family), m, n);
  }
};

EquationForm parse_form(const std::string& s) {
  if (s == "coefficients") return EquationForm::coefficients;
  if (s == "residues") return EquationForm::residues;
  throw ParameterError("unknown equation form '" + s + "'");
}

CCPath parse_path(const std::string& s) {
  if (s == "lifted") return CCPath::lifted;
  if (s == "bracket") return CCPath::bracket;
  throw ParameterError("unknown derivation path '" + s + "'");
}

std::string pass_fail(bool ok) { return ok ? "pass" : "fail"; }

void write_artifact(RunReport& rep, const std::string& path, const std::string& text) {
  if (path.empty()) return;
  write_file(path, text);
  rep.artifacts.push_back(path);
}

PDESystem load_system(const std::string& path) { return system_from_json(Json::parse(read_file(path))); }

// ------------------------------------------------------------------ derive

struct DeriveCmd {
  FamilyArgs fam;
  std::string form = "coefficients";
  std::string path = "lifted";
  std::string out_json, out_latex;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("derive", "derive the compatibility system of a Lax pair");
    fam.add(c);
    c->add_option("--form", form, "coefficients | residues");
    c->add_option("--path", path, "lifted | bracket");
    c->add_option("--out", out_json, "system JSON");
    c->add_option("--latex", out_latex, "system LaTeX");
  }

  RunReport run() const {
    RunReport rep;
    PDESystem sys = derive(fam.build(), parse_form(form), parse_path(path));
    auto dr = determinedness_report(sys);
    rep.details["determinedness"] = to_json(dr);
    rep.details["labels"] = sys.provenance.labels;
    write_artifact(rep, out_json, to_json(sys).dump(1) + "\n");
    write_artifact(rep, out_latex, latex(sys));
    rep.verdicts["derive"] = "pass";
    return rep;
  }
};

// ------------------------------------------------------------------ verify

struct VerifyCmd {
  std::string check;
  FamilyArgs fam;
  std::string a0, b0;
  std::string golden;
  int points = 20;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("verify", "run one verification");
    c->add_option("check", check, "ab | qsolution | theorem1 | rls | reduce21")
        ->required()
        ->check(CLI::IsMember({"ab", "qsolution", "theorem1", "rls", "reduce21"}));
    fam.add(c);
    c->add_option("--a0", a0, "a0 expression for the ab check");
    c->add_option("--b0", b0, "b0 expression for the ab check");
    c->add_option("--golden", golden, "transcribed system JSON for rls");
    c->add_option("--points", points, "random points for rls");
  }

  RunReport run() const {
    RunReport rep;
    if (check == "ab" || check == "qsolution") {
      JetQuotient A, B;
      if (check == "qsolution") {
        A = parse_quotient("q_y/q_z");
        B = parse_quotient("q_t/q_z");
      } else {
        if (a0.empty() || b0.empty()) throw ParameterError("verify ab needs --a0 and --b0");
        A = parse_quotient(a0);
        B = parse_quotient(b0);
      }
      JetQuotient r = check_ab(A, B);
      rep.details["a0"] = A.str();
      rep.details["b0"] = B.str();
      rep.details["residual"] = r.str();
      rep.verdicts[check] = pass_fail(r.is_zero());
    } else if (check == "theorem1") {
      auto r = verify_theorem1(fam.m, fam.n);
      rep.details = to_json(r);
      rep.verdicts["theorem1"] = pass_fail(r.passes());
    } else if (check == "rls") {
      Golden g = load_golden(golden.empty() ? default_golden_path() : golden);
      PDESystem sys = derive(make_rat(fam.m, fam.n), EquationForm::residues);
      auto r = match_printed_rls(sys, fam.m, fam.n, g, points);
      rep.details = to_json(r);
      rep.details["golden_provenance"] = g.provenance;
      rep.verdicts["rls"] = r.verdict();
    } else {
      std::vector<std::string> diffs;
      bool ok = true;
      std::vector<LaxPair> pairs;
      if (!fam.lax_file.empty() || fam.family != "rat")
        pairs.push_back(fam.build());
      else
        pairs = {make_rat(fam.m, fam.n), make_ratgp(fam.m, fam.n)};
      Json per = Json::array();
      for (const auto& lax : pairs) {
        std::vector<std::string> d;
        bool c = reduction_commutes(lax, EquationForm::coefficients, &d);
        ok = ok && c;
        per.push_back({{"family", family_name(lax.family)}, {"commutes", c}, {"differing", d}});
      }
      rep.details["pairs"] = per;
      rep.verdicts["reduce21"] = pass_fail(ok);
    }
    return rep;
  }
};

// ---------------------------------------------------------------------- ck

struct CkCmd {
  std::string in, out, out_latex;
  FamilyArgs fam;
  std::string form = "residues";
  std::uint64_t seed = 1;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("ck", "Cauchy-Kowalevski transform with invertibility witness");
    c->add_option("--in", in, "system JSON (default: derive from --family)");
    fam.add(c);
    c->add_option("--form", form, "equation form when deriving");
    c->add_option("--seed", seed, "witness point seed");
    c->add_option("--out", out, "transformed system JSON");
    c->add_option("--latex", out_latex, "transformed system LaTeX");
  }

  RunReport run() const {
    RunReport rep;
    PDESystem sys = in.empty() ? derive(fam.build(), parse_form(form)) : load_system(in);
    CKWitness w;
    try {
      PDESystem ck = ck_transform(sys, seed, &w);
      Json pt = Json::object();
      for (const auto& [v, x] : w.point) pt[v.str()] = x.get_str();
      rep.details["witness"] = {{"determinant", w.determinant.get_str()}, {"point", pt}};
      write_artifact(rep, out, to_json(ck).dump(1) + "\n");
      write_artifact(rep, out_latex, latex(ck));
      rep.verdicts["ck"] = "pass";
    } catch (const TransformDegenerateError& e) {
      rep.details["error"] = e.what();
      rep.verdicts["ck"] = "fail";
    }
    return rep;
  }
};

// ---------------------------------------------------------------- reduce21

struct ReduceCmd {
  FamilyArgs fam;
  std::string form = "coefficients";
  std::string out, out_latex, out_lax;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("reduce21", "the (2+1)-dimensional reduction u_z = 0, psi_z = 1");
    fam.add(c);
    c->add_option("--form", form, "coefficients | residues");
    c->add_option("--out", out, "reduced system JSON");
    c->add_option("--latex", out_latex, "reduced system LaTeX");
    c->add_option("--lax-out", out_lax, "reduced Lax pair JSON");
  }

  RunReport run() const {
    RunReport rep;
    LaxPair lax = fam.build();
    Reduction r = reduce_2plus1(lax, parse_form(form));
    std::vector<std::string> diffs;
    bool ok = reduction_commutes(lax, parse_form(form), &diffs);
    rep.details["determinedness"] = to_json(determinedness_report(r.system));
    rep.details["F"] = latex(r.lax.F);
    rep.details["G"] = latex(r.lax.G);
    rep.details["differing"] = diffs;
    write_artifact(rep, out, to_json(r.system).dump(1) + "\n");
    write_artifact(rep, out_latex, latex(r.system));
    write_artifact(rep, out_lax, to_json(r.lax).dump(1) + "\n");
    rep.verdicts["commutes"] = pass_fail(ok);
    return rep;
  }
};

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  std::string system;
  std::string init;
  std::string monitor;
  std::string manufactured;
  std::string table;
  std::string spatial = "spectral";
  int grid = 16;
  long steps = 100;
  double dt = 1e-2;
  double guard = 0.1;
  double drift_tol = -1.0;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("simulate", "integrate a CK-form system on a periodic grid");
    c->add_option("--system", system, "CK-form system JSON (default: rat m = n = 1)");
    c->add_option("--init", init, "initial data JSON");
    c->add_option("--grid", grid, "points per direction")->check(CLI::Range(8, 512));
    c->add_option("--steps", steps, "RK4 steps")->check(CLI::NonNegativeNumber);
    c->add_option("--dt", dt, "time step")->check(CLI::PositiveNumber);
    c->add_option("--spatial", spatial, "spectral | fd2");
    c->add_option("--guard", guard, "pole-distance guard");
    c->add_option("--monitor", monitor, "monitor CSV");
    c->add_option("--drift-tol", drift_tol, "fail when the relative drift exceeds this");
    c->add_option("--manufactured", manufactured, "exact solution JSON: run convergence studies instead");
    c->add_option("--table", table, "convergence table CSV");
  }

  RunReport run() const {
    RunReport rep;
    PDESystem sys = system.empty() ? rat11_ck_system() : load_system(system);
    CompiledSystem cs = compile_system(sys);
    rep.details["unknowns"] = to_json(sys)["unknowns"];
    rep.details["program_size"] = cs.program_size();
    if (!manufactured.empty()) return convergence(cs, rep);
    if (init.empty()) throw ParameterError("simulate needs --init or --manufactured");

    InitialData data = parse_initial_data(read_file(init));
    Grid g({grid, grid, grid}, cs.size());
    fill_grid(g, cs, data);
    IntegrateOptions opt;
    opt.steps = steps;
    opt.dt = dt;
    opt.spatial = parse_spatial(spatial);
    opt.pole_guard = guard;
    std::ofstream csv;
    if (!monitor.empty()) {
      csv.open(monitor);
      if (!csv) throw ParameterError("cannot write '" + monitor + "'");
      csv << "step,T,min_pole_dist,residual_L2,max_field\n";
      csv.precision(17);
      rep.artifacts.push_back(monitor);
    }
    opt.on_monitor = [&](const MonitorRow& r) {
      if (csv.is_open())
        csv << r.step << ',' << r.T << ',' << r.min_pole_dist << ',' << r.residual_l2 << ',' << r.max_field << '\n';
    };
    auto tr = integrate(cs, g, opt);
    double drift = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < cs.size(); ++i)
      for (std::size_t p = 0; p < g.points(); ++p) {
        drift = std::max(drift, std::abs(tr.state.fields[i][p] - g.fields[i][p]));
        scale = std::max(scale, std::abs(g.fields[i][p]));
      }
    const double rel = scale > 0 ? drift / scale : drift;
    rep.details["steps"] = steps;
    rep.details["final_T"] = tr.monitors.back().T;
    rep.details["relative_drift"] = rel;
    rep.details["min_pole_dist"] = tr.monitors.back().min_pole_dist;
    double res = 0.0;
    for (const auto& m : tr.monitors)
      if (std::isfinite(m.residual_l2)) res = std::max(res, m.residual_l2);
    rep.details["max_residual_L2"] = res;
    rep.verdicts["simulate"] = drift_tol >= 0 ? pass_fail(rel <= drift_tol) : "pass";
    return rep;
  }

  RunReport convergence(const CompiledSystem& cs, RunReport& rep) const {
    InitialData exact = parse_initial_data(read_file(manufactured));
    const double T_end = dt * static_cast<double>(steps);
    auto temporal = temporal_convergence(cs, exact, grid, T_end, {steps / 4 > 0 ? steps / 4 : 1,
                                                                   steps / 2 > 0 ? steps / 2 : 2, steps});
    auto spatial_rep = spatial_convergence(cs, exact, {grid, grid * 3 / 2, grid * 2}, T_end, steps, Spatial::fd2);
    rep.details["temporal"] = to_json(temporal);
    rep.details["spatial"] = to_json(spatial_rep);
    if (!table.empty()) {
      std::ostringstream os;
      os.precision(17);
      os << "kind,spatial,n,dt,steps,error,order\n";
      for (const auto* r : {&temporal, &spatial_rep})
        for (std::size_t k = 0; k < r->runs.size(); ++k) {
          const auto& x = r->runs[k];
          os << r->kind << ',' << spatial_name(r->spatial) << ',' << x.n << ',' << x.dt << ',' << x.steps << ','
             << x.error << ',';
          if (k > 0) os << r->orders[k - 1];
          os << '\n';
        }
      write_artifact(rep, table, os.str());
    }
    rep.verdicts["temporal_order"] = pass_fail(std::abs(temporal.observed_order() - 4.0) <= 0.5);
    rep.verdicts["spatial_order"] = pass_fail(std::abs(spatial_rep.observed_order() - 2.0) <= 0.5);
    return rep;
  }
};

// ------------------------------------------------------------------ export

struct ExportCmd {
  FamilyArgs fam;
  std::string in;
  std::string what = "lax";
  std::string format = "json";
  std::string out;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("export", "write a Lax pair, compatibility condition or system");
    fam.add(c);
    c->add_option("--in", in, "system JSON to re-emit (overrides --what)");
    c->add_option("--what", what, "lax | cc")->check(CLI::IsMember({"lax", "cc"}));
    c->add_option("--format", format, "json | latex")->check(CLI::IsMember({"json", "latex"}));
    c->add_option("--out", out, "output file (default: stdout)");
  }

  RunReport run() const {
    RunReport rep;
    std::string text;
    const bool tex = format == "latex";
    if (!in.empty()) {
      PDESystem sys = load_system(in);
      text = tex ? latex(sys) : to_json(sys).dump(1) + "\n";
    } else {
      LaxPair lax = fam.build();
      if (what == "lax") {
        text = tex ? "F = " + latex(lax.F) + "\nG = " + latex(lax.G) + "\n" : to_json(lax).dump(1) + "\n";
      } else {
        PRational cc = compatibility_condition(lax);
        text = tex ? latex(cc) + "\n" : to_json(cc).dump(1) + "\n";
      }
    }
    if (out.empty())
      std::cout << text;
    else
      write_artifact(rep, out, text);
    rep.verdicts["export"] = "pass";
    return rep;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contactlax: contact Lax pairs, their compatibility systems and checks"};
  app.require_subcommand(1);
  std::string report_path;
  bool quiet = false;
  app.add_option("--report", report_path, "also write the run report JSON here");
  app.add_flag("-q,--quiet", quiet, "do not print the run report");

  DeriveCmd derive_cmd;
  VerifyCmd verify_cmd;
  CkCmd ck_cmd;
  ReduceCmd reduce_cmd;
  SimulateCmd simulate_cmd;
  ExportCmd export_cmd;
  derive_cmd.add(app);
  verify_cmd.add(app);
  ck_cmd.add(app);
  reduce_cmd.add(app);
  simulate_cmd.add(app);
  export_cmd.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  // The artifact itself goes to stdout in this case.
  if (app.got_subcommand("export") && export_cmd.out.empty()) quiet = true;

  std::ostringstream echo;
  for (int i = 0; i < argc; ++i) echo << (i ? " " : "") << argv[i];
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  int code = kPass;
  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "derive") rep = derive_cmd.run();
    else if (name == "verify") rep = verify_cmd.run();
    else if (name == "ck") rep = ck_cmd.run();
    else if (name == "reduce21") rep = reduce_cmd.run();
    else if (name == "simulate") rep = simulate_cmd.run();
    else rep = export_cmd.run();
    code = rep.exit_code();
  } catch (const NumericalAbort& e) {
    rep.verdicts["simulate"] = "fail";
    rep.details["abort"] = {{"reason", e.what()}, {"step", e.step()}};
    std::cerr << "numerical abort at step " << e.step() << ": " << e.what() << "\n";
    code = kAbort;
  } catch (const TheoremVerificationError& e) {
    rep.verdicts["verify"] = "fail";
    rep.details["error"] = e.what();
    std::cerr << "verification failed: " << e.what() << "\n";
    code = kFail;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  rep.command = echo.str();
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const std::string text = rep.to_json().dump(2);
  if (!quiet) std::cout << text << "\n";
  if (!report_path.empty()) write_file(report_path, text + "\n");
  return code;
}
