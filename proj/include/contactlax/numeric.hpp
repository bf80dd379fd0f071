#pragma once

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "contactlax/compat.hpp"

namespace contactlax {

/// Straight-line code over a register file, one instruction per arithmetic
/// operation, operands always defined before use.
class Program {
 public:
  enum class Op : std::uint8_t { input, constant, add, sub, mul, div, scale };
  struct Instr {
    Op op;
    int a = 0;
    int b = 0;
    double c = 0.0;
  };

  /// Index of the jet in the input vector, allocating it on first use.
  int input(const JetVar& v);
  int emit(const DiffPoly& p);
  /// num / den with the denominator expanded.
  int emit(const JetQuotient& q);
  int sub(int a, int b);
  const std::vector<JetVar>& inputs() const { return inputs_; }
  std::size_t size() const { return code_.size(); }
  void run(const double* in, double* regs) const;

 private:
  int push(Instr i);
  int power(const JetVar& v, unsigned k);
  std::vector<Instr> code_;
  std::vector<JetVar> inputs_;
  std::map<JetVar, int> input_index_;
  std::map<JetVar, int> load_reg_;
  std::map<std::pair<JetVar, unsigned>, int> pow_reg_;
};

/// A CK-form system split as A(u, spatial jets) u_T + R(u, spatial jets) = f.
class CompiledSystem {
 public:
  std::size_t size() const { return unknowns_.size(); }
  const std::vector<FieldId>& unknowns() const { return unknowns_; }
  /// Spatial jets the program reads (T-order zero), in input order.
  const std::vector<JetVar>& jets() const { return program_.inputs(); }
  std::size_t program_size() const { return program_.size(); }
  bool has_residual_program() const { return has_original_; }

  /// A (row-major N x N), R (N) and pole distances at one point.
  void eval_point(const double* jets, double* A, double* R, double* pole_gaps, double* regs) const;
  /// Solves A u_T = f - R; returns false when A is numerically singular.
  bool solve_point(const double* jets, const double* f, double* uT, double* regs) const;
  /// E_i = sum_j A_ij u_T + R_i for exact comparison with the source.
  std::vector<double> equations_at(const std::map<JetVar, double>& point) const;
  std::size_t pole_pairs() const { return pole_regs_.size(); }

  /// Original (x, y, z, t) equations at one point, given values of their
  /// jets in original_jets() order.
  const std::vector<JetVar>& original_jets() const { return original_.inputs(); }
  void eval_original(const double* jets, double* out, double* regs) const;
  std::size_t register_count() const;

 private:
  friend CompiledSystem compile_system(const PDESystem& sys);
  std::vector<FieldId> unknowns_;
  Program program_;
  std::vector<int> a_regs_;
  std::vector<int> r_regs_;
  std::vector<int> pole_regs_;
  Program original_;
  std::vector<int> original_regs_;
  bool has_original_ = false;
};

/// Throws CompileError unless sys is in (X, Y, Z, T), square, first order and
/// linear in the T-jets of its unknowns.
CompiledSystem compile_system(const PDESystem& sys);

enum class Spatial { spectral, fd2 };
std::string spatial_name(Spatial s);
Spatial parse_spatial(std::string_view s);

/// Periodic box [0, 2 pi)^3 with n[d] >= 8 points per direction and one
/// array per unknown (index (i * ny + j) * nz + k).
struct Grid {
  std::array<int, 3> n{16, 16, 16};
  std::vector<std::vector<double>> fields;

  Grid() = default;
  Grid(std::array<int, 3> dims, std::size_t nfields);
  std::size_t points() const { return static_cast<std::size_t>(n[0]) * n[1] * n[2]; }
  double spacing(int d) const;
  std::array<double, 3> coord(std::size_t idx) const;
};

/// Derivative of order k along axis d (0 = X, 1 = Y, 2 = Z).
void differentiate(const Grid& g, const std::vector<double>& u, int d, int k, Spatial s, std::vector<double>& out);

/// u = c + sum_k [C cos(k.x + omega T) + S sin(k.x + omega T)].
struct Mode {
  std::array<int, 3> k{0, 0, 0};
  double omega = 0.0;
  double cos = 0.0;
  double sin = 0.0;
};

struct FieldProfile {
  double constant = 0.0;
  std::vector<Mode> modes;
  /// Derivative d = (nX, nY, nZ, nT) at (X, Y, Z, T).
  double jet(const MultiIndex& d, const std::array<double, 3>& x, double T) const;
};

/// Field name -> profile; also used for manufactured solutions.
using InitialData = std::map<std::string, FieldProfile>;

InitialData parse_initial_data(const std::string& json_text);
std::string initial_data_json(const InitialData& data);
void fill_grid(Grid& g, const CompiledSystem& cs, const InitialData& data, double T = 0.0);

struct MonitorRow {
  long step = 0;
  double T = 0.0;
  double min_pole_dist = 0.0;
  double residual_l2 = 0.0;
  double max_field = 0.0;
};

/// f_i(X, Y, Z, T) on the right-hand side; empty for the homogeneous system.
using Forcing = std::function<void(const std::array<double, 3>& x, double T, double* f)>;

struct IntegrateOptions {
  long steps = 100;
  double dt = 1e-2;
  double T0 = 0.0;
  Spatial spatial = Spatial::spectral;
  double pole_guard = 0.1;
  bool residual = true;
  Forcing forcing;
  /// Called after every step (and once before the first).
  std::function<void(const MonitorRow&)> on_monitor;
};

struct Trajectory {
  Grid state;
  std::vector<MonitorRow> monitors;
};

/// Classical RK4 method of lines. Throws NumericalAbort on pole proximity,
/// a singular T-jet matrix, NaN or overflow.
Trajectory integrate(const CompiledSystem& cs, Grid grid, const IntegrateOptions& opt);

std::string monitor_csv(const std::vector<MonitorRow>& rows);

/// Forcing that makes `exact` a solution: every equation evaluated on the
/// closed-form jets.
Forcing manufactured_forcing(const CompiledSystem& cs, const InitialData& exact);

struct ConvergenceRun {
  int n = 0;
  double dt = 0.0;
  long steps = 0;
  double error = 0.0;  // max-norm error against the exact fields at the end
  double max_residual = 0.0;
};

struct ConvergenceReport {
  std::string kind;  // "temporal" or "spatial"
  Spatial spatial = Spatial::spectral;
  std::vector<ConvergenceRun> runs;
  /// log(e_k / e_{k+1}) / log(h_k / h_{k+1}) between successive runs.
  std::vector<double> orders;
  double observed_order() const { return orders.empty() ? 0.0 : orders.back(); }
};

/// dt-refinement at fixed grid (halving dt each run).
ConvergenceReport temporal_convergence(const CompiledSystem& cs, const InitialData& exact, int n, double T_end,
                                       const std::vector<long>& steps, Spatial spatial = Spatial::spectral);
/// Grid refinement at fixed dt.
ConvergenceReport spatial_convergence(const CompiledSystem& cs, const InitialData& exact, const std::vector<int>& ns,
                                      double T_end, long steps, Spatial spatial = Spatial::fd2);
/// Unforced runs from `data` with dt proportional to the grid spacing; each
/// run records the largest original-form residual along the trajectory.
ConvergenceReport residual_refinement(const CompiledSystem& cs, const InitialData& data, const std::vector<int>& ns,
                                      double T_end, long base_steps, Spatial spatial = Spatial::spectral);
bool residual_decreasing(const ConvergenceReport& r);

/// The m = n = 1 rat system in residue form, CK-transformed and compiled.
PDESystem rat11_ck_system();

}  // namespace contactlax
