#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "contactlax/laxpair.hpp"

namespace contactlax {

/// (a) rewrites psi_y, psi_t and their prolongations inside
/// D_t(psi_z F) - D_y(psi_z G); (b) is the closed-form bracket.
enum class CCPath { lifted, bracket };

/// Compatibility condition ((psi_y)_t - (psi_t)_y) / psi_z as a rational
/// function of p. Throws DerivationError when psi jets fail to cancel.
PRational compatibility_condition(const LaxPair& lax, CCPath path = CCPath::lifted);

/// psi_z F(psi_x / psi_z) as a quotient in psi_x, psi_z (psi_z = 1 in 2+1).
JetQuotient lift_to_psi(const PRational& F, Dims dims, const FieldId& psi = FieldId("psi"));
/// Inverse of lift_to_psi: divides by psi_z and sets psi_x -> p, psi_z -> 1.
/// Throws DerivationError unless q is homogeneous of degree one in
/// (psi_x, psi_z) and free of other psi jets.
PRational dehomogenize(const JetQuotient& q, Dims dims, const FieldId& psi = FieldId("psi"));

enum class Frame { xyzt, XYZT };
/// Equations from numerator coefficients in p, or from the polynomial part
/// and pole residues of the partial-fraction view.
enum class EquationForm { coefficients, residues };

std::string frame_name(Frame f);
std::string form_name(EquationForm f);

struct Provenance {
  std::string family = "custom";
  int m = 0;
  int n = 0;
  Dims dims = Dims::d3plus1;
  CCPath path = CCPath::lifted;
  EquationForm form = EquationForm::coefficients;
  int dropped_zero = 0;
  /// Per equation: "p^k", "p^k (polynomial part)" or "res[v1]^2".
  std::vector<std::string> labels;
  /// Per equation: the quotient before its denominator was cleared.
  std::vector<JetQuotient> display;
  /// Symbolic poles of the Lax pair (used to keep sample points away).
  std::vector<JetQuotient> poles;
  std::vector<std::string> transforms;
};

/// Each equation is a polynomial (denominator cleared) understood as = 0.
struct PDESystem {
  std::vector<FieldId> unknowns;
  Frame frame = Frame::xyzt;
  std::vector<JetQuotient> equations;
  Provenance provenance;

  std::vector<std::string> independents() const;
  /// Throws StructuralError when a jet references neither an unknown nor a
  /// coordinate of the frame.
  void validate() const;
};

PDESystem extract_system(const PRational& cc, const LaxPair& lax, EquationForm form = EquationForm::coefficients);
PDESystem derive(const LaxPair& lax, EquationForm form = EquationForm::coefficients, CCPath path = CCPath::lifted);

enum class Verdict { determined, underdetermined, overdetermined };
std::string verdict_name(Verdict v);

struct DeterminednessReport {
  int equations = 0;
  int unknowns = 0;
  int dropped_zero = 0;
  Verdict verdict = Verdict::determined;
};
DeterminednessReport determinedness_report(const PDESystem& sys);

/// Random rational jet point (|num|, den <= 100) on the given variables,
/// resampled until every quotient in keep_away has all denominator factors
/// at least 1/10 in absolute value.
JetPoint sample_point(std::mt19937_64& rng, const std::set<JetVar>& vars, const std::vector<JetQuotient>& keep_away);

struct CKWitness {
  JetPoint point;
  Rational determinant;
};

/// X = x, Y = y - t, Z = z, T = y + t. Throws TransformDegenerateError when
/// the matrix of T-jet coefficients is not square or singular at a random
/// point. The witness (if requested) records that point and the determinant.
PDESystem ck_transform(const PDESystem& sys, std::uint64_t seed = 1, CKWitness* witness = nullptr);
PDESystem ck_inverse(const PDESystem& sys);
/// Jet map used by ck_transform, exposed for single expressions.
JetQuotient ck_map(const JetQuotient& e);

/// Matrix d E_i / d (u_j)_T as polynomials.
std::vector<std::vector<JetQuotient>> t_jet_matrix(const PDESystem& sys);

/// Sets every z-jet of every non-coordinate field to zero.
JetQuotient zero_z_jets(const JetQuotient& e);
LaxPair reduce_lax(const LaxPair& lax);
PDESystem reduce_system(const PDESystem& sys);

struct Reduction {
  LaxPair lax;
  PDESystem system;
};
/// u_z = 0 and psi_z = 1: the (2+1)-dimensional pair and its system.
Reduction reduce_2plus1(const LaxPair& lax, EquationForm form = EquationForm::coefficients);

/// reduce_system(derive(lax)) against derive(reduce_lax(lax)), equation by
/// equation in normal form. Mismatching labels go to diffs.
bool reduction_commutes(const LaxPair& lax, EquationForm form = EquationForm::coefficients,
                        std::vector<std::string>* diffs = nullptr);

}  // namespace contactlax
