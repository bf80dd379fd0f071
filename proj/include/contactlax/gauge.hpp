#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contactlax/compat.hpp"

namespace contactlax {

/// (a0)_t - (b0)_y - b0 (a0)_z + a0 (b0)_z in normal form. Optional
/// constraint rules are applied to the result.
JetQuotient check_ab(const JetQuotient& a0, const JetQuotient& b0, const SubstitutionRules* constraints = nullptr);

/// New independents x~ = x, y~ = y, z~ = q, t~ = t (inverse marker q~ = z),
/// psi~ = psi, and a field map giving each tilde field in old variables.
struct ChangeOfVariables {
  std::string name;
  FieldId q = FieldId("q");
  /// Values for first jets of q (q_x, q_y, q_z, q_t). Empty: q stays symbolic
  /// and its y- and t-jets are eliminated by the constraint rules.
  std::map<JetVar, JetQuotient> q_values;
  /// Tilde field name ("a1~", "v1~", ...) to expression in old fields and q.
  std::map<FieldId, JetQuotient> field_map;
  /// Right-hand sides of the constraints q_y = a0 q_z, q_t = b0 q_z.
  JetQuotient a0 = JetQuotient::jet("a0");
  JetQuotient b0 = JetQuotient::jet("b0");

  bool symbolic_q() const { return q_values.empty(); }
};

/// q_y -> a0 q_z, q_t -> b0 q_z, prolonged.
SubstitutionRules q_constraints(const FieldId& q = FieldId("q"), const JetQuotient& a0 = JetQuotient::jet("a0"),
                                const JetQuotient& b0 = JetQuotient::jet("b0"));

/// a~_i = a_i q_z^2, v~_i = v_i - q_x/q_z, likewise for b, w.
ChangeOfVariables printed_map(int m, int n);
/// a~_i = a_i q_z^2, v~_i = v_i q_z - q_x: the map read off a transformed pair.
ChangeOfVariables chain_rule_map(int m, int n);

/// q specialisations used by the verification: q = z, and q = z + f(x)
/// (q_z = 1, q_x = f_x).
std::map<JetVar, JetQuotient> q_equals_z();
std::map<JetVar, JetQuotient> q_unit_z(const FieldId& f = FieldId("f"));

struct FieldResidual {
  FieldId field;
  JetQuotient residual;  // map value - value read off the transformed pair
};

struct TransformResult {
  /// F~, G~ in old fields and q jets, before the field map.
  LaxPair raw;
  bool polynomial_part_zero = false;
  /// Every pole simple, one per template pole, matched to the map.
  bool pole_structure_ok = false;
  bool q_yt_free = false;
  std::vector<FieldResidual> residuals;
  /// The pair in tilde fields with tildes dropped, when the map validates.
  std::optional<LaxPair> lax;
};

/// psi chain rule of z~ = q, q constraints, then the field map, on a
/// general-position pair. Throws CoverageError when the map misses a template
/// field.
TransformResult apply_change_of_variables(const LaxPair& lax, const ChangeOfVariables& cov);

/// The field map that renders the transformed pair in rat shape, read off
/// its partial fractions. Throws TheoremVerificationError when none exists.
ChangeOfVariables solve_field_map(const LaxPair& lax, const std::map<JetVar, JetQuotient>& q_values = {});
/// Same, keeping q, its specialisation and the constraint data of base.
ChangeOfVariables solve_field_map(const LaxPair& lax, const ChangeOfVariables& base);

struct MapReport {
  std::string map;            // "printed" | "solved"
  std::string q_case;         // "general q" | "q_z = 1" | "q = z"
  bool polynomial_part_zero = false;
  bool pole_structure_ok = false;
  bool q_yt_free = false;
  std::optional<JetQuotient> residual;  // first nonzero field residual
  std::vector<FieldResidual> residuals;
  ChangeOfVariables cov;

  bool passes() const { return polynomial_part_zero && pole_structure_ok && q_yt_free; }
};

struct Theorem1Report {
  int m = 0;
  int n = 0;
  std::vector<MapReport> maps;
  /// Solved map equals chain_rule_map (a~ = a q_z^2, v~ = v q_z - q_x).
  bool solved_is_chain_rule = false;
  /// Maps that validate for general q.
  std::vector<std::string> validating_general;
  bool passes() const;
};

Theorem1Report verify_theorem1(int m, int n);

/// check_ab(a0, b0) = 0 is required (IncompatibleGaugeError otherwise); then
/// a0, b0 are replaced by their expressions in q and the solved map removes
/// them. Defaults: a0 = q_y/q_z, b0 = q_t/q_z.
LaxPair eliminate_gauge(const LaxPair& lax, const FieldId& q = FieldId("q"),
                        std::optional<JetQuotient> a0 = std::nullopt, std::optional<JetQuotient> b0 = std::nullopt);

}  // namespace contactlax
