#pragma once

#include <string>
#include <vector>

#include "contactlax/pfield.hpp"

namespace contactlax {

enum class Family { poly, rat, ratgp, custom };

std::string family_name(Family f);
Family parse_family(std::string_view s);

/// Number of independent variables the pair lives in. In 2+1 the z-jets of
/// fields vanish and psi_z = 1.
enum class Dims { d3plus1, d2plus1 };

/// psi_y = psi_z F(p, u), psi_t = psi_z G(p, u) with p = psi_x / psi_z.
struct LaxPair {
  PRational F;
  PRational G;
  std::vector<FieldId> fields;
  Family family = Family::custom;
  int m = 0;
  int n = 0;
  Dims dims = Dims::d3plus1;

  std::size_t size() const { return fields.size(); }
  /// Throws StructuralError when F or G mentions a field outside the roster
  /// (or a jet of psi).
  void validate() const;
};

/// Roster length N of a family.
int roster_size(Family f, int m, int n);

LaxPair make_poly(int m, int n);
LaxPair make_rat(int m, int n);
LaxPair make_ratgp(int m, int n);
LaxPair make_custom(PRational F, PRational G, std::vector<FieldId> fields, Dims dims = Dims::d3plus1);
LaxPair make_family(Family f, int m, int n);

/// Field names used by the families.
FieldId indexed(const char* stem, int i);

}  // namespace contactlax
