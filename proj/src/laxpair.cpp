#include "contactlax/laxpair.hpp"

#include <algorithm>

#include "contactlax/errors.hpp"

namespace contactlax {

std::string family_name(Family f) {
  switch (f) {
    case Family::poly:
      return "poly";
    case Family::rat:
      return "rat";
    case Family::ratgp:
      return "ratgp";
    case Family::custom:
      return "custom";
  }
  return "custom";
}

Family parse_family(std::string_view s) {
  if (s == "poly") return Family::poly;
  if (s == "rat") return Family::rat;
  if (s == "ratgp") return Family::ratgp;
  if (s == "custom") return Family::custom;
  throw ParameterError("unknown family '" + std::string(s) + "'");
}

FieldId indexed(const char* stem, int i) { return FieldId(std::string(stem) + std::to_string(i)); }

int roster_size(Family f, int m, int n) {
  switch (f) {
    case Family::poly:
      return m + n + 1;
    case Family::rat:
      return 2 * (m + n);
    case Family::ratgp:
      return 2 * (m + n + 1);
    case Family::custom:
      break;
  }
  return -1;
}

namespace {

void check_params(int m, int n) {
  if (m < 1 || n < 1)
    throw ParameterError("m and n must be natural numbers (>= 1), got m=" + std::to_string(m) +
                         ", n=" + std::to_string(n));
}

JetQuotient field(const FieldId& f) { return JetQuotient::jet(f); }

PRational pole_sum(const char* res, const char* pole, int count) {
  PRational out;
  for (int i = 1; i <= count; ++i)
    out += PRational::simple_pole(field(indexed(res, i)), field(indexed(pole, i)));
  return out;
}

}  // namespace

void LaxPair::validate() const {
  std::vector<FieldId> sorted = fields;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw StructuralError("duplicate field in roster");
  auto check = [&](const PRational& r, const char* which) {
    for (const auto& v : r.variables()) {
      const Role role = v.field.role();
      if (role == Role::independent) continue;
      if (role == Role::wave_function)
        throw StructuralError(std::string(which) + " must not depend on jets of psi");
      if (!std::binary_search(sorted.begin(), sorted.end(), v.field))
        throw StructuralError(std::string(which) + " uses " + v.field.str() + ", which is not in the roster");
    }
  };
  check(F, "F");
  check(G, "G");
}

LaxPair make_poly(int m, int n) {
  check_params(m, n);
  LaxPair lax;
  lax.family = Family::poly;
  lax.m = m;
  lax.n = n;
  std::vector<JetQuotient> f(static_cast<std::size_t>(m + 2));
  for (int i = 0; i <= m; ++i) f[static_cast<std::size_t>(i)] = field(indexed("v", i));
  f.back() = JetQuotient(1);
  std::vector<JetQuotient> g(static_cast<std::size_t>(n + 2));
  for (int j = 0; j < n; ++j) g[static_cast<std::size_t>(j)] = field(indexed("w", j));
  Rational ratio(n, m);
  ratio.canonicalize();
  g[static_cast<std::size_t>(n)] = JetQuotient(ratio) * field(indexed("v", m));
  g.back() = JetQuotient(1);
  lax.F = PRational(PPoly(std::move(f)));
  lax.G = PRational(PPoly(std::move(g)));
  for (int i = 0; i <= m; ++i) lax.fields.push_back(indexed("v", i));
  for (int j = 0; j < n; ++j) lax.fields.push_back(indexed("w", j));
  return lax;
}

LaxPair make_rat(int m, int n) {
  check_params(m, n);
  LaxPair lax;
  lax.family = Family::rat;
  lax.m = m;
  lax.n = n;
  lax.F = pole_sum("a", "v", m);
  lax.G = pole_sum("b", "w", n);
  for (int i = 1; i <= m; ++i) lax.fields.push_back(indexed("a", i));
  for (int i = 1; i <= m; ++i) lax.fields.push_back(indexed("v", i));
  for (int j = 1; j <= n; ++j) lax.fields.push_back(indexed("b", j));
  for (int j = 1; j <= n; ++j) lax.fields.push_back(indexed("w", j));
  return lax;
}

LaxPair make_ratgp(int m, int n) {
  check_params(m, n);
  LaxPair lax;
  lax.family = Family::ratgp;
  lax.m = m;
  lax.n = n;
  lax.F = PRational(field("a0")) + pole_sum("a", "v", m);
  lax.G = PRational(field("b0")) + pole_sum("b", "w", n);
  for (int i = 0; i <= m; ++i) lax.fields.push_back(indexed("a", i));
  for (int i = 1; i <= m; ++i) lax.fields.push_back(indexed("v", i));
  for (int j = 0; j <= n; ++j) lax.fields.push_back(indexed("b", j));
  for (int j = 1; j <= n; ++j) lax.fields.push_back(indexed("w", j));
  return lax;
}

LaxPair make_custom(PRational F, PRational G, std::vector<FieldId> fields, Dims dims) {
  LaxPair lax;
  lax.F = std::move(F);
  lax.G = std::move(G);
  lax.fields = std::move(fields);
  lax.dims = dims;
  lax.validate();
  return lax;
}

LaxPair make_family(Family f, int m, int n) {
  switch (f) {
    case Family::poly:
      return make_poly(m, n);
    case Family::rat:
      return make_rat(m, n);
    case Family::ratgp:
      return make_ratgp(m, n);
    case Family::custom:
      break;
  }
  throw ParameterError("custom pairs have no (m, n) constructor");
}

}  // namespace contactlax
