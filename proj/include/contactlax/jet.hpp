#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace contactlax {

using Rational = mpq_class;

/// Independent directions. In Cauchy-Kowalevski frames the same four slots
/// stand for (X, Y, Z, T).
enum class Dir : std::uint8_t { x = 0, y = 1, z = 2, t = 3 };

inline constexpr std::array<Dir, 4> kAllDirs = {Dir::x, Dir::y, Dir::z, Dir::t};

char dir_char(Dir d);
Dir dir_from_char(char c);

enum class Role : std::uint8_t { field, potential, wave_function, independent };

/// Symbolic name of a dependent variable, potential, wave function or
/// coordinate. Names are at most 15 bytes and compare lexicographically.
class FieldId {
 public:
  static constexpr std::size_t kMaxName = 15;

  FieldId() = default;
  FieldId(std::string_view name);  // NOLINT(google-explicit-constructor)
  FieldId(const char* name) : FieldId(std::string_view(name)) {}

  std::string_view name() const;
  std::string str() const { return std::string(name()); }

  /// Role by naming convention: psi, psi~ are wave functions, q is the gauge
  /// potential, x/y/z/t and X/Y/Z/T are coordinates, anything else a field.
  Role role() const;

  /// For a coordinate symbol, the direction it measures.
  Dir coordinate_dir() const;

  friend auto operator<=>(const FieldId&, const FieldId&) = default;
  friend bool operator==(const FieldId&, const FieldId&) = default;

 private:
  std::array<char, kMaxName + 1> name_{};
};

using MultiIndex = std::array<std::uint8_t, 4>;

inline int order(const MultiIndex& d) { return d[0] + d[1] + d[2] + d[3]; }

inline MultiIndex unit(Dir dir) {
  MultiIndex d{};
  d[static_cast<int>(dir)] = 1;
  return d;
}

/// A field symbol together with a derivative multi-index (n_x, n_y, n_z, n_t).
/// Ordered lexicographically on (field name, multi-index).
struct JetVar {
  FieldId field;
  MultiIndex d{};

  JetVar() = default;
  JetVar(FieldId f, MultiIndex idx = {}) : field(f), d(idx) {}

  int order() const { return contactlax::order(d); }
  JetVar bumped(Dir dir) const;
  /// "v", "v_x", "psi_xz", "q_yy": the compact textual form used by the parser.
  std::string str() const;

  friend auto operator<=>(const JetVar&, const JetVar&) = default;
  friend bool operator==(const JetVar&, const JetVar&) = default;
};

/// Hard cap on total jet order. Derivation paths never come close.
inline constexpr int kMaxJetOrder = 8;

struct JetVarHash {
  std::size_t operator()(const JetVar& v) const noexcept;
};

}  // namespace contactlax
