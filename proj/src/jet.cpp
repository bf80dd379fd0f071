#include "contactlax/jet.hpp"

#include <cstring>
#include <stdexcept>

#include "contactlax/errors.hpp"

namespace contactlax {

char dir_char(Dir d) {
  static constexpr char kChars[] = {'x', 'y', 'z', 't'};
  return kChars[static_cast<int>(d)];
}

Dir dir_from_char(char c) {
  switch (c) {
    case 'x': case 'X': return Dir::x;
    case 'y': case 'Y': return Dir::y;
    case 'z': case 'Z': return Dir::z;
    case 't': case 'T': return Dir::t;
    default: throw StructuralError(std::string("not a direction: '") + c + "'");
  }
}

FieldId::FieldId(std::string_view name) {
  if (name.empty() || name.size() > kMaxName) {
    throw StructuralError("field name must have 1.." + std::to_string(kMaxName) +
                          " characters: '" + std::string(name) + "'");
  }
  std::memcpy(name_.data(), name.data(), name.size());
}

std::string_view FieldId::name() const { return std::string_view(name_.data()); }

Role FieldId::role() const {
  const auto n = name();
  if (n == "psi" || n == "psi~") return Role::wave_function;
  if (n == "q") return Role::potential;
  if (n.size() == 1 && std::strchr("xyztXYZT", n[0]) != nullptr) return Role::independent;
  return Role::field;
}

Dir FieldId::coordinate_dir() const {
  if (role() != Role::independent) throw std::logic_error("not a coordinate: " + str());
  return dir_from_char(name()[0]);
}

JetVar JetVar::bumped(Dir dir) const {
  JetVar out = *this;
  auto& slot = out.d[static_cast<int>(dir)];
  if (out.order() + 1 > kMaxJetOrder) {
    throw std::logic_error("jet order cap exceeded for " + str());
  }
  ++slot;
  return out;
}

std::string JetVar::str() const {
  std::string s = field.str();
  if (order() == 0) return s;
  s += '_';
  for (Dir dir : kAllDirs) {
    s.append(d[static_cast<int>(dir)], dir_char(dir));
  }
  return s;
}

std::size_t JetVarHash::operator()(const JetVar& v) const noexcept {
  std::size_t h = std::hash<std::string_view>{}(v.field.name());
  for (auto c : v.d) h = h * 131 + c;
  return h;
}

}  // namespace contactlax
