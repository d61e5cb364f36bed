#pragma once

#include <string>
#include <vector>

#include "impasm/assemblies.hpp"
#include "impasm/reference.hpp"

namespace fx {

using namespace impasm;

inline Element el(const FiniteLattice& L, const std::string& n) { return L.at(n); }
inline Element el(const ImplicativeStructure& s, const std::string& n) { return s.lattice().at(n); }
inline Element el(const ImplicativeAlgebra& a, const std::string& n) { return a.lattice().at(n); }

inline FiniteLattice chain3() { return build_lattice({"0", "u", "1"}, {{"0", "u"}, {"u", "1"}}); }
inline FiniteLattice diamond() {
  return build_lattice({"0", "a", "b", "1"}, {{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}});
}
inline FiniteLattice pentagon() {
  return build_lattice({"0", "a", "b", "c", "1"},
                       {{"0", "a"}, {"a", "b"}, {"b", "1"}, {"0", "c"}, {"c", "1"}});
}

/// The N3 assembly used throughout: x with E = u, y with E = 1.
inline Assembly n3_xy(const ImplicativeAlgebra& n3) {
  return Assembly(n3, {"x", "y"}, {el(n3, "u"), el(n3, "1")});
}

}  // namespace fx
