#pragma once

#include <string>
#include <vector>

#include "impasm/separator.hpp"

namespace impasm::reference {

/// Boolean 2-chain, S = {1}.
inline ImplicativeAlgebra b2() {
  auto s = from_heyting(build_lattice({"0", "1"}, {{"0", "1"}}));
  const Element top[] = {s.lattice().top()};
  return ImplicativeAlgebra(validate_separator(s, top));
}

/// Heyting 3-chain 0 < u < 1, S = {1}.
inline ImplicativeAlgebra h3() {
  auto s = from_heyting(build_lattice({"0", "u", "1"}, {{"0", "u"}, {"u", "1"}}));
  const Element top[] = {s.lattice().top()};
  return ImplicativeAlgebra(validate_separator(s, top));
}

/// 3-chain with 0 -> x = 1 and u -> x = 1 -> x = x; S generated from nothing.
inline ImplicativeStructure n3_structure() {
  return validate_structure(build_lattice({"0", "u", "1"}, {{"0", "u"}, {"u", "1"}}),
                            {2, 2, 2, 0, 1, 2, 0, 1, 2});
}

inline ImplicativeAlgebra n3() { return ImplicativeAlgebra(generate(n3_structure(), {})); }

/// Heyting diamond 0 < a, b < 1, S = {1}.
inline ImplicativeAlgebra m2() {
  auto s = from_heyting(
      build_lattice({"0", "a", "b", "1"}, {{"0", "a"}, {"0", "b"}, {"a", "1"}, {"b", "1"}}));
  const Element top[] = {s.lattice().top()};
  return ImplicativeAlgebra(validate_separator(s, top));
}

/// Kleene powerset of the one-point applicative structure; S generated.
inline ImplicativeAlgebra k1() {
  return ImplicativeAlgebra(generate(from_applicative({"p"}, {0}), {}));
}

struct Named {
  std::string name;
  ImplicativeAlgebra algebra;
};

inline std::vector<Named> all() {
  return {{"B2", b2()}, {"H3", h3()}, {"N3", n3()}, {"M2", m2()}, {"K1", k1()}};
}

}  // namespace impasm::reference
