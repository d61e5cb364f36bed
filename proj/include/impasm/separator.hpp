#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "impasm/errors.hpp"
#include "impasm/implicative.hpp"

namespace impasm {

/// An upward-closed set of truth values containing K and S and closed under
/// modus ponens. Stored as a bitset over the carrier.
class Separator {
 public:
  const ImplicativeStructure& structure() const noexcept { return structure_; }

  bool contains(Element e) const { return members_[structure_.lattice().check(e)]; }
  bool contains_index(std::size_t i) const noexcept { return members_[i]; }

  /// Members in declared order.
  std::vector<Element> members() const {
    std::vector<Element> out;
    for (std::size_t i = 0; i < members_.size(); ++i)
      if (members_[i]) out.push_back(structure_.lattice().element(i));
    return out;
  }
  std::size_t size() const noexcept {
    std::size_t n = 0;
    for (bool b : members_) n += b;
    return n;
  }
  const std::vector<bool>& bits() const noexcept { return members_; }

  friend bool operator==(const Separator& a, const Separator& b) {
    return a.structure_ == b.structure_ && a.members_ == b.members_;
  }

 private:
  friend Separator validate_separator(const ImplicativeStructure&, std::span<const Element>);
  friend Separator generate(const ImplicativeStructure&, std::span<const Element>);
  Separator(ImplicativeStructure s, std::vector<bool> bits)
      : structure_(std::move(s)), members_(std::move(bits)) {}

  ImplicativeStructure structure_;
  std::vector<bool> members_;
};

/// Checks upward closure, the Hilbert axioms and modus ponens exhaustively.
/// Throws SeparatorViolation naming the failed condition and its witness.
Separator validate_separator(const ImplicativeStructure& s, std::span<const Element> members);

/// Least separator containing `generators`: K and S are added, then upward
/// closure and modus-ponens sweeps alternate until nothing changes.
Separator generate(const ImplicativeStructure& s, std::span<const Element> generators);

/// Implicative structure together with a separator. Cheap to copy.
class ImplicativeAlgebra {
 public:
  ImplicativeAlgebra(Separator separator)
      : data_(std::make_shared<const Separator>(std::move(separator))) {}

  const ImplicativeStructure& structure() const noexcept { return data_->structure(); }
  const FiniteLattice& lattice() const noexcept { return data_->structure().lattice(); }
  const Separator& separator() const noexcept { return *data_; }

  bool in_separator(Element e) const { return data_->contains(e); }
  bool in_separator_index(std::size_t i) const noexcept { return data_->contains_index(i); }

  Element top() const { return lattice().top(); }
  Element bottom() const { return lattice().bottom(); }
  const std::string& name(Element e) const { return lattice().name(e); }

  friend bool operator==(const ImplicativeAlgebra& a, const ImplicativeAlgebra& b) noexcept {
    return a.data_ == b.data_ || *a.data_ == *b.data_;
  }

 private:
  std::shared_ptr<const Separator> data_;
};

struct SeparatorFlags {
  bool consistent = false;  // bottom not in S
  bool classical = false;   // cc in S
  bool filter = false;      // fork in S
  bool principal = false;   // meet of S in S
};

SeparatorFlags classify(const ImplicativeAlgebra& alg);

/// Smallest element of S when S is principal.
std::optional<Element> separator_minimum(const ImplicativeAlgebra& alg);

/// a |-_S b iff (a -> b) in S.
bool entails(const ImplicativeAlgebra& alg, Element a, Element b);

/// Pointwise entailment of families indexed by position:
/// meet_i (phi_i -> psi_i) in S.
bool entails_indexed(const ImplicativeAlgebra& alg, std::span<const Element> phi,
                     std::span<const Element> psi);

// ---------------------------------------------------------------------------

inline Separator validate_separator(const ImplicativeStructure& s,
                                    std::span<const Element> members) {
  const FiniteLattice& L = s.lattice();
  const std::size_t n = L.size();
  std::vector<bool> bits(n, false);
  for (Element e : members) bits[L.check(e)] = true;
  const auto& nm = L.names();
  for (std::size_t a = 0; a < n; ++a) {
    if (!bits[a]) continue;
    for (std::size_t b = 0; b < n; ++b)
      if (L.leq_index(a, b) && !bits[b])
        throw SeparatorViolation("upward closure fails: " + nm[a] + " is a member, " + nm[a] +
                                 " <= " + nm[b] + " but " + nm[b] + " is not");
  }
  for (Combinator c : {Combinator::K, Combinator::S}) {
    const std::size_t v = s.combinator(c).index();
    if (!bits[v])
      throw SeparatorViolation(std::string("Hilbert axioms fail: ") + to_string(c) + " = " +
                               nm[v] + " is not a member");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!bits[a]) continue;
    for (std::size_t b = 0; b < n; ++b)
      if (bits[s.imp_index(a, b)] && !bits[b])
        throw SeparatorViolation("modus ponens fails: " + nm[a] + " and " + nm[a] + " -> " +
                                 nm[b] + " are members but " + nm[b] + " is not");
  }
  return Separator(s, std::move(bits));
}

inline Separator generate(const ImplicativeStructure& s, std::span<const Element> generators) {
  const FiniteLattice& L = s.lattice();
  const std::size_t n = L.size();
  std::vector<bool> bits(n, false);
  for (Element e : generators) bits[L.check(e)] = true;
  bits[s.combinator(Combinator::K).index()] = true;
  bits[s.combinator(Combinator::S).index()] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t a = 0; a < n; ++a) {
      if (!bits[a]) continue;
      for (std::size_t b = 0; b < n; ++b)
        if (!bits[b] && L.leq_index(a, b)) bits[b] = changed = true;
    }
    for (std::size_t a = 0; a < n; ++a) {
      if (!bits[a]) continue;
      for (std::size_t b = 0; b < n; ++b)
        if (!bits[b] && bits[s.imp_index(a, b)]) bits[b] = changed = true;
    }
  }
  return Separator(s, std::move(bits));
}

inline std::optional<Element> separator_minimum(const ImplicativeAlgebra& alg) {
  const auto members = alg.separator().members();
  const Element m = alg.lattice().meet_all(members);
  if (alg.in_separator(m)) return m;
  return std::nullopt;
}

inline SeparatorFlags classify(const ImplicativeAlgebra& alg) {
  const ImplicativeStructure& s = alg.structure();
  SeparatorFlags f;
  f.consistent = !alg.in_separator(alg.bottom());
  f.classical = alg.in_separator(s.combinator(Combinator::cc));
  f.filter = alg.in_separator(s.combinator(Combinator::fork));
  f.principal = separator_minimum(alg).has_value();
  if (f.principal && !f.filter)
    throw InternalError("principal separator without the choice operator");
  return f;
}

inline bool entails(const ImplicativeAlgebra& alg, Element a, Element b) {
  return alg.in_separator(alg.structure().imp(a, b));
}

inline bool entails_indexed(const ImplicativeAlgebra& alg, std::span<const Element> phi,
                            std::span<const Element> psi) {
  if (phi.size() != psi.size())
    throw LengthMismatch("indexed entailment needs families of equal length (" +
                         std::to_string(phi.size()) + " vs " + std::to_string(psi.size()) + ")");
  Element acc = alg.top();
  for (std::size_t i = 0; i < phi.size(); ++i)
    acc = alg.lattice().meet(acc, alg.structure().imp(phi[i], psi[i]));
  return alg.in_separator(acc);
}

}  // namespace impasm
