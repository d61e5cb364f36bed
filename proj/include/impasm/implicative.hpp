#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "impasm/errors.hpp"
#include "impasm/lattice.hpp"

namespace impasm {

enum class Connective { bot, top, neg, conj, disj, exists };
enum class Combinator { K, S, I, cc, fork };

inline const char* to_string(Combinator c) {
  switch (c) {
    case Combinator::K: return "K";
    case Combinator::S: return "S";
    case Combinator::I: return "I";
    case Combinator::cc: return "cc";
    case Combinator::fork: return "fork";
  }
  return "?";
}

/// A complete lattice with an implication satisfying the variance and
/// meet-distribution axioms.
///
/// Construction validates both axioms. Application, encoded conjunction and
/// the canonical combinators are tabulated once; every value equals the
/// defining meet evaluated by a full scan of the carrier.
class ImplicativeStructure {
 public:
  /// Validates the table against the lattice; throws AxiomViolation.
  ImplicativeStructure(FiniteLattice lattice, ImplicationTable imp);

  const FiniteLattice& lattice() const noexcept { return data_->lattice; }
  std::size_t size() const noexcept { return data_->lattice.size(); }
  const ImplicationTable& implication_table() const noexcept { return data_->imp; }

  Element imp(Element a, Element b) const {
    return el(imp_index(lattice().check(a), lattice().check(b)));
  }
  /// ab := meet { c : a <= b -> c }
  Element app(Element a, Element b) const {
    return el(app_index(lattice().check(a), lattice().check(b)));
  }
  /// Abstraction of an explicit finite map (f[i] is the image of element i):
  /// meet over a of (a -> f(a)).
  Element abs(std::span<const Element> f) const;

  Element neg(Element a) const { return imp(a, lattice().bottom()); }
  Element conj(Element a, Element b) const {
    return el(conj_index(lattice().check(a), lattice().check(b)));
  }
  Element disj(Element a, Element b) const;
  /// Encoded existential over a finite family.
  Element exists(std::span<const Element> family) const;

  Element combinator(Combinator c) const { return el(data_->combinators[static_cast<int>(c)]); }

  std::size_t imp_index(std::size_t a, std::size_t b) const noexcept {
    return data_->imp[a * size() + b];
  }
  std::size_t app_index(std::size_t a, std::size_t b) const noexcept {
    return data_->app[a * size() + b];
  }
  std::size_t conj_index(std::size_t a, std::size_t b) const noexcept {
    return data_->conj[a * size() + b];
  }
  std::size_t exists_index(std::span<const std::size_t> family) const;
  std::size_t abs_index(std::span<const std::size_t> f) const;

  friend bool operator==(const ImplicativeStructure& a, const ImplicativeStructure& b) noexcept {
    return a.data_ == b.data_;
  }

 private:
  Element el(std::size_t i) const { return lattice().element(i); }

  struct Data {
    explicit Data(FiniteLattice l) : lattice(std::move(l)) {}
    FiniteLattice lattice;
    ImplicationTable imp;
    std::vector<std::size_t> app;
    std::vector<std::size_t> conj;
    std::size_t combinators[5] = {};
  };
  std::shared_ptr<const Data> data_;
};

/// Checks both axioms and returns the structure. Axiom (2) is checked row by
/// row: each b |-> a -> b must send top to top and preserve binary meets,
/// which for a finite lattice is the same as preserving all meets.
inline ImplicativeStructure validate_structure(FiniteLattice lattice, ImplicationTable imp) {
  return ImplicativeStructure(std::move(lattice), std::move(imp));
}

/// Encoded connective by kind; `args` must match the arity (neg 1, conj/disj 2,
/// exists any, bot/top 0).
Element connective(const ImplicativeStructure& s, Connective kind, std::span<const Element> args);

inline Element combinator(const ImplicativeStructure& s, Combinator c) { return s.combinator(c); }

/// Heyting implication on a complete Heyting algebra.
inline ImplicativeStructure from_heyting(const FiniteLattice& lattice) {
  return ImplicativeStructure(lattice, heyting_implication(lattice));
}

/// Kleene implication on the powerset of a finite total applicative structure.
///
/// `apply[x * |P| + y]` is the index of x.y. Elements of the powerset are
/// ordered by bitmask and named like "{}", "{p}", "{p,q}".
ImplicativeStructure from_applicative(const std::vector<std::string>& carrier,
                                      const std::vector<std::size_t>& apply);

// ---------------------------------------------------------------------------

inline ImplicativeStructure::ImplicativeStructure(FiniteLattice lattice, ImplicationTable imp) {
  const std::size_t n = lattice.size();
  if (imp.size() != n * n) throw AxiomViolation("implication table has the wrong dimensions");
  for (std::size_t v : imp)
    if (v >= n) throw AxiomViolation("implication table refers to an unknown element");
  const auto& nm = lattice.names();
  auto I = [&](std::size_t a, std::size_t b) { return imp[a * n + b]; };

  // Variance: a' <= a and b <= b' imply (a -> b) <= (a' -> b').
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t a2 = 0; a2 < n; ++a2) {
      if (!lattice.leq_index(a2, a)) continue;
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t b2 = 0; b2 < n; ++b2) {
          if (!lattice.leq_index(b, b2)) continue;
          if (!lattice.leq_index(I(a, b), I(a2, b2)))
            throw AxiomViolation("variance axiom fails: " + nm[a2] + " <= " + nm[a] + " and " +
                                 nm[b] + " <= " + nm[b2] + " but (" + nm[a] + " -> " + nm[b] +
                                 ") is not below (" + nm[a2] + " -> " + nm[b2] + ")");
        }
    }
  // Meet distribution, row by row.
  const std::size_t top = lattice.top().index();
  for (std::size_t a = 0; a < n; ++a) {
    if (I(a, top) != top)
      throw AxiomViolation("meet-distribution axiom fails on the empty meet: " + nm[a] +
                           " -> " + nm[top] + " is not top");
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (I(a, lattice.meet_index(b, c)) != lattice.meet_index(I(a, b), I(a, c)))
          throw AxiomViolation("meet-distribution axiom fails: " + nm[a] + " -> (" + nm[b] +
                               " /\\ " + nm[c] + ") differs from the meet of the implications");
  }

  auto data = std::make_shared<Data>(lattice);
  data->imp = std::move(imp);
  data->app.assign(n * n, top);
  data->conj.assign(n * n, top);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t acc = top;
      for (std::size_t c = 0; c < n; ++c)
        if (lattice.leq_index(a, data->imp[b * n + c])) acc = lattice.meet_index(acc, c);
      data->app[a * n + b] = acc;
      // a /\~ b := meet_c ((a -> b -> c) -> c)
      std::size_t cj = top;
      for (std::size_t c = 0; c < n; ++c) {
        const std::size_t abc = data->imp[a * n + data->imp[b * n + c]];
        cj = lattice.meet_index(cj, data->imp[abc * n + c]);
      }
      data->conj[a * n + b] = cj;
    }

  auto J = [&](std::size_t x, std::size_t y) { return data->imp[x * n + y]; };
  std::size_t k = top, s = top, cc = top, fork = top, id = top;
  for (std::size_t a = 0; a < n; ++a) {
    id = lattice.meet_index(id, J(a, a));
    for (std::size_t b = 0; b < n; ++b) {
      k = lattice.meet_index(k, J(a, J(b, a)));
      cc = lattice.meet_index(cc, J(J(J(a, b), a), a));
      fork = lattice.meet_index(fork, J(a, J(b, lattice.meet_index(a, b))));
      for (std::size_t c = 0; c < n; ++c)
        s = lattice.meet_index(s, J(J(a, J(b, c)), J(J(a, b), J(a, c))));
    }
  }
  data->combinators[static_cast<int>(Combinator::K)] = k;
  data->combinators[static_cast<int>(Combinator::S)] = s;
  data->combinators[static_cast<int>(Combinator::I)] = id;
  data->combinators[static_cast<int>(Combinator::cc)] = cc;
  data->combinators[static_cast<int>(Combinator::fork)] = fork;
  data_ = std::move(data);
}

inline std::size_t ImplicativeStructure::abs_index(std::span<const std::size_t> f) const {
  if (f.size() != size()) throw ArityError("abstraction needs a total map on the carrier");
  std::size_t acc = lattice().top().index();
  for (std::size_t a = 0; a < f.size(); ++a) acc = lattice().meet_index(acc, imp_index(a, f[a]));
  return acc;
}

inline Element ImplicativeStructure::abs(std::span<const Element> f) const {
  std::vector<std::size_t> idx;
  idx.reserve(f.size());
  for (Element e : f) idx.push_back(lattice().check(e));
  return el(abs_index(idx));
}

inline Element ImplicativeStructure::disj(Element a, Element b) const {
  const std::size_t ia = lattice().check(a), ib = lattice().check(b);
  std::size_t acc = lattice().top().index();
  for (std::size_t c = 0; c < size(); ++c)
    acc = lattice().meet_index(acc,
                               imp_index(imp_index(ia, c), imp_index(imp_index(ib, c), c)));
  return el(acc);
}

inline std::size_t ImplicativeStructure::exists_index(std::span<const std::size_t> family) const {
  std::size_t acc = lattice().top().index();
  for (std::size_t c = 0; c < size(); ++c) {
    std::size_t premise = lattice().top().index();
    for (std::size_t a : family) premise = lattice().meet_index(premise, imp_index(a, c));
    acc = lattice().meet_index(acc, imp_index(premise, c));
  }
  return acc;
}

inline Element ImplicativeStructure::exists(std::span<const Element> family) const {
  std::vector<std::size_t> idx;
  idx.reserve(family.size());
  for (Element e : family) idx.push_back(lattice().check(e));
  return el(exists_index(idx));
}

inline Element connective(const ImplicativeStructure& s, Connective kind,
                          std::span<const Element> args) {
  auto need = [&](std::size_t k, const char* name) {
    if (args.size() != k)
      throw ArityError(std::string(name) + " takes " + std::to_string(k) + " argument(s), got " +
                       std::to_string(args.size()));
  };
  switch (kind) {
    case Connective::bot: need(0, "bot"); return s.lattice().bottom();
    case Connective::top: need(0, "top"); return s.lattice().top();
    case Connective::neg: need(1, "neg"); return s.neg(args[0]);
    case Connective::conj: need(2, "conj"); return s.conj(args[0], args[1]);
    case Connective::disj: need(2, "disj"); return s.disj(args[0], args[1]);
    case Connective::exists: return s.exists(args);
  }
  throw ArityError("unknown connective");
}

inline ImplicativeStructure from_applicative(const std::vector<std::string>& carrier,
                                             const std::vector<std::size_t>& apply) {
  const std::size_t p = carrier.size();
  if (p > 6) throw Error("applicative carrier too large for a powerset lattice");
  if (apply.size() != p * p) throw Error("application table must be total on the carrier");
  for (std::size_t v : apply)
    if (v >= p) throw Error("application table refers to an unknown point");
  const std::size_t n = std::size_t{1} << p;
  std::vector<std::string> names(n);
  for (std::size_t m = 0; m < n; ++m) {
    std::string s = "{";
    bool first = true;
    for (std::size_t i = 0; i < p; ++i)
      if (m & (std::size_t{1} << i)) {
        if (!first) s += ",";
        s += carrier[i];
        first = false;
      }
    names[m] = s + "}";
  }
  std::vector<std::uint8_t> leq(n * n, 0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) leq[a * n + b] = (a & ~b) == 0;
  FiniteLattice lattice(names, std::move(leq));

  ImplicationTable imp(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t out = 0;
      for (std::size_t x = 0; x < p; ++x) {
        bool all = true;
        for (std::size_t y = 0; y < p && all; ++y)
          if ((a >> y) & 1) all = (b >> apply[x * p + y]) & 1;
        if (all) out |= std::size_t{1} << x;
      }
      imp[a * n + b] = out;
    }
  try {
    return ImplicativeStructure(std::move(lattice), std::move(imp));
  } catch (const AxiomViolation& e) {
    throw InternalError(std::string("Kleene implication failed validation: ") + e.what());
  }
}

}  // namespace impasm
