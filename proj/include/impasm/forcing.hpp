#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "impasm/assemblies.hpp"

namespace impasm {

/// 2 with E(0) = (\x y. x) and E(1) = (\x y. y).
Assembly two_assembly(const ImplicativeAlgebra& alg);
/// The identity on points, from 2 to Delta{0, 1}.
Morphism canonical_i(const ImplicativeAlgebra& alg);
bool check_i_iso(const ImplicativeAlgebra& alg);

/// Every set map between members of the family is tracked.
bool gamma_fullness_sample(std::span<const Assembly> family);
bool gamma_fullness_sample(const ImplicativeAlgebra& alg);  // family: carriers <= 2

struct ForcingReport {
  SeparatorFlags flags;
  bool i_is_iso = false;
  bool gamma_full_sampled = false;
  bool equivalences_consistent = false;
  std::optional<Element> minimum;
  std::size_t quotient_size = 0;  // number of mutual-entailment classes
  bool forcing() const { return flags.principal && equivalences_consistent; }
};
ForcingReport forcing_report(const ImplicativeAlgebra& alg);

/// Number of classes of a -||- b.
std::size_t entailment_classes(const ImplicativeAlgebra& alg);

using StructurePredicate = std::function<bool(const ImplicativeAlgebra&)>;

/// Parses "valid", "consistent", "classical", "filter", "principal",
/// "heyting", optionally negated with '!' and joined with '&'.
/// Throws Error on unknown words.
StructurePredicate parse_predicate(std::string_view text);

struct SearchOutcome {
  std::size_t candidates = 0;  // tables passed to full validation
  std::size_t valid = 0;
  std::vector<ImplicativeAlgebra> hits;
};

/// Enumerates implication tables on `lattice` whose rows preserve top and
/// binary meets and are antitone in the first argument, validates them,
/// generates S from nothing and keeps up to `limit` algebras satisfying `pred`.
SearchOutcome search_structures(const FiniteLattice& lattice, const StructurePredicate& pred,
                                std::size_t limit);

// ---------------------------------------------------------------------------

inline Assembly two_assembly(const ImplicativeAlgebra& alg) {
  const ImplicativeStructure& s = alg.structure();
  return Assembly(alg, {"0", "1"},
                  {interpret(parse("\\x y. x"), s), interpret(parse("\\x y. y"), s)});
}

inline Morphism canonical_i(const ImplicativeAlgebra& alg) {
  return check_morphism(two_assembly(alg), delta(alg, {"0", "1"}), {0, 1});
}

inline bool check_i_iso(const ImplicativeAlgebra& alg) { return is_iso(canonical_i(alg)); }

inline bool gamma_fullness_sample(std::span<const Assembly> family) {
  for (const Assembly& x : family)
    for (const Assembly& y : family)
      for (const auto& m : all_maps(x.size(), y.size()))
        if (!x.algebra().in_separator_index(tracking_meet(x, y, m))) return false;
  return true;
}

inline bool gamma_fullness_sample(const ImplicativeAlgebra& alg) {
  const auto family = assembly_family(alg, 2);
  return gamma_fullness_sample(family);
}

inline std::size_t entailment_classes(const ImplicativeAlgebra& alg) {
  const std::size_t n = alg.lattice().size();
  UnionFind uf(n);
  const auto& s = alg.structure();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (alg.in_separator_index(s.imp_index(a, b)) && alg.in_separator_index(s.imp_index(b, a)))
        uf.unite(a, b);
  std::size_t classes = 0;
  for (std::size_t a = 0; a < n; ++a) classes += uf.find(a) == a;
  return classes;
}

inline ForcingReport forcing_report(const ImplicativeAlgebra& alg) {
  ForcingReport r;
  r.flags = classify(alg);
  r.i_is_iso = check_i_iso(alg);
  r.gamma_full_sampled = gamma_fullness_sample(alg);
  r.equivalences_consistent =
      r.flags.principal == r.i_is_iso && r.i_is_iso == r.gamma_full_sampled;
  r.minimum = separator_minimum(alg);
  r.quotient_size = entailment_classes(alg);
  return r;
}

inline StructurePredicate parse_predicate(std::string_view text) {
  std::vector<std::pair<bool, std::string>> terms;
  std::string cur;
  auto flush = [&] {
    std::string t;
    for (char c : cur)
      if (c != ' ' && c != '\t') t += c;
    cur.clear();
    bool neg = false;
    while (!t.empty() && t[0] == '!') {
      neg = !neg;
      t.erase(0, 1);
    }
    if (t.empty()) throw Error("empty term in predicate");
    static const char* known[] = {"valid", "consistent", "classical", "filter", "principal", "heyting"};
    if (std::find(std::begin(known), std::end(known), t) == std::end(known))
      throw Error("unknown predicate word '" + t + "'");
    terms.emplace_back(neg, t);
  };
  for (char c : text) {
    if (c == '&' || c == ',') {
      if (!cur.empty()) flush();
      continue;
    }
    cur += c;
  }
  flush();
  return [terms](const ImplicativeAlgebra& alg) {
    const SeparatorFlags f = classify(alg);
    for (const auto& [neg, word] : terms) {
      bool v = true;
      if (word == "consistent") v = f.consistent;
      else if (word == "classical") v = f.classical;
      else if (word == "filter") v = f.filter;
      else if (word == "principal") v = f.principal;
      else if (word == "heyting") v = alg.structure().implication_table() == heyting_implication(alg.lattice());
      if (v == neg) return false;
    }
    return true;
  };
}

inline SearchOutcome search_structures(const FiniteLattice& lattice, const StructurePredicate& pred,
                                       std::size_t limit) {
  const std::size_t n = lattice.size();
  const std::size_t top = lattice.top().index();
  // Candidate rows: maps preserving top and binary meets.
  std::vector<std::vector<std::size_t>> rows;
  for (auto& r : all_maps(n, n)) {
    if (r[top] != top) continue;
    bool ok = true;
    for (std::size_t a = 0; a < n && ok; ++a)
      for (std::size_t b = 0; b < n && ok; ++b)
        ok = r[lattice.meet_index(a, b)] == lattice.meet_index(r[a], r[b]);
    if (ok) rows.push_back(std::move(r));
  }
  auto pointwise_leq = [&](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    for (std::size_t i = 0; i < n; ++i)
      if (!lattice.leq_index(x[i], y[i])) return false;
    return true;
  };

  SearchOutcome out;
  std::vector<std::size_t> choice;
  auto rec = [&](auto&& self) -> void {
    if (out.hits.size() >= limit) return;
    const std::size_t a = choice.size();
    if (a == n) {
      ++out.candidates;
      ImplicationTable table(n * n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) table[i * n + j] = rows[choice[i]][j];
      std::optional<ImplicativeStructure> s;
      try {
        s.emplace(lattice, std::move(table));
      } catch (const AxiomViolation&) {
        return;
      }
      ++out.valid;
      ImplicativeAlgebra alg(generate(*s, {}));
      if (pred(alg)) out.hits.push_back(std::move(alg));
      return;
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
      bool ok = true;
      for (std::size_t b = 0; b < a && ok; ++b) {
        if (lattice.leq_index(b, a)) ok = pointwise_leq(rows[k], rows[choice[b]]);
        if (ok && lattice.leq_index(a, b)) ok = pointwise_leq(rows[choice[b]], rows[k]);
      }
      if (!ok) continue;
      choice.push_back(k);
      self(self);
      choice.pop_back();
    }
  };
  rec(rec);
  return out;
}

}  // namespace impasm
