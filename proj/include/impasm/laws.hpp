#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "impasm/assemblies.hpp"
#include "impasm/forcing.hpp"
#include "impasm/lambda.hpp"
#include "impasm/lccc.hpp"
#include "impasm/nno.hpp"

namespace impasm {

struct LawReport {
  std::string name;
  std::size_t checks = 0;
  std::vector<std::string> failures;
  bool passed() const noexcept { return failures.empty(); }
  void fail(std::string msg) {
    if (failures.size() < 20) failures.push_back(std::move(msg));
    else if (failures.size() == 20) failures.push_back("...");
  }
};

/// Random closed lambda term of at most `depth` levels. If `params` is not
/// empty, leaves may also be parameters drawn from it.
Term random_closed_term(std::mt19937_64& rng, std::size_t depth,
                        const std::vector<Term>& params = {});

/// Variance and meet distribution, recomputed from the table.
LawReport check_axioms(const ImplicativeStructure& s);
/// ab <= c iff a <= b -> c, for every triple.
LawReport check_adjunction(const ImplicativeStructure& s);
/// Application monotone in both places, abstraction monotone pointwise.
LawReport check_monotonicity(const ImplicativeStructure& s);
/// (lambda f) a <= f(a) and a <= lambda(x |-> a x), over every f : A -> A.
LawReport check_beta_eta(const ImplicativeStructure& s);
/// app = meet, and closed pure terms evaluate to top.
LawReport check_heyting_collapse(const ImplicativeStructure& s, std::size_t terms,
                                 std::uint64_t seed);
/// t -> t' in one beta step gives (t) <= (t'); eta expansion goes up.
LawReport check_beta_soundness(const ImplicativeStructure& s, std::size_t terms,
                               std::uint64_t seed);

struct LawSuiteOptions {
  std::size_t max_carrier = 2;
  std::size_t random_terms = 200;
  std::uint64_t seed = 20240229;
  std::size_t nno_bound = 4;
};

/// Everything above plus universal properties, the dependent-product
/// adjunction on small slices, the NNO oracle and the forcing equivalences.
std::vector<LawReport> run_law_suite(const ImplicativeAlgebra& alg, const LawSuiteOptions& opt = {});

// ---------------------------------------------------------------------------

inline Term random_closed_term(std::mt19937_64& rng, std::size_t depth,
                               const std::vector<Term>& params) {
  std::vector<std::string> scope;
  auto gen = [&](auto&& self, std::size_t d) -> Term {
    std::uniform_int_distribution<int> pick(0, 9);
    const int r = pick(rng);
    const bool leaf = d == 0 || (r < 3 && !scope.empty());
    if (leaf) {
      if (!params.empty() && (scope.empty() || r == 0)) {
        std::uniform_int_distribution<std::size_t> pp(0, params.size() - 1);
        return params[pp(rng)];
      }
      if (!scope.empty()) {
        std::uniform_int_distribution<std::size_t> pv(0, scope.size() - 1);
        return Term::var(scope[pv(rng)]);
      }
    }
    if (scope.empty() || r < 6 || d == 0) {
      scope.push_back("x" + std::to_string(scope.size()));
      Term body = self(self, d == 0 ? 0 : d - 1);
      Term t = Term::lam(scope.back(), body);
      scope.pop_back();
      return t;
    }
    Term fn = self(self, d - 1);
    Term arg = self(self, d - 1);
    return Term::app(fn, arg);
  };
  return gen(gen, depth);
}

inline LawReport check_axioms(const ImplicativeStructure& s) {
  LawReport r{"axioms", 0, {}};
  const FiniteLattice& L = s.lattice();
  const std::size_t n = L.size();
  const auto& nm = L.names();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t a2 = 0; a2 < n; ++a2)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t b2 = 0; b2 < n; ++b2) {
          if (!L.leq_index(a2, a) || !L.leq_index(b, b2)) continue;
          ++r.checks;
          if (!L.leq_index(s.imp_index(a, b), s.imp_index(a2, b2)))
            r.fail("variance: " + nm[a] + "->" + nm[b] + " not below " + nm[a2] + "->" + nm[b2]);
        }
  const std::size_t top = L.top().index();
  for (std::size_t a = 0; a < n; ++a) {
    ++r.checks;
    if (s.imp_index(a, top) != top) r.fail("meet distribution: " + nm[a] + " -> top is not top");
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        ++r.checks;
        if (s.imp_index(a, L.meet_index(b, c)) != L.meet_index(s.imp_index(a, b), s.imp_index(a, c)))
          r.fail("meet distribution fails at " + nm[a] + ", " + nm[b] + ", " + nm[c]);
      }
  }
  return r;
}

inline LawReport check_adjunction(const ImplicativeStructure& s) {
  LawReport r{"adjunction", 0, {}};
  const FiniteLattice& L = s.lattice();
  const std::size_t n = L.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        ++r.checks;
        if (L.leq_index(s.app_index(a, b), c) != L.leq_index(a, s.imp_index(b, c)))
          r.fail("adjunction fails at " + L.names()[a] + ", " + L.names()[b] + ", " + L.names()[c]);
      }
  return r;
}

namespace detail {

/// All functions A -> A as index vectors (|A|^|A| of them).
inline std::vector<std::vector<std::size_t>> all_functions(std::size_t n) { return all_maps(n, n); }

}  // namespace detail

inline LawReport check_monotonicity(const ImplicativeStructure& s) {
  LawReport r{"monotonicity", 0, {}};
  const FiniteLattice& L = s.lattice();
  const std::size_t n = L.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t a2 = 0; a2 < n; ++a2)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t b2 = 0; b2 < n; ++b2) {
          if (!L.leq_index(a, a2) || !L.leq_index(b, b2)) continue;
          ++r.checks;
          if (!L.leq_index(s.app_index(a, b), s.app_index(a2, b2)))
            r.fail("application is not monotone at " + L.names()[a] + L.names()[b]);
        }
  const auto fs = detail::all_functions(n);
  std::vector<std::size_t> lam(fs.size());
  for (std::size_t i = 0; i < fs.size(); ++i) lam[i] = s.abs_index(fs[i]);
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (std::size_t j = 0; j < fs.size(); ++j) {
      bool below = true;
      for (std::size_t x = 0; x < n && below; ++x) below = L.leq_index(fs[i][x], fs[j][x]);
      if (!below) continue;
      ++r.checks;
      if (!L.leq_index(lam[i], lam[j])) r.fail("abstraction is not monotone");
    }
  return r;
}

inline LawReport check_beta_eta(const ImplicativeStructure& s) {
  LawReport r{"beta/eta", 0, {}};
  const FiniteLattice& L = s.lattice();
  const std::size_t n = L.size();
  for (const auto& f : detail::all_functions(n)) {
    const std::size_t lf = s.abs_index(f);
    for (std::size_t a = 0; a < n; ++a) {
      ++r.checks;
      if (!L.leq_index(s.app_index(lf, a), f[a])) r.fail("beta inequality fails");
    }
  }
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::size_t> f(n);
    for (std::size_t x = 0; x < n; ++x) f[x] = s.app_index(a, x);
    ++r.checks;
    if (!L.leq_index(a, s.abs_index(f))) r.fail("eta inequality fails at " + L.names()[a]);
  }
  return r;
}

inline LawReport check_heyting_collapse(const ImplicativeStructure& s, std::size_t terms,
                                        std::uint64_t seed) {
  LawReport r{"heyting collapse", 0, {}};
  const FiniteLattice& L = s.lattice();
  const std::size_t n = L.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      ++r.checks;
      if (s.app_index(a, b) != L.meet_index(a, b))
        r.fail("application differs from meet at " + L.names()[a] + ", " + L.names()[b]);
    }
  std::mt19937_64 rng(seed);
  Interpreter eval(s);
  for (std::size_t i = 0; i < terms; ++i) {
    Term t = random_closed_term(rng, 5);
    ++r.checks;
    if (!(eval(t) == L.top())) r.fail("closed term " + to_string(t) + " is not top");
  }
  for (const char* m : {"identity", "pi1", "pi2", "nno_zero", "nno_succ", "inl_tracker"}) {
    ++r.checks;
    if (!(eval(macro(m)) == L.top())) r.fail(std::string("closed term ") + m + " is not top");
  }
  return r;
}

inline LawReport check_beta_soundness(const ImplicativeStructure& s, std::size_t terms,
                                      std::uint64_t seed) {
  LawReport r{"beta soundness", 0, {}};
  const FiniteLattice& L = s.lattice();
  std::mt19937_64 rng(seed);
  std::vector<Term> params;
  for (Element e : L.elements()) params.push_back(Term::param(L, e));
  Interpreter eval(s);
  std::size_t with_redex = 0;
  for (std::size_t i = 0; i < terms || with_redex < terms / 2; ++i) {
    if (i > terms * 20) break;
    Term t = random_closed_term(rng, 5, i % 2 ? params : std::vector<Term>{});
    const Element v = eval(t);
    const auto reducts = beta_reducts(t);
    if (!reducts.empty()) ++with_redex;
    for (const Term& u : reducts) {
      ++r.checks;
      if (!L.leq(v, eval(u)))
        r.fail("beta step raises nothing: " + to_string(t) + " -> " + to_string(u));
    }
    // eta: (\y. t y) >= t for closed t.
    Term expanded = Term::lam("y_eta", Term::app(t, Term::var("y_eta")));
    ++r.checks;
    if (!L.leq(v, eval(expanded))) r.fail("eta expansion goes down at " + to_string(t));
  }
  if (with_redex < terms / 2) r.fail("generator produced too few redexes");
  return r;
}

inline std::vector<LawReport> run_law_suite(const ImplicativeAlgebra& alg,
                                            const LawSuiteOptions& opt) {
  const ImplicativeStructure& s = alg.structure();
  std::vector<LawReport> out;
  out.push_back(check_axioms(s));
  out.push_back(check_adjunction(s));
  out.push_back(check_monotonicity(s));
  out.push_back(check_beta_eta(s));
  if (s.implication_table() == heyting_implication(s.lattice()))
    out.push_back(check_heyting_collapse(s, opt.random_terms, opt.seed));
  out.push_back(check_beta_soundness(s, opt.random_terms, opt.seed));

  {
    LawReport r{"separator", 1, {}};
    try {
      validate_separator(s, alg.separator().members());
      if (!(generate(s, alg.separator().members()) == alg.separator()))
        r.fail("separator is not closed under generation");
    } catch (const Error& e) {
      r.fail(e.what());
    }
    out.push_back(std::move(r));
  }

  const auto family = assembly_family(alg, opt.max_carrier);
  for (UniversalKind k : {UniversalKind::terminal, UniversalKind::product, UniversalKind::equalizer,
                          UniversalKind::initial, UniversalKind::coproduct,
                          UniversalKind::coequalizer, UniversalKind::classifier}) {
    LawReport r{std::string("universal ") + to_string(k), 0, {}};
    try {
      UniversalReport u = verify_universal_property(k, alg, family);
      r.checks = u.checks;
      for (auto& f : u.failures) r.fail(f);
    } catch (const Error& e) {
      r.fail(e.what());
    }
    out.push_back(std::move(r));
  }

  {
    LawReport r{"dependent product adjunction", 0, {}};
    const auto small = assembly_family(alg, std::min<std::size_t>(opt.max_carrier, 2));
    try {
      for (const Assembly& x : small)
        for (const Assembly& y : small)
          for (const Morphism& f : hom_set(x, y))
            for (const Assembly& pt : small)
              for (const Morphism& p : hom_set(pt, y))
                for (const Assembly& qt : small)
                  for (const Morphism& q : hom_set(qt, x)) {
                    ++r.checks;
                    auto rep = verify_pi_adjunction(f, SlicedObject(p), SlicedObject(q));
                    if (!rep.passed())
                      r.fail("adjunction fails for f = " + detail::describe(f) + ": " +
                             std::to_string(rep.left) + " vs " + std::to_string(rep.right));
                  }
    } catch (const Error& e) {
      r.fail(e.what());
    }
    out.push_back(std::move(r));
  }

  {
    LawReport r{"natural numbers", 0, {}};
    const std::size_t n = alg.lattice().size();
    try {
      for (std::size_t k = 0; k <= opt.nno_bound; ++k) {
        ++r.checks;
        const Element a = nat_exists(alg, k);
        const Element b = nat_oracle(s, k, n * n + k, n);
        if (!(a == b))
          r.fail("E_N(" + std::to_string(k) + ") = " + alg.name(a) + " but the oracle gives " +
                 alg.name(b));
      }
      truncated_nno(alg, opt.nno_bound + 1);
    } catch (const Error& e) {
      r.fail(e.what());
    }
    out.push_back(std::move(r));
  }

  {
    LawReport r{"forcing", 2, {}};
    ForcingReport f = forcing_report(alg);
    if (f.flags.filter != f.i_is_iso) r.fail("filter and iso of i disagree");
    if (!f.equivalences_consistent) r.fail("principal, iso of i and fullness of Gamma disagree");
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace impasm
