#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "impasm/assemblies.hpp"

namespace impasm {

// E_N(n) is a meet over all sequences a in A^N of
//   a_0 -> (meet_p (a_p -> a_{p+1})) -> a_n.
// Split a sequence at n. The prefix a_0..a_n is finite. The tail from a_n
// contributes a running meet m of arrows; m only decreases, so along any
// infinite chain it stabilizes after finitely many steps. Walking the graph
// of states (y, m) from (a_n, top), a stabilized value is the m of a state
// that the chain revisits infinitely often, i.e. one lying on a cycle.
// Conversely looping on such a cycle keeps m fixed. So the tail values are
// exactly the m of reachable states on a nonempty cycle.

/// Running-meet values that some infinite arrow chain from x stabilizes at.
std::vector<Element> tail_meets(const ImplicativeStructure& s, Element x);

/// Exact E_N(n). Checks the Church lower bound and membership in S.
Element nat_exists(const ImplicativeAlgebra& alg, std::size_t n);

/// Meet of the same term over eventually periodic sequences with prefix
/// length <= prefix_bound and period <= period_bound.
Element nat_oracle(const ImplicativeStructure& s, std::size_t n, std::size_t prefix_bound,
                   std::size_t period_bound);

/// {0..N-1} with E(n) = E_N(n), zero and the successor on {0..N-2}.
struct TruncatedNaturals {
  std::size_t bound = 0;
  Assembly object;
  Assembly predecessors;  // {0..N-2}
  Morphism zero;          // 1 -> N
  Morphism succ;          // {0..N-2} -> N
  std::vector<TrackerCertificate> certificates;
};
TruncatedNaturals truncated_nno(const ImplicativeAlgebra& alg, std::size_t bound);

struct RecursorReport {
  std::vector<std::size_t> u;           // u(0..N-1)
  std::size_t cycle_start = 0;          // u is periodic from here
  std::size_t period = 0;
  Element start_value;                  // app(tau(q), top)
  Element pair_meet;                    // meet_p E(u p) -> E(u (p+1)), exact
  Element tracker;                      // (\m. m Q F) with Q = start_value, F = tau(f)
  bool base = false;                    // (i)
  bool step = false;                    // (ii)
  bool bounded = false;                 // (iii)
  bool unique = false;                  // (iv)
  std::vector<std::string> failures;
  bool passed() const { return base && step && bounded && unique; }
};

/// The map u with u(0) = q(*) and u(n+1) = f(u(n)) together with the
/// tracker inequalities, checked for n < bound.
RecursorReport recursor(const ImplicativeAlgebra& alg, const Assembly& x, const Morphism& q,
                        const Morphism& f, std::size_t bound);

// ---------------------------------------------------------------------------

inline std::vector<Element> tail_meets(const ImplicativeStructure& s, Element x) {
  const FiniteLattice& L = s.lattice();
  const std::size_t n = L.size();
  const std::size_t top = L.top().index();
  auto id = [n](std::size_t y, std::size_t m) { return y * n + m; };
  auto next = [&](std::size_t state, std::size_t y2) {
    return id(y2, L.meet_index(state % n, s.imp_index(state / n, y2)));
  };

  std::vector<bool> reach(n * n, false);
  std::vector<std::size_t> stack{id(L.check(x), top)};
  reach[stack.back()] = true;
  while (!stack.empty()) {
    const std::size_t st = stack.back();
    stack.pop_back();
    for (std::size_t y2 = 0; y2 < n; ++y2) {
      const std::size_t t = next(st, y2);
      if (reach[t]) continue;
      reach[t] = true;
      stack.push_back(t);
    }
  }

  std::vector<bool> achievable(n, false);
  for (std::size_t st = 0; st < n * n; ++st) {
    if (!reach[st] || achievable[st % n]) continue;
    // Does st reach itself in at least one step?
    std::vector<bool> seen(n * n, false);
    std::vector<std::size_t> work;
    for (std::size_t y2 = 0; y2 < n; ++y2) {
      const std::size_t t = next(st, y2);
      if (seen[t]) continue;
      seen[t] = true;
      work.push_back(t);
    }
    while (!work.empty() && !seen[st]) {
      const std::size_t cur = work.back();
      work.pop_back();
      for (std::size_t y2 = 0; y2 < n; ++y2) {
        const std::size_t t = next(cur, y2);
        if (seen[t]) continue;
        seen[t] = true;
        work.push_back(t);
      }
    }
    if (seen[st]) achievable[st % n] = true;
  }
  std::vector<Element> out;
  for (std::size_t m = 0; m < n; ++m)
    if (achievable[m]) out.push_back(L.element(m));
  return out;
}

inline Element nat_exists(const ImplicativeAlgebra& alg, std::size_t n) {
  const ImplicativeStructure& s = alg.structure();
  const FiniteLattice& L = s.lattice();
  const std::size_t size = L.size();
  std::vector<std::vector<std::size_t>> tails(size);
  for (std::size_t x = 0; x < size; ++x)
    for (Element h : tail_meets(s, L.element(x))) tails[x].push_back(h.index());

  std::size_t acc = L.top().index();
  std::vector<std::size_t> prefix(n + 1, 0);
  for (;;) {
    std::size_t arrows = L.top().index();
    for (std::size_t p = 0; p < n; ++p)
      arrows = L.meet_index(arrows, s.imp_index(prefix[p], prefix[p + 1]));
    for (std::size_t h : tails[prefix[n]]) {
      const std::size_t m = L.meet_index(arrows, h);
      acc = L.meet_index(acc, s.imp_index(prefix[0], s.imp_index(m, prefix[n])));
    }
    std::size_t i = n + 1;
    bool done = true;
    while (i > 0) {
      --i;
      if (++prefix[i] < size) {
        done = false;
        break;
      }
      prefix[i] = 0;
    }
    if (done) break;
  }
  const Element result = L.element(acc);
  const Element church_value = interpret(church(n), s);
  if (!L.leq(church_value, result))
    throw InternalError("Church numeral " + std::to_string(n) + " evaluates to " +
                        L.name(church_value) + ", not below E_N(n) = " + L.name(result));
  if (!alg.in_separator(result))
    throw InternalError("E_N(" + std::to_string(n) + ") = " + L.name(result) +
                        " is not in the separator");
  return result;
}

inline Element nat_oracle(const ImplicativeStructure& s, std::size_t n, std::size_t prefix_bound,
                          std::size_t period_bound) {
  const FiniteLattice& L = s.lattice();
  const std::size_t size = L.size();
  const std::size_t top = L.top().index();
  constexpr std::size_t none = static_cast<std::size_t>(-1);

  // Sequences are a_0..a_{len-1} followed by a cycle c_0..c_{P-1} repeated.
  // A prefix shorter than n+1 can be lengthened by whole periods without
  // leaving the bound, so only prefixes covering index n are closed off.
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> results;  // (a0, M, an)

  auto close_cycle = [&](std::size_t a0, std::size_t last, std::size_t m, std::size_t an) {
    for (std::size_t c0 = 0; c0 < size; ++c0) {
      // (current, accumulated, steps taken inside the cycle)
      std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;
      std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> work;
      work.emplace_back(c0, L.meet_index(m, s.imp_index(last, c0)), 1);
      while (!work.empty()) {
        auto [cur, acc, len] = work.back();
        work.pop_back();
        if (!seen.insert({cur, acc, len}).second) continue;
        results.insert({a0, L.meet_index(acc, s.imp_index(cur, c0)), an});
        if (len < period_bound)
          for (std::size_t nxt = 0; nxt < size; ++nxt)
            work.emplace_back(nxt, L.meet_index(acc, s.imp_index(cur, nxt)), len + 1);
      }
    }
  };

  // (length, a0, last, M, an)
  std::set<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>> visited;
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, std::size_t>> work;
  for (std::size_t a0 = 0; a0 < size; ++a0) work.emplace_back(1, a0, a0, top, n == 0 ? a0 : none);
  while (!work.empty()) {
    auto state = work.back();
    work.pop_back();
    if (!visited.insert(state).second) continue;
    auto [len, a0, last, m, an] = state;
    if (len >= n + 1) close_cycle(a0, last, m, an);
    if (len < prefix_bound)
      for (std::size_t nxt = 0; nxt < size; ++nxt)
        work.emplace_back(len + 1, a0, nxt, L.meet_index(m, s.imp_index(last, nxt)),
                          len == n ? nxt : an);
  }

  std::size_t acc = top;
  for (auto [a0, m, an] : results) acc = L.meet_index(acc, s.imp_index(a0, s.imp_index(m, an)));
  return L.element(acc);
}

inline TruncatedNaturals truncated_nno(const ImplicativeAlgebra& alg, std::size_t bound) {
  if (bound == 0) throw Error("truncated NNO needs at least one number");
  std::vector<std::string> names;
  std::vector<Element> ex;
  for (std::size_t k = 0; k < bound; ++k) {
    names.push_back(std::to_string(k));
    ex.push_back(nat_exists(alg, k));
  }
  Assembly obj(alg, names, ex);
  names.pop_back();
  ex.pop_back();
  Assembly pred(alg, std::move(names), std::move(ex));
  Morphism z = check_morphism(terminal(alg), obj, {0});
  std::vector<std::size_t> sm(bound - 1);
  for (std::size_t k = 0; k + 1 < bound; ++k) sm[k] = k + 1;
  Morphism s = check_morphism(pred, obj, std::move(sm));
  std::vector<TrackerCertificate> certs;
  certs.push_back(certify(alg, "zero", macro("nno_zero"), z.tracking_value()));
  certs.push_back(certify(alg, "successor", macro("nno_succ"), s.tracking_value()));
  return TruncatedNaturals{bound, std::move(obj), std::move(pred), std::move(z), std::move(s),
                           std::move(certs)};
}

inline RecursorReport recursor(const ImplicativeAlgebra& alg, const Assembly& x,
                               const Morphism& q, const Morphism& f, std::size_t bound) {
  if (!(q.target() == x) || q.source().size() != 1 || !(f.source() == x) || !(f.target() == x))
    throw CarrierMismatch("recursor needs q : 1 -> X and f : X -> X");
  if (bound == 0) throw Error("recursor needs at least one number");
  const ImplicativeStructure& s = alg.structure();
  const FiniteLattice& L = s.lattice();
  RecursorReport r;

  // Orbit of q(*) under f up to its first repetition.
  std::vector<std::size_t> orbit{q.map()[0]};
  std::vector<std::size_t> first_seen(x.size(), static_cast<std::size_t>(-1));
  first_seen[orbit[0]] = 0;
  for (;;) {
    const std::size_t nxt = f.map()[orbit.back()];
    if (first_seen[nxt] != static_cast<std::size_t>(-1)) {
      r.cycle_start = first_seen[nxt];
      r.period = orbit.size() - first_seen[nxt];
      break;
    }
    first_seen[nxt] = orbit.size();
    orbit.push_back(nxt);
  }
  auto u_at = [&](std::size_t k) {
    if (k < orbit.size()) return orbit[k];
    return orbit[r.cycle_start + (k - r.cycle_start) % r.period];
  };
  for (std::size_t k = 0; k < bound; ++k) r.u.push_back(u_at(k));

  r.start_value = s.app(q.tracking_value(), L.top());
  r.base = L.leq(r.start_value, x.exists(r.u[0]));
  if (!r.base) r.failures.push_back("(i) tau(q) applied to top is not below E_X(u(0))");

  std::size_t pm = L.top().index();
  for (std::size_t k = 0; k < orbit.size(); ++k)
    pm = L.meet_index(pm, s.imp_index(x.exists_index(orbit[k]), x.exists_index(f.map()[orbit[k]])));
  r.pair_meet = L.element(pm);
  r.step = L.leq(f.tracking_value(), r.pair_meet);
  if (!r.step) r.failures.push_back("(ii) tau(f) is not below the consecutive-pair meet");

  r.tracker = interpret(macro("rec_tracker", {param_of(alg, r.start_value),
                                              param_of(alg, f.tracking_value())}),
                        s);
  r.bounded = true;
  for (std::size_t k = 0; k < bound; ++k) {
    const Element target = s.imp(nat_exists(alg, k), x.exists(r.u[k]));
    if (!L.leq(r.tracker, target)) {
      r.bounded = false;
      r.failures.push_back("(iii) recursion tracker fails at n = " + std::to_string(k));
    }
  }

  // Every v : {0..N-1} -> |X| obeying both recurrences, found by backtracking.
  std::vector<std::vector<std::size_t>> solutions;
  std::vector<std::size_t> v;
  auto search = [&](auto&& self) -> void {
    if (v.size() == bound) {
      solutions.push_back(v);
      return;
    }
    for (std::size_t c = 0; c < x.size(); ++c) {
      const bool ok = v.empty() ? c == q.map()[0] : c == f.map()[v.back()];
      if (!ok) continue;
      v.push_back(c);
      self(self);
      v.pop_back();
    }
  };
  search(search);
  r.unique = solutions.size() == 1 && solutions[0] == r.u;
  if (!r.unique) r.failures.push_back("(iv) the recurrences do not determine u");
  return r;
}

}  // namespace impasm
