#pragma once

// Brute-force reference computations over plain tables. Nothing here calls
// into the library's algorithms; only the raw order and implication tables
// are read from it.

#include <cstddef>
#include <set>
#include <vector>

#include "impasm/separator.hpp"

namespace oracle {

struct Raw {
  std::size_t n = 0;
  std::vector<std::vector<bool>> leq;
  std::vector<std::vector<std::size_t>> imp;

  std::size_t glb(const std::vector<bool>& in) const {
    // The unique lower bound of `in` above every other lower bound.
    for (std::size_t c = 0; c < n; ++c) {
      bool lower = true;
      for (std::size_t x = 0; x < n; ++x)
        if (in[x] && !leq[c][x]) lower = false;
      if (!lower) continue;
      bool greatest = true;
      for (std::size_t d = 0; d < n; ++d) {
        bool dl = true;
        for (std::size_t x = 0; x < n; ++x)
          if (in[x] && !leq[d][x]) dl = false;
        if (dl && !leq[d][c]) greatest = false;
      }
      if (greatest) return c;
    }
    return n;  // not reached for a lattice
  }
  std::size_t meet(std::size_t a, std::size_t b) const {
    std::vector<bool> s(n, false);
    s[a] = s[b] = true;
    return glb(s);
  }
  std::size_t top() const { return glb(std::vector<bool>(n, false)); }
  std::size_t bottom() const { return glb(std::vector<bool>(n, true)); }
  std::size_t meet_of(const std::vector<std::size_t>& xs) const {
    std::vector<bool> s(n, false);
    for (std::size_t x : xs) s[x] = true;
    return glb(s);
  }

  std::size_t app(std::size_t a, std::size_t b) const {
    std::vector<std::size_t> cs;
    for (std::size_t c = 0; c < n; ++c)
      if (leq[a][imp[b][c]]) cs.push_back(c);
    return meet_of(cs);
  }
  std::size_t abs(const std::vector<std::size_t>& f) const {
    std::vector<std::size_t> xs;
    for (std::size_t a = 0; a < n; ++a) xs.push_back(imp[a][f[a]]);
    return meet_of(xs);
  }
  std::size_t conj(std::size_t a, std::size_t b) const {
    std::vector<std::size_t> xs;
    for (std::size_t c = 0; c < n; ++c) xs.push_back(imp[imp[a][imp[b][c]]][c]);
    return meet_of(xs);
  }
  std::size_t disj(std::size_t a, std::size_t b) const {
    std::vector<std::size_t> xs;
    for (std::size_t c = 0; c < n; ++c) xs.push_back(imp[imp[a][c]][imp[imp[b][c]][c]]);
    return meet_of(xs);
  }
  std::size_t exists(const std::vector<std::size_t>& fam) const {
    std::vector<std::size_t> xs;
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::size_t> inner;
      for (std::size_t a : fam) inner.push_back(imp[a][c]);
      xs.push_back(imp[meet_of(inner)][c]);
    }
    return meet_of(xs);
  }
  std::size_t K() const {
    std::vector<std::size_t> xs;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) xs.push_back(imp[a][imp[b][a]]);
    return meet_of(xs);
  }
  std::size_t S() const {
    std::vector<std::size_t> xs;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          xs.push_back(imp[imp[a][imp[b][c]]][imp[imp[a][b]][imp[a][c]]]);
    return meet_of(xs);
  }
  std::size_t cc() const {
    std::vector<std::size_t> xs;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) xs.push_back(imp[imp[imp[a][b]][a]][a]);
    return meet_of(xs);
  }
  std::size_t fork() const {
    std::vector<std::size_t> xs;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) xs.push_back(imp[a][imp[b][meet(a, b)]]);
    return meet_of(xs);
  }

  bool is_separator(const std::vector<bool>& s) const {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        if (s[a] && leq[a][b] && !s[b]) return false;
        if (s[a] && s[imp[a][b]] && !s[b]) return false;
      }
    return s[K()] && s[S()];
  }

  /// Intersection of every separator containing `gens`, by subset enumeration.
  std::vector<bool> least_separator(const std::vector<bool>& gens) const {
    std::vector<bool> acc(n, true);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      std::vector<bool> s(n);
      bool ok = true;
      for (std::size_t i = 0; i < n; ++i) {
        s[i] = (mask >> i) & 1;
        if (gens[i] && !s[i]) ok = false;
      }
      if (!ok || !is_separator(s)) continue;
      for (std::size_t i = 0; i < n; ++i) acc[i] = acc[i] && s[i];
    }
    return acc;
  }
};

inline Raw raw(const impasm::ImplicativeStructure& s) {
  Raw r;
  r.n = s.size();
  r.leq.assign(r.n, std::vector<bool>(r.n, false));
  r.imp.assign(r.n, std::vector<std::size_t>(r.n, 0));
  for (std::size_t a = 0; a < r.n; ++a)
    for (std::size_t b = 0; b < r.n; ++b) {
      r.leq[a][b] = s.lattice().order_table()[a * r.n + b] != 0;
      r.imp[a][b] = s.implication_table()[a * r.n + b];
    }
  return r;
}

/// Meet over x of E_X(x) -> E_Y(map x).
inline std::size_t tracking(const Raw& r, const std::vector<std::size_t>& ex,
                            const std::vector<std::size_t>& ey, const std::vector<std::size_t>& map) {
  std::vector<std::size_t> xs;
  for (std::size_t i = 0; i < map.size(); ++i) xs.push_back(r.imp[ex[i]][ey[map[i]]]);
  return r.meet_of(xs);
}

}  // namespace oracle
