#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "impasm/errors.hpp"

namespace impasm {

/// Position of an element inside one particular FiniteLattice.
///
/// The lattice tag makes it an error to feed an element of one lattice to an
/// operation of another; equal indices in different lattices are different
/// elements.
class Element {
 public:
  Element() = default;

  std::size_t index() const noexcept { return index_; }
  std::uint64_t lattice_tag() const noexcept { return tag_; }

  friend bool operator==(const Element&, const Element&) = default;
  friend auto operator<=>(const Element& a, const Element& b) {
    if (auto c = a.tag_ <=> b.tag_; c != 0) return c;
    return a.index_ <=> b.index_;
  }

 private:
  friend class FiniteLattice;
  Element(std::size_t index, std::uint64_t tag) : index_(index), tag_(tag) {}

  std::size_t index_ = 0;
  std::uint64_t tag_ = 0;
};

/// A finite complete lattice given by a dense order table.
///
/// Immutable once built; copies share the same tables and the same identity.
class FiniteLattice {
 public:
  /// Elements in declared order; `leq` is row-major, `leq[i*n+j]` means i <= j.
  /// Validates every lattice invariant.
  FiniteLattice(std::vector<std::string> names, std::vector<std::uint8_t> leq);

  std::size_t size() const noexcept { return data_->names.size(); }
  std::uint64_t tag() const noexcept { return data_->tag; }

  Element element(std::size_t index) const {
    if (index >= size()) throw Error("element index out of range");
    return Element(index, data_->tag);
  }
  std::optional<Element> find(const std::string& name) const {
    auto it = data_->by_name.find(name);
    if (it == data_->by_name.end()) return std::nullopt;
    return Element(it->second, data_->tag);
  }
  Element at(const std::string& name) const {
    auto e = find(name);
    if (!e) throw Error("unknown element '" + name + "'");
    return *e;
  }
  std::vector<Element> elements() const {
    std::vector<Element> out;
    out.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) out.push_back(Element(i, data_->tag));
    return out;
  }

  const std::string& name(Element e) const { return data_->names[check(e)]; }
  const std::vector<std::string>& names() const noexcept { return data_->names; }

  bool contains(Element e) const noexcept {
    return e.lattice_tag() == data_->tag && e.index() < size();
  }
  /// Returns the index of `e`, rejecting foreign elements.
  std::size_t check(Element e) const {
    if (!contains(e)) throw ForeignElement();
    return e.index();
  }

  bool leq(Element a, Element b) const { return leq_index(check(a), check(b)); }
  bool leq_index(std::size_t a, std::size_t b) const noexcept {
    return data_->leq[a * size() + b] != 0;
  }

  Element top() const { return Element(data_->top, data_->tag); }
  Element bottom() const { return Element(data_->bottom, data_->tag); }

  Element meet(Element a, Element b) const {
    return Element(meet_index(check(a), check(b)), data_->tag);
  }
  Element join(Element a, Element b) const {
    return Element(join_index(check(a), check(b)), data_->tag);
  }
  std::size_t meet_index(std::size_t a, std::size_t b) const noexcept {
    return data_->meet[a * size() + b];
  }
  std::size_t join_index(std::size_t a, std::size_t b) const noexcept {
    return data_->join[a * size() + b];
  }

  /// Greatest lower bound; the empty meet is top.
  Element meet_all(std::span<const Element> subset) const {
    std::size_t acc = data_->top;
    for (Element e : subset) acc = meet_index(acc, check(e));
    return Element(acc, data_->tag);
  }
  /// Least upper bound; the empty join is bottom.
  Element join_all(std::span<const Element> subset) const {
    std::size_t acc = data_->bottom;
    for (Element e : subset) acc = join_index(acc, check(e));
    return Element(acc, data_->tag);
  }

  /// Hasse diagram edges (lower, upper) sorted by declared order.
  std::vector<std::pair<std::size_t, std::size_t>> covers() const;

  /// Raw order table, row-major.
  const std::vector<std::uint8_t>& order_table() const noexcept { return data_->leq; }

  friend bool operator==(const FiniteLattice& a, const FiniteLattice& b) noexcept {
    return a.data_ == b.data_;
  }

 private:
  struct Data {
    std::uint64_t tag = 0;
    std::vector<std::string> names;
    std::map<std::string, std::size_t> by_name;
    std::vector<std::uint8_t> leq;
    std::vector<std::size_t> meet;
    std::vector<std::size_t> join;
    std::size_t top = 0;
    std::size_t bottom = 0;
  };
  std::shared_ptr<const Data> data_;

  static std::uint64_t next_tag() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
  }
};

/// Builds a lattice from covering pairs by reflexive-transitive closure.
///
/// Throws CycleError when the closure is not antisymmetric, NotALattice when
/// some pair lacks a meet or a join.
FiniteLattice build_lattice(const std::vector<std::string>& names,
                            const std::vector<std::pair<std::string, std::string>>& cover_pairs);

/// Row-major table with `table[a*n+b]` the index of a -> b.
using ImplicationTable = std::vector<std::size_t>;

/// Heyting implication a -> b := join { c : c /\ a <= b }, checked against the
/// adjunction for every triple. Throws NotHeyting if it fails.
ImplicationTable heyting_implication(const FiniteLattice& lattice);

// ---------------------------------------------------------------------------

inline FiniteLattice::FiniteLattice(std::vector<std::string> names,
                                    std::vector<std::uint8_t> leq) {
  const std::size_t n = names.size();
  if (n == 0) throw NotALattice("a complete lattice needs at least one element");
  if (leq.size() != n * n) throw Error("order table has the wrong size");
  auto data = std::make_shared<Data>();
  for (std::size_t i = 0; i < n; ++i) {
    if (!data->by_name.emplace(names[i], i).second)
      throw Error("duplicate element name '" + names[i] + "'");
  }
  auto le = [&](std::size_t a, std::size_t b) { return leq[a * n + b] != 0; };
  for (std::size_t i = 0; i < n; ++i) {
    if (!le(i, i)) throw Error("order is not reflexive at '" + names[i] + "'");
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && le(i, j) && le(j, i))
        throw CycleError("order is not antisymmetric: '" + names[i] + "' and '" + names[j] +
                         "' are below each other");
      for (std::size_t k = 0; k < n; ++k) {
        if (le(i, j) && le(j, k) && !le(i, k))
          throw Error("order is not transitive at '" + names[i] + "' <= '" + names[j] +
                      "' <= '" + names[k] + "'");
      }
    }
  }
  // Binary meets and joins by scanning candidates.
  data->meet.assign(n * n, 0);
  data->join.assign(n * n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::optional<std::size_t> glb, lub;
      for (std::size_t c = 0; c < n; ++c) {
        if (le(c, a) && le(c, b)) {
          bool greatest = true;
          for (std::size_t d = 0; d < n && greatest; ++d)
            if (le(d, a) && le(d, b) && !le(d, c)) greatest = false;
          if (greatest) glb = c;
        }
        if (le(a, c) && le(b, c)) {
          bool least = true;
          for (std::size_t d = 0; d < n && least; ++d)
            if (le(a, d) && le(b, d) && !le(c, d)) least = false;
          if (least) lub = c;
        }
      }
      if (!glb)
        throw NotALattice("'" + names[a] + "' and '" + names[b] + "' have no meet");
      if (!lub)
        throw NotALattice("'" + names[a] + "' and '" + names[b] + "' have no join");
      data->meet[a * n + b] = *glb;
      data->join[a * n + b] = *lub;
    }
  }
  std::optional<std::size_t> top, bottom;
  for (std::size_t c = 0; c < n; ++c) {
    bool is_top = true, is_bottom = true;
    for (std::size_t d = 0; d < n; ++d) {
      is_top = is_top && le(d, c);
      is_bottom = is_bottom && le(c, d);
    }
    if (is_top) top = c;
    if (is_bottom) bottom = c;
  }
  if (!top) throw NotALattice("no top element");
  if (!bottom) throw NotALattice("no bottom element");
  data->top = *top;
  data->bottom = *bottom;
  data->tag = next_tag();
  data->names = std::move(names);
  data->leq = std::move(leq);
  data_ = std::move(data);
}

inline std::vector<std::pair<std::size_t, std::size_t>> FiniteLattice::covers() const {
  const std::size_t n = size();
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b || !leq_index(a, b)) continue;
      bool direct = true;
      for (std::size_t c = 0; c < n && direct; ++c)
        if (c != a && c != b && leq_index(a, c) && leq_index(c, b)) direct = false;
      if (direct) out.emplace_back(a, b);
    }
  }
  return out;
}

inline FiniteLattice build_lattice(
    const std::vector<std::string>& names,
    const std::vector<std::pair<std::string, std::string>>& cover_pairs) {
  const std::size_t n = names.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) {
    if (!index.emplace(names[i], i).second)
      throw Error("duplicate element name '" + names[i] + "'");
  }
  std::vector<std::uint8_t> leq(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) leq[i * n + i] = 1;
  for (const auto& [lo, hi] : cover_pairs) {
    auto l = index.find(lo);
    auto h = index.find(hi);
    if (l == index.end()) throw Error("cover pair names undeclared element '" + lo + "'");
    if (h == index.end()) throw Error("cover pair names undeclared element '" + hi + "'");
    leq[l->second * n + h->second] = 1;
  }
  // Warshall closure.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (leq[i * n + k])
        for (std::size_t j = 0; j < n; ++j)
          if (leq[k * n + j]) leq[i * n + j] = 1;
  return FiniteLattice(names, std::move(leq));
}

inline ImplicationTable heyting_implication(const FiniteLattice& lattice) {
  const std::size_t n = lattice.size();
  ImplicationTable table(n * n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      std::size_t acc = lattice.bottom().index();
      for (std::size_t c = 0; c < n; ++c)
        if (lattice.leq_index(lattice.meet_index(c, a), b)) acc = lattice.join_index(acc, c);
      table[a * n + b] = acc;
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        bool lhs = lattice.leq_index(lattice.meet_index(c, a), b);
        bool rhs = lattice.leq_index(c, table[a * n + b]);
        if (lhs != rhs) {
          const auto& nm = lattice.names();
          throw NotHeyting("Heyting adjunction fails for c=" + nm[c] + ", a=" + nm[a] +
                           ", b=" + nm[b] + ": the lattice is not a complete Heyting algebra");
        }
      }
  return table;
}

}  // namespace impasm
