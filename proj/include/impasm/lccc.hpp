#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "impasm/assemblies.hpp"

namespace impasm {

/// An object of the slice over `base`: a morphism total -> base.
struct SlicedObject {
  Assembly total;
  Assembly base;
  Morphism projection;

  explicit SlicedObject(Morphism p)
      : total(p.source()), base(p.target()), projection(std::move(p)) {}
};

/// An f-section over one basepoint. `section[i]` is the image of the i-th
/// fiber point (fiber points in declared order).
struct SectionPoint {
  std::size_t basepoint = 0;
  std::vector<std::size_t> section;
  Element tracking_value;
};

/// Tracked sections of t over the fiber of f at y.
std::vector<SectionPoint> sections(const Morphism& f, const SlicedObject& t, std::size_t y);

struct DependentProduct {
  Morphism f;
  SlicedObject t;
  SlicedObject object;  // over the codomain of f
  std::vector<std::vector<std::size_t>> fibers;  // fibers[y]: points of X over y
  std::vector<SectionPoint> points;
  std::vector<TrackerCertificate> certificates;

  std::optional<std::size_t> find(std::size_t y, const std::vector<std::size_t>& section) const {
    auto it = index_.find({y, section});
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> index_;
};

/// Pi_f(t). Throws CapExceeded when the sum over y of |W|^|fiber(y)| is
/// larger than `cap`.
DependentProduct dependent_product(const Morphism& f, const SlicedObject& t,
                                   std::size_t cap = 100000);

/// f*p, by pullback; the new projection is the first one.
SlicedObject reindex(const Morphism& f, const SlicedObject& p);

/// q o w = p for w : p -> q.
bool is_slice_morphism(const Morphism& w, const SlicedObject& p, const SlicedObject& q);
/// Slice morphisms p -> q.
std::vector<Morphism> slice_hom(const SlicedObject& p, const SlicedObject& q);

/// Pi_f(g) for g : t1 -> t2 over X.
Mediated<Morphism> pi_map(const DependentProduct& a, const DependentProduct& b, const Morphism& g);

/// eta_p : p -> Pi_f(f*p), where `pi` must be Pi_f(reindex(f, p)).
Mediated<Morphism> pi_unit(const SlicedObject& p, const DependentProduct& pi);

/// Transpose of w : p -> Pi_f(q) to f*p -> q, with f*p = reindex(f, p).
Mediated<Morphism> pi_transpose(const SlicedObject& p, const DependentProduct& pi,
                                const Morphism& w);

struct PiAdjunctionReport {
  std::size_t left = 0;   // |Hom_/X(f*p, q)|
  std::size_t right = 0;  // |Hom_/Y(p, Pi_f q)|
  bool triangle = true;
  bool bijective = true;
  std::size_t certificates = 0;
  std::vector<std::string> failures;
  bool passed() const { return left == right && triangle && bijective && failures.empty(); }
};

/// Counts both hom-sets, transposes every w : p -> Pi_f q and checks
/// Pi_f(w-bar) o eta_p = w and that transposition hits every map f*p -> q once.
PiAdjunctionReport verify_pi_adjunction(const Morphism& f, const SlicedObject& p,
                                        const SlicedObject& q);

/// B^A as Pi along A -> 1 of A x B over A.
struct Exponential {
  Assembly domain, codomain;
  Assembly object;
  std::vector<std::vector<std::size_t>> maps;  // maps[i] : |A| -> |B|
  Product ev_domain;                           // object x A
  Morphism eval;
  std::vector<TrackerCertificate> certificates;

  /// h : Z x A -> B given over `za` = product(Z, A).
  Morphism curry(const Product& za, const Morphism& h) const;
};
Exponential exponential(const Assembly& a, const Assembly& b);

/// |Hom(Z x A, B)| = |Hom(Z, B^A)| and eval o (curry h x id) = h for Z in the family.
UniversalReport verify_exponential(const Exponential& e, std::span<const Assembly> family);

// ---------------------------------------------------------------------------

namespace detail {

inline std::string section_name(const DependentProduct& d, std::size_t y,
                                const std::vector<std::size_t>& s) {
  const Assembly& x = d.f.source();
  std::string out = "(" + d.f.target().point(y) + ";";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += x.point(d.fibers[y][i]) + "↦" + d.t.total.point(s[i]);
  }
  return out + ")";
}

}  // namespace detail

inline std::vector<SectionPoint> sections(const Morphism& f, const SlicedObject& t, std::size_t y) {
  if (!(t.base == f.source())) throw CarrierMismatch("sliced object is not over the domain of f");
  const ImplicativeAlgebra& alg = f.source().algebra();
  const ImplicativeStructure& s = alg.structure();
  const FiniteLattice& L = alg.lattice();
  Fiber fib = fiber(f, y);
  const Assembly& w = t.total;
  std::vector<std::vector<std::size_t>> choices(fib.points.size());
  for (std::size_t i = 0; i < fib.points.size(); ++i)
    for (std::size_t v = 0; v < w.size(); ++v)
      if (t.projection.map()[v] == fib.points[i]) choices[i].push_back(v);

  std::vector<SectionPoint> out;
  for (const auto& c : choices)
    if (c.empty()) return out;
  std::vector<std::size_t> pos(choices.size(), 0);
  for (;;) {
    std::vector<std::size_t> sec(choices.size());
    std::size_t tau = L.top().index();
    for (std::size_t i = 0; i < choices.size(); ++i) {
      sec[i] = choices[i][pos[i]];
      tau = L.meet_index(tau, s.imp_index(fib.object.exists_index(i), w.exists_index(sec[i])));
    }
    if (alg.in_separator_index(tau)) out.push_back({y, std::move(sec), L.element(tau)});
    std::size_t i = choices.size();
    for (;;) {
      if (i == 0) return out;
      --i;
      if (++pos[i] < choices[i].size()) break;
      pos[i] = 0;
    }
  }
}

inline DependentProduct dependent_product(const Morphism& f, const SlicedObject& t,
                                          std::size_t cap) {
  const Assembly& x = f.source();
  const Assembly& y = f.target();
  const ImplicativeAlgebra& alg = x.algebra();
  const ImplicativeStructure& s = alg.structure();
  const FiniteLattice& L = alg.lattice();

  std::vector<std::vector<std::size_t>> fibers(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) fibers[f.map()[i]].push_back(i);
  double volume = 0;
  for (const auto& fb : fibers) {
    double v = 1;
    for (std::size_t k = 0; k < fb.size(); ++k) v *= static_cast<double>(t.total.size());
    volume += v;
  }
  if (volume > static_cast<double>(cap))
    throw CapExceeded("dependent product would enumerate " + std::to_string(volume) +
                      " candidate sections (cap " + std::to_string(cap) + ")");

  std::vector<SectionPoint> pts;
  for (std::size_t b = 0; b < y.size(); ++b)
    for (auto& sp : sections(f, t, b)) pts.push_back(std::move(sp));

  DependentProduct d{f, t, SlicedObject(identity(y)), std::move(fibers), std::move(pts), {}, {}};
  std::vector<std::string> names;
  std::vector<Element> ex;
  std::vector<std::size_t> bp;
  for (std::size_t k = 0; k < d.points.size(); ++k) {
    const SectionPoint& sp = d.points[k];
    std::size_t sigma = L.top().index();
    for (std::size_t i = 0; i < sp.section.size(); ++i)
      sigma = L.meet_index(sigma, s.imp_index(x.exists_index(d.fibers[sp.basepoint][i]),
                                              t.total.exists_index(sp.section[i])));
    const Element e = s.conj(y.exists(sp.basepoint), L.element(sigma));
    if (!alg.in_separator(e))
      throw InternalError("existence value of section " +
                          detail::section_name(d, sp.basepoint, sp.section) +
                          " is not in the separator");
    names.push_back(detail::section_name(d, sp.basepoint, sp.section));
    ex.push_back(e);
    bp.push_back(sp.basepoint);
    d.index_.emplace(std::make_pair(sp.basepoint, sp.section), k);
  }
  Assembly obj(alg, std::move(names), std::move(ex));
  Morphism proj = check_morphism(obj, y, std::move(bp));
  d.certificates.push_back(
      certify(alg, "basepoint map", macro("pi1"), proj.tracking_value()));
  d.object = SlicedObject(std::move(proj));
  return d;
}

inline SlicedObject reindex(const Morphism& f, const SlicedObject& p) {
  if (!(f.target() == p.base)) throw CarrierMismatch("reindexing along a map into another base");
  return SlicedObject(pullback(f, p.projection).p1);
}

inline bool is_slice_morphism(const Morphism& w, const SlicedObject& p, const SlicedObject& q) {
  if (!(w.source() == p.total) || !(w.target() == q.total)) return false;
  for (std::size_t i = 0; i < w.map().size(); ++i)
    if (q.projection.map()[w.map()[i]] != p.projection.map()[i]) return false;
  return true;
}

inline std::vector<Morphism> slice_hom(const SlicedObject& p, const SlicedObject& q) {
  std::vector<Morphism> out;
  for (Morphism& w : hom_set(p.total, q.total))
    if (is_slice_morphism(w, p, q)) out.push_back(std::move(w));
  return out;
}

inline Mediated<Morphism> pi_map(const DependentProduct& a, const DependentProduct& b,
                                 const Morphism& g) {
  if (!(a.f == b.f) || !is_slice_morphism(g, a.t, b.t))
    throw CarrierMismatch("pi_map needs a slice morphism between objects over the same map");
  std::vector<std::size_t> m(a.points.size());
  for (std::size_t k = 0; k < m.size(); ++k) {
    const SectionPoint& sp = a.points[k];
    std::vector<std::size_t> sec(sp.section.size());
    for (std::size_t i = 0; i < sec.size(); ++i) sec[i] = g.map()[sp.section[i]];
    auto j = b.find(sp.basepoint, sec);
    if (!j) throw InternalError("pushed-forward section is not tracked");
    m[k] = *j;
  }
  Morphism h = check_morphism(a.object.total, b.object.total, std::move(m));
  const ImplicativeAlgebra& alg = h.source().algebra();
  auto cert = certify(alg, "dependent product on morphisms",
                      macro("pi_map", {param_of(alg, g.tracking_value())}), h.tracking_value());
  return {std::move(h), std::move(cert)};
}

inline Mediated<Morphism> pi_unit(const SlicedObject& p, const DependentProduct& pi) {
  const Morphism& f = pi.f;
  // pi.t is f*p: points (x, a) with f(x) = p(a), first projection to X.
  const Assembly& pulled = pi.t.total;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_index;
  {
    Pullback pb = pullback(f, p.projection);
    if (!(pb.object == pulled)) throw CarrierMismatch("pi_unit needs Pi_f of the reindexed object");
    for (std::size_t k = 0; k < pb.pairs.size(); ++k) pair_index[pb.pairs[k]] = k;
  }
  std::vector<std::size_t> m(p.total.size());
  for (std::size_t a = 0; a < p.total.size(); ++a) {
    const std::size_t y = p.projection.map()[a];
    std::vector<std::size_t> sec;
    for (std::size_t x : pi.fibers[y]) sec.push_back(pair_index.at({x, a}));
    auto j = pi.find(y, sec);
    if (!j) throw InternalError("unit section is not tracked");
    m[a] = *j;
  }
  Morphism eta = check_morphism(p.total, pi.object.total, std::move(m));
  const ImplicativeAlgebra& alg = eta.source().algebra();
  auto cert = certify(alg, "unit of the dependent product",
                      macro("pi_unit", {param_of(alg, p.projection.tracking_value())}),
                      eta.tracking_value());
  return {std::move(eta), std::move(cert)};
}

inline Mediated<Morphism> pi_transpose(const SlicedObject& p, const DependentProduct& pi,
                                       const Morphism& w) {
  if (!is_slice_morphism(w, p, pi.object))
    throw CarrierMismatch("transpose needs a slice morphism into the dependent product");
  Pullback pb = pullback(pi.f, p.projection);
  std::vector<std::size_t> m(pb.pairs.size());
  for (std::size_t k = 0; k < pb.pairs.size(); ++k) {
    const auto [x, a] = pb.pairs[k];
    const SectionPoint& sp = pi.points[w.map()[a]];
    const auto& fib = pi.fibers[sp.basepoint];
    const std::size_t i =
        static_cast<std::size_t>(std::find(fib.begin(), fib.end(), x) - fib.begin());
    m[k] = sp.section[i];
  }
  Morphism wbar = check_morphism(pb.object, pi.t.total, std::move(m));
  const ImplicativeAlgebra& alg = wbar.source().algebra();
  auto cert = certify(alg, "transpose",
                      macro("pi_transpose", {param_of(alg, w.tracking_value())}),
                      wbar.tracking_value());
  return {std::move(wbar), std::move(cert)};
}

inline PiAdjunctionReport verify_pi_adjunction(const Morphism& f, const SlicedObject& p,
                                               const SlicedObject& q) {
  PiAdjunctionReport r;
  SlicedObject fp = reindex(f, p);
  DependentProduct pq = dependent_product(f, q);
  DependentProduct pfp = dependent_product(f, fp);
  r.certificates += pq.certificates.size() + pfp.certificates.size();

  const auto left = slice_hom(fp, q);
  const auto right = slice_hom(p, pq.object);
  r.left = left.size();
  r.right = right.size();

  auto eta = pi_unit(p, pfp);
  ++r.certificates;
  std::vector<bool> hit(left.size(), false);
  for (const Morphism& w : right) {
    auto wbar = pi_transpose(p, pq, w);
    ++r.certificates;
    if (!is_slice_morphism(wbar.morphism, fp, q)) {
      r.bijective = false;
      r.failures.push_back("transpose is not over the base");
      continue;
    }
    auto it = std::find(left.begin(), left.end(), wbar.morphism);
    if (it == left.end()) {
      r.bijective = false;
      r.failures.push_back("transpose is not in the enumerated hom-set");
      continue;
    }
    const std::size_t k = static_cast<std::size_t>(it - left.begin());
    if (hit[k]) r.bijective = false;
    hit[k] = true;
    auto back = pi_map(pfp, pq, wbar.morphism);
    ++r.certificates;
    if (detail::composed(back.morphism, eta.morphism) != w.map()) {
      r.triangle = false;
      r.failures.push_back("triangle identity fails for " + detail::describe(w));
    }
  }
  for (bool b : hit)
    if (!b) r.bijective = false;
  return r;
}

inline Exponential exponential(const Assembly& a, const Assembly& b) {
  Product ab = product(a, b);
  DependentProduct pi = dependent_product(to_terminal(a), SlicedObject(ab.pi1));
  std::vector<std::vector<std::size_t>> maps;
  for (const SectionPoint& sp : pi.points) {
    std::vector<std::size_t> g(a.size());
    for (std::size_t i = 0; i < sp.section.size(); ++i) g[pi.fibers[0][i]] = ab.pi2.map()[sp.section[i]];
    maps.push_back(std::move(g));
  }
  Assembly obj = pi.object.total;
  Product ev_dom = product(obj, a);
  std::vector<std::size_t> ev(ev_dom.object.size());
  for (std::size_t g = 0; g < obj.size(); ++g)
    for (std::size_t x = 0; x < a.size(); ++x) ev[ev_dom.index(g, x)] = maps[g][x];
  Morphism eval = [&] {
    try {
      return check_morphism(ev_dom.object, b, std::move(ev));
    } catch (const NotTracked& e) {
      throw InternalError(std::string("evaluation is not tracked: ") + e.what());
    }
  }();
  std::vector<TrackerCertificate> certs = pi.certificates;
  certs.insert(certs.end(), ab.certificates.begin(), ab.certificates.end());
  certs.insert(certs.end(), ev_dom.certificates.begin(), ev_dom.certificates.end());
  return Exponential{a, b, obj, std::move(maps), std::move(ev_dom), std::move(eval), std::move(certs)};
}

inline Morphism Exponential::curry(const Product& za, const Morphism& h) const {
  if (!(za.right == domain) || !(h.source() == za.object) || !(h.target() == codomain))
    throw CarrierMismatch("curry needs a morphism Z x A -> B");
  std::vector<std::size_t> m(za.left.size());
  for (std::size_t z = 0; z < za.left.size(); ++z) {
    std::vector<std::size_t> g(domain.size());
    for (std::size_t x = 0; x < domain.size(); ++x) g[x] = h.map()[za.index(z, x)];
    auto it = std::find(maps.begin(), maps.end(), g);
    if (it == maps.end()) throw InternalError("curried map is not tracked");
    m[z] = static_cast<std::size_t>(it - maps.begin());
  }
  try {
    return check_morphism(za.left, object, std::move(m));
  } catch (const NotTracked& e) {
    throw InternalError(std::string("curried morphism is not tracked: ") + e.what());
  }
}

inline UniversalReport verify_exponential(const Exponential& e, std::span<const Assembly> family) {
  UniversalReport r;
  for (const Assembly& z : family) {
    ++r.checks;
    Product za = product(z, e.domain);
    const auto left = hom_set(za.object, e.codomain);
    const auto right = hom_set(z, e.object);
    if (left.size() != right.size()) {
      r.fail("exponential: " + std::to_string(left.size()) + " maps Z x A -> B but " +
             std::to_string(right.size()) + " maps Z -> B^A for Z = " + detail::describe(z));
      continue;
    }
    std::vector<bool> hit(right.size(), false);
    for (const Morphism& h : left) {
      try {
        Morphism c = e.curry(za, h);
        for (std::size_t zz = 0; zz < z.size(); ++zz)
          for (std::size_t x = 0; x < e.domain.size(); ++x)
            if (e.eval.map()[e.ev_domain.index(c.map()[zz], x)] != h.map()[za.index(zz, x)])
              r.fail("exponential: eval o (curry h x id) differs from h");
        auto it = std::find(right.begin(), right.end(), c);
        if (it == right.end()) r.fail("exponential: curried map missing from the hom-set");
        else hit[static_cast<std::size_t>(it - right.begin())] = true;
      } catch (const Error& ex) {
        r.fail(std::string("exponential: ") + ex.what());
      }
    }
    for (bool b : hit)
      if (!b) r.fail("exponential: currying is not surjective for Z = " + detail::describe(z));
  }
  return r;
}

}  // namespace impasm
