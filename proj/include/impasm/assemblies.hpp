#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "impasm/errors.hpp"
#include "impasm/lambda.hpp"
#include "impasm/separator.hpp"
#include "impasm/union_find.hpp"

namespace impasm {

/// A finite set whose points carry an existence value in the separator.
class Assembly {
 public:
  /// Throws ValidationError if a name repeats or a value lies outside S.
  Assembly(ImplicativeAlgebra alg, std::vector<std::string> points, std::vector<Element> exists);

  const ImplicativeAlgebra& algebra() const noexcept { return data_->alg; }
  std::size_t size() const noexcept { return data_->points.size(); }
  const std::string& point(std::size_t i) const { return data_->points.at(i); }
  const std::vector<std::string>& points() const noexcept { return data_->points; }
  Element exists(std::size_t i) const { return algebra().lattice().element(data_->exists.at(i)); }
  std::size_t exists_index(std::size_t i) const noexcept { return data_->exists[i]; }

  std::optional<std::size_t> find(const std::string& name) const {
    auto it = data_->index.find(name);
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
  }
  std::size_t at(const std::string& name) const {
    if (auto i = find(name)) return *i;
    throw Error("assembly has no point '" + name + "'");
  }

  friend bool operator==(const Assembly& a, const Assembly& b) {
    return a.data_ == b.data_ ||
           (a.data_->alg == b.data_->alg && a.data_->points == b.data_->points &&
            a.data_->exists == b.data_->exists);
  }

 private:
  struct Data {
    explicit Data(ImplicativeAlgebra a) : alg(std::move(a)) {}
    ImplicativeAlgebra alg;
    std::vector<std::string> points;
    std::vector<std::size_t> exists;
    std::map<std::string, std::size_t> index;
  };
  std::shared_ptr<const Data> data_;
};

/// A tracked map of carriers. Equality is equality of the underlying maps.
class Morphism {
 public:
  const Assembly& source() const noexcept { return source_; }
  const Assembly& target() const noexcept { return target_; }
  const std::vector<std::size_t>& map() const noexcept { return map_; }
  std::size_t operator()(std::size_t i) const { return map_.at(i); }
  /// The greatest tracker: meet over x of E_X(x) -> E_Y(f(x)).
  Element tracking_value() const { return source_.algebra().lattice().element(tau_); }

  friend bool operator==(const Morphism& a, const Morphism& b) {
    return a.map_ == b.map_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  friend Morphism check_morphism(const Assembly&, const Assembly&, std::vector<std::size_t>);
  Morphism(Assembly s, Assembly t, std::vector<std::size_t> m, std::size_t tau)
      : source_(std::move(s)), target_(std::move(t)), map_(std::move(m)), tau_(tau) {}

  Assembly source_;
  Assembly target_;
  std::vector<std::size_t> map_;
  std::size_t tau_;
};

/// One displayed inequality: the interpreted tracker term lies below the
/// exact tracking meet of the morphism it tracks.
struct TrackerCertificate {
  std::string what;
  std::string term;
  Element tracker;
  Element tau;
  bool holds = false;
};

/// Interprets `term` and compares it with `tau`; throws InternalError when
/// the inequality fails.
TrackerCertificate certify(const ImplicativeAlgebra& alg, std::string what, const Term& term,
                           Element tau);

/// Lifts a tracking value to a parameter term.
inline Term param_of(const ImplicativeAlgebra& alg, Element e) {
  return Term::param(alg.lattice(), e);
}

/// Exact meet over x of E_X(x) -> E_Y(map(x)).
std::size_t tracking_meet(const Assembly& x, const Assembly& y, std::span<const std::size_t> map);

/// Throws CarrierMismatch for incompatible data and NotTracked when the
/// tracking meet is not in the separator.
Morphism check_morphism(const Assembly& x, const Assembly& y, std::vector<std::size_t> map);
std::optional<Morphism> try_morphism(const Assembly& x, const Assembly& y,
                                     std::vector<std::size_t> map);

Morphism identity(const Assembly& x);
TrackerCertificate composition_certificate(const Morphism& g, const Morphism& f);
/// g after f; the composition tracker is certified on the way.
Morphism compose(const Morphism& g, const Morphism& f);

Assembly delta(const ImplicativeAlgebra& alg, std::vector<std::string> points);
inline const std::vector<std::string>& gamma(const Assembly& x) { return x.points(); }

/// Every map |X| -> |Y| in lexicographic order of its image list.
std::vector<std::vector<std::size_t>> all_maps(std::size_t from, std::size_t to);
/// Tracked maps only.
std::vector<Morphism> hom_set(const Assembly& x, const Assembly& y);

bool is_mono(const Morphism& f);
bool is_epi(const Morphism& f);
std::optional<Morphism> inverse(const Morphism& f);
bool is_iso(const Morphism& f);

template <class T>
struct Mediated {
  T morphism;
  TrackerCertificate certificate;
};

Assembly terminal(const ImplicativeAlgebra& alg);
Morphism to_terminal(const Assembly& x);
Assembly initial(const ImplicativeAlgebra& alg);
Morphism from_initial(const Assembly& x);

struct Product {
  Assembly left, right;
  Assembly object;
  Morphism pi1, pi2;
  std::vector<TrackerCertificate> certificates;

  std::size_t index(std::size_t a, std::size_t b) const { return a * right.size() + b; }
  /// The pairing <f, g>.
  Mediated<Morphism> mediate(const Morphism& f, const Morphism& g) const;
};
Product product(const Assembly& a, const Assembly& b);

struct Equalizer {
  Morphism f, g;
  Assembly object;
  Morphism inclusion;
  std::vector<TrackerCertificate> certificates;

  Mediated<Morphism> mediate(const Morphism& h) const;
};
Equalizer equalizer(const Morphism& f, const Morphism& g);

/// X x_Y A for f : X -> Y and p : A -> Y.
struct Pullback {
  Morphism f, p;
  Assembly object;
  Morphism p1, p2;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<TrackerCertificate> certificates;

  Mediated<Morphism> mediate(const Morphism& u, const Morphism& v) const;
};
Pullback pullback(const Morphism& f, const Morphism& p);

/// f^-1(y) with E(x) = E_X(x) /\~ E_Y(y) and its inclusion into X.
struct Fiber {
  Assembly object;
  Morphism inclusion;
  std::vector<std::size_t> points;  // indices into the source of f
  TrackerCertificate certificate;
};
Fiber fiber(const Morphism& f, std::size_t y);

struct Coproduct {
  Assembly left, right;
  Assembly object;
  Morphism inl, inr;
  std::vector<TrackerCertificate> certificates;

  Mediated<Morphism> mediate(const Morphism& f, const Morphism& g) const;
};
Coproduct coproduct(const Assembly& a, const Assembly& b);

struct Coequalizer {
  Morphism f, g;
  Assembly object;
  Morphism quotient;
  std::vector<std::vector<std::size_t>> classes;
  std::vector<TrackerCertificate> certificates;

  Mediated<Morphism> mediate(const Morphism& h) const;
};
Coequalizer coequalizer(const Morphism& f, const Morphism& g);

struct ImageFactorization {
  Assembly image;
  Morphism epi;   // A -> Im(f)
  Morphism mono;  // Im(f) -> B
  std::vector<TrackerCertificate> certificates;
};
ImageFactorization image_factorize(const Morphism& f);

/// Strong monos are taken to be the extremal ones.
bool is_extremal_mono(const Morphism& f);

struct Classifier {
  Assembly omega;
  Morphism truth;  // 1 -> Omega
};
/// Omega = Delta{empty, full}, truth picks "full".
Classifier subobject_classifier(const ImplicativeAlgebra& alg);
/// chi_f; throws NotStrongMono unless f is an extremal mono. The pullback of
/// truth along chi_f is checked to be isomorphic to the domain of f.
Morphism classify_mono(const Morphism& f);

// --- brute-force universal properties --------------------------------------

struct UniversalReport {
  std::size_t checks = 0;
  std::vector<std::string> failures;
  bool passed() const noexcept { return failures.empty(); }
  void fail(std::string msg) { failures.push_back(std::move(msg)); }
  void merge(const UniversalReport& other) {
    checks += other.checks;
    failures.insert(failures.end(), other.failures.begin(), other.failures.end());
  }
};

/// All assemblies on carriers p0..p{k-1}, k <= max_carrier, with every
/// assignment of existence values into S. Throws CapExceeded past `cap`.
std::vector<Assembly> assembly_family(const ImplicativeAlgebra& alg, std::size_t max_carrier,
                                      std::size_t cap = 20000);

UniversalReport verify_terminal(const Assembly& t, std::span<const Assembly> family);
UniversalReport verify_initial(const Assembly& i, std::span<const Assembly> family);
UniversalReport verify_product(const Product& p, std::span<const Assembly> family);
UniversalReport verify_equalizer(const Equalizer& e, std::span<const Assembly> family);
UniversalReport verify_coproduct(const Coproduct& c, std::span<const Assembly> family);
UniversalReport verify_coequalizer(const Coequalizer& c, std::span<const Assembly> family);
/// For each extremal mono m : A -> B between family members, exactly one
/// chi : B -> Omega has a pullback of truth isomorphic to m over B; monos
/// that are not extremal must have none.
UniversalReport verify_classifier(const Classifier& c, std::span<const Assembly> family);

enum class UniversalKind { terminal, product, equalizer, initial, coproduct, coequalizer, classifier };
const char* to_string(UniversalKind k);

/// Builds every instance of `kind` from the family (all pairs of objects, all
/// parallel pairs of morphisms) and verifies it against the same family,
/// together with the carrier check against the Set construction.
UniversalReport verify_universal_property(UniversalKind kind, const ImplicativeAlgebra& alg,
                                          std::span<const Assembly> family);

// ---------------------------------------------------------------------------

inline Assembly::Assembly(ImplicativeAlgebra alg, std::vector<std::string> points,
                          std::vector<Element> exists) {
  if (points.size() != exists.size())
    throw ValidationError("assembly: points and existence values differ in number");
  auto data = std::make_shared<Data>(std::move(alg));
  const FiniteLattice& L = data->alg.lattice();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!data->index.emplace(points[i], i).second)
      throw ValidationError("assembly: duplicate point '" + points[i] + "'");
    const std::size_t e = L.check(exists[i]);
    if (!data->alg.in_separator_index(e))
      throw ValidationError("assembly: existence value " + L.names()[e] + " of point '" +
                            points[i] + "' is not in the separator");
    data->exists.push_back(e);
  }
  data->points = std::move(points);
  data_ = std::move(data);
}

inline TrackerCertificate certify(const ImplicativeAlgebra& alg, std::string what,
                                  const Term& term, Element tau) {
  TrackerCertificate c{std::move(what), to_string(term), interpret(term, alg.structure()), tau};
  c.holds = alg.lattice().leq(c.tracker, c.tau);
  if (!c.holds)
    throw InternalError("tracker for " + c.what + " evaluates to " + alg.name(c.tracker) +
                        ", not below the tracking value " + alg.name(c.tau) + " (" + c.term +
                        ")");
  return c;
}

inline std::size_t tracking_meet(const Assembly& x, const Assembly& y,
                                 std::span<const std::size_t> map) {
  const ImplicativeStructure& s = x.algebra().structure();
  const FiniteLattice& L = s.lattice();
  std::size_t acc = L.top().index();
  for (std::size_t i = 0; i < map.size(); ++i)
    acc = L.meet_index(acc, s.imp_index(x.exists_index(i), y.exists_index(map[i])));
  return acc;
}

inline Morphism check_morphism(const Assembly& x, const Assembly& y,
                               std::vector<std::size_t> map) {
  if (!(x.algebra() == y.algebra()))
    throw CarrierMismatch("morphism between assemblies over different algebras");
  if (map.size() != x.size())
    throw CarrierMismatch("map is not total on the source carrier");
  for (std::size_t v : map)
    if (v >= y.size()) throw CarrierMismatch("map leaves the target carrier");
  const std::size_t tau = tracking_meet(x, y, map);
  if (!x.algebra().in_separator_index(tau))
    throw NotTracked("tracking condition fails: the meet " + x.algebra().lattice().names()[tau] +
                         " is not in the separator",
                     x.algebra().lattice().names()[tau]);
  return Morphism(x, y, std::move(map), tau);
}

inline std::optional<Morphism> try_morphism(const Assembly& x, const Assembly& y,
                                            std::vector<std::size_t> map) {
  if (map.size() != x.size()) return std::nullopt;
  if (!x.algebra().in_separator_index(tracking_meet(x, y, map))) return std::nullopt;
  return check_morphism(x, y, std::move(map));
}

inline Morphism identity(const Assembly& x) {
  std::vector<std::size_t> m(x.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = i;
  return check_morphism(x, x, std::move(m));
}

inline TrackerCertificate composition_certificate(const Morphism& g, const Morphism& f) {
  const ImplicativeAlgebra& alg = f.source().algebra();
  std::vector<std::size_t> m(f.map().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.map()[f.map()[i]];
  const std::size_t tau = tracking_meet(f.source(), g.target(), m);
  return certify(alg, "composite",
                 macro("compose", {param_of(alg, g.tracking_value()),
                                   param_of(alg, f.tracking_value())}),
                 alg.lattice().element(tau));
}

inline Morphism compose(const Morphism& g, const Morphism& f) {
  if (!(f.target() == g.source()))
    throw CarrierMismatch("composite of morphisms whose middle objects differ");
  composition_certificate(g, f);
  std::vector<std::size_t> m(f.map().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.map()[f.map()[i]];
  try {
    return check_morphism(f.source(), g.target(), std::move(m));
  } catch (const NotTracked& e) {
    throw InternalError(std::string("composite of tracked maps is untracked: ") + e.what());
  }
}

inline Assembly delta(const ImplicativeAlgebra& alg, std::vector<std::string> points) {
  std::vector<Element> e(points.size(), alg.top());
  return Assembly(alg, std::move(points), std::move(e));
}

inline std::vector<std::vector<std::size_t>> all_maps(std::size_t from, std::size_t to) {
  std::vector<std::vector<std::size_t>> out;
  if (to == 0) {
    if (from == 0) out.emplace_back();
    return out;
  }
  std::vector<std::size_t> m(from, 0);
  for (;;) {
    out.push_back(m);
    std::size_t i = from;
    while (i > 0) {
      --i;
      if (++m[i] < to) break;
      m[i] = 0;
      if (i == 0) return out;
    }
    if (from == 0) return out;
  }
}

inline std::vector<Morphism> hom_set(const Assembly& x, const Assembly& y) {
  std::vector<Morphism> out;
  for (auto& m : all_maps(x.size(), y.size()))
    if (auto f = try_morphism(x, y, std::move(m))) out.push_back(std::move(*f));
  return out;
}

inline bool is_mono(const Morphism& f) {
  std::vector<bool> hit(f.target().size(), false);
  for (std::size_t v : f.map()) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

inline bool is_epi(const Morphism& f) {
  std::vector<bool> hit(f.target().size(), false);
  for (std::size_t v : f.map()) hit[v] = true;
  return std::all_of(hit.begin(), hit.end(), [](bool b) { return b; });
}

inline std::optional<Morphism> inverse(const Morphism& f) {
  if (!is_mono(f) || !is_epi(f)) return std::nullopt;
  std::vector<std::size_t> inv(f.target().size());
  for (std::size_t i = 0; i < f.map().size(); ++i) inv[f.map()[i]] = i;
  return try_morphism(f.target(), f.source(), std::move(inv));
}

inline bool is_iso(const Morphism& f) { return inverse(f).has_value(); }

inline Assembly terminal(const ImplicativeAlgebra& alg) { return delta(alg, {"*"}); }

inline Morphism to_terminal(const Assembly& x) {
  return check_morphism(x, terminal(x.algebra()), std::vector<std::size_t>(x.size(), 0));
}

inline Assembly initial(const ImplicativeAlgebra& alg) { return delta(alg, {}); }

inline Morphism from_initial(const Assembly& x) { return check_morphism(initial(x.algebra()), x, {}); }

// --- limits ------------------------------------------------------------------

inline Product product(const Assembly& a, const Assembly& b) {
  if (!(a.algebra() == b.algebra())) throw CarrierMismatch("product over different algebras");
  const ImplicativeAlgebra& alg = a.algebra();
  const ImplicativeStructure& s = alg.structure();
  std::vector<std::string> pts;
  std::vector<Element> ex;
  std::vector<std::size_t> m1, m2;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      pts.push_back("(" + a.point(i) + "," + b.point(j) + ")");
      ex.push_back(s.conj(a.exists(i), b.exists(j)));
      m1.push_back(i);
      m2.push_back(j);
    }
  Assembly obj(alg, std::move(pts), std::move(ex));
  Morphism pi1 = check_morphism(obj, a, std::move(m1));
  Morphism pi2 = check_morphism(obj, b, std::move(m2));
  std::vector<TrackerCertificate> certs;
  certs.push_back(certify(alg, "first projection", macro("pi1"), pi1.tracking_value()));
  certs.push_back(certify(alg, "second projection", macro("pi2"), pi2.tracking_value()));
  return Product{a, b, obj, pi1, pi2, std::move(certs)};
}

inline Mediated<Morphism> Product::mediate(const Morphism& f, const Morphism& g) const {
  if (!(f.source() == g.source()) || !(f.target() == left) || !(g.target() == right))
    throw CarrierMismatch("product cone does not match the product");
  std::vector<std::size_t> m(f.source().size());
  for (std::size_t x = 0; x < m.size(); ++x) m[x] = index(f.map()[x], g.map()[x]);
  Morphism h = check_morphism(f.source(), object, std::move(m));
  const ImplicativeAlgebra& alg = object.algebra();
  auto cert = certify(alg, "product pairing",
                      macro("pair_tracker", {param_of(alg, f.tracking_value()),
                                             param_of(alg, g.tracking_value())}),
                      h.tracking_value());
  return {std::move(h), std::move(cert)};
}

inline Equalizer equalizer(const Morphism& f, const Morphism& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw CarrierMismatch("equalizer of a non-parallel pair");
  const Assembly& a = f.source();
  const ImplicativeAlgebra& alg = a.algebra();
  std::vector<std::string> pts;
  std::vector<Element> ex;
  std::vector<std::size_t> incl;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (f.map()[i] == g.map()[i]) {
      pts.push_back(a.point(i));
      ex.push_back(a.exists(i));
      incl.push_back(i);
    }
  Assembly obj(alg, std::move(pts), std::move(ex));
  Morphism k = check_morphism(obj, a, std::move(incl));
  std::vector<TrackerCertificate> certs;
  certs.push_back(certify(alg, "equalizer inclusion", macro("identity"), k.tracking_value()));
  return Equalizer{f, g, obj, k, std::move(certs)};
}

inline Mediated<Morphism> Equalizer::mediate(const Morphism& h) const {
  if (!(h.target() == f.source())) throw CarrierMismatch("cone does not end at the domain");
  std::vector<std::size_t> m(h.source().size());
  for (std::size_t x = 0; x < m.size(); ++x) {
    const std::size_t a = h.map()[x];
    if (f.map()[a] != g.map()[a]) throw CarrierMismatch("cone does not equalize the pair");
    m[x] = static_cast<std::size_t>(
        std::find(inclusion.map().begin(), inclusion.map().end(), a) - inclusion.map().begin());
  }
  Morphism h2 = check_morphism(h.source(), object, std::move(m));
  const ImplicativeAlgebra& alg = object.algebra();
  auto cert = certify(alg, "equalizer mediator", param_of(alg, h.tracking_value()),
                      h2.tracking_value());
  return {std::move(h2), std::move(cert)};
}

inline Pullback pullback(const Morphism& f, const Morphism& p) {
  if (!(f.target() == p.target())) throw CarrierMismatch("pullback of maps into different objects");
  const Assembly& x = f.source();
  const Assembly& a = p.source();
  const ImplicativeAlgebra& alg = x.algebra();
  const ImplicativeStructure& s = alg.structure();
  std::vector<std::string> pts;
  std::vector<Element> ex;
  std::vector<std::size_t> m1, m2;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (f.map()[i] == p.map()[j]) {
        pts.push_back("(" + x.point(i) + "," + a.point(j) + ")");
        ex.push_back(s.conj(x.exists(i), a.exists(j)));
        m1.push_back(i);
        m2.push_back(j);
        pairs.emplace_back(i, j);
      }
  Assembly obj(alg, std::move(pts), std::move(ex));
  Morphism p1 = check_morphism(obj, x, std::move(m1));
  Morphism p2 = check_morphism(obj, a, std::move(m2));
  std::vector<TrackerCertificate> certs;
  certs.push_back(certify(alg, "pullback first projection", macro("pi1"), p1.tracking_value()));
  certs.push_back(certify(alg, "pullback second projection", macro("pi2"), p2.tracking_value()));
  return Pullback{f, p, obj, p1, p2, std::move(pairs), std::move(certs)};
}

inline Mediated<Morphism> Pullback::mediate(const Morphism& u, const Morphism& v) const {
  if (!(u.source() == v.source()) || !(u.target() == f.source()) || !(v.target() == p.source()))
    throw CarrierMismatch("pullback cone does not match");
  std::vector<std::size_t> m(u.source().size());
  for (std::size_t z = 0; z < m.size(); ++z) {
    auto it = std::find(pairs.begin(), pairs.end(), std::make_pair(u.map()[z], v.map()[z]));
    if (it == pairs.end()) throw CarrierMismatch("pullback cone does not commute");
    m[z] = static_cast<std::size_t>(it - pairs.begin());
  }
  Morphism h = check_morphism(u.source(), object, std::move(m));
  const ImplicativeAlgebra& alg = object.algebra();
  auto cert = certify(alg, "pullback pairing",
                      macro("pair_tracker", {param_of(alg, u.tracking_value()),
                                             param_of(alg, v.tracking_value())}),
                      h.tracking_value());
  return {std::move(h), std::move(cert)};
}

inline Fiber fiber(const Morphism& f, std::size_t y) {
  const Assembly& x = f.source();
  const Assembly& base = f.target();
  if (y >= base.size()) throw CarrierMismatch("basepoint outside the codomain");
  const ImplicativeAlgebra& alg = x.algebra();
  std::vector<std::string> pts;
  std::vector<Element> ex;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (f.map()[i] == y) {
      pts.push_back(x.point(i));
      ex.push_back(alg.structure().conj(x.exists(i), base.exists(y)));
      idx.push_back(i);
    }
  Assembly obj(alg, std::move(pts), std::move(ex));
  Morphism incl = check_morphism(obj, x, idx);
  auto cert = certify(alg, "fiber inclusion", macro("pi1"), incl.tracking_value());
  return Fiber{obj, incl, std::move(idx), std::move(cert)};
}

// --- colimits ----------------------------------------------------------------

inline Coproduct coproduct(const Assembly& a, const Assembly& b) {
  if (!(a.algebra() == b.algebra())) throw CarrierMismatch("coproduct over different algebras");
  const ImplicativeAlgebra& alg = a.algebra();
  const ImplicativeStructure& s = alg.structure();
  const Element left_tag = interpret(parse("\\x y. x"), s);
  const Element right_tag = interpret(parse("\\x y. y"), s);
  std::vector<std::string> pts;
  std::vector<Element> ex;
  std::vector<std::size_t> l, r;
  for (std::size_t i = 0; i < a.size(); ++i) {
    pts.push_back("inl:" + a.point(i));
    ex.push_back(s.conj(left_tag, a.exists(i)));
    l.push_back(i);
  }
  for (std::size_t j = 0; j < b.size(); ++j) {
    pts.push_back("inr:" + b.point(j));
    ex.push_back(s.conj(right_tag, b.exists(j)));
    r.push_back(a.size() + j);
  }
  Assembly obj(alg, std::move(pts), std::move(ex));
  Morphism inl = check_morphism(a, obj, std::move(l));
  Morphism inr = check_morphism(b, obj, std::move(r));
  std::vector<TrackerCertificate> certs;
  certs.push_back(certify(alg, "left injection", macro("inl_tracker"), inl.tracking_value()));
  certs.push_back(certify(alg, "right injection", macro("inr_tracker"), inr.tracking_value()));
  return Coproduct{a, b, obj, inl, inr, std::move(certs)};
}

inline Mediated<Morphism> Coproduct::mediate(const Morphism& f, const Morphism& g) const {
  if (!(f.target() == g.target()) || !(f.source() == left) || !(g.source() == right))
    throw CarrierMismatch("coproduct cocone does not match the coproduct");
  std::vector<std::size_t> m;
  m.insert(m.end(), f.map().begin(), f.map().end());
  m.insert(m.end(), g.map().begin(), g.map().end());
  Morphism h = check_morphism(object, f.target(), std::move(m));
  const ImplicativeAlgebra& alg = object.algebra();
  auto cert = certify(alg, "case analysis",
                      macro("case_tracker", {param_of(alg, f.tracking_value()),
                                             param_of(alg, g.tracking_value())}),
                      h.tracking_value());
  return {std::move(h), std::move(cert)};
}

inline Coequalizer coequalizer(const Morphism& f, const Morphism& g) {
  if (!(f.source() == g.source()) || !(f.target() == g.target()))
    throw CarrierMismatch("coequalizer of a non-parallel pair");
  const Assembly& b = f.target();
  const ImplicativeAlgebra& alg = b.algebra();
  const ImplicativeStructure& s = alg.structure();
  UnionFind uf(b.size());
  for (std::size_t a = 0; a < f.source().size(); ++a) uf.unite(f.map()[a], g.map()[a]);
  std::vector<std::size_t> class_of(b.size());
  std::vector<std::vector<std::size_t>> classes;
  std::map<std::size_t, std::size_t> by_rep;
  for (std::size_t i = 0; i < b.size(); ++i) {
    const std::size_t rep = uf.find(i);
    auto [it, inserted] = by_rep.emplace(rep, classes.size());
    if (inserted) classes.emplace_back();
    classes[it->second].push_back(i);
    class_of[i] = it->second;
  }
  std::vector<std::string> pts;
  std::vector<Element> ex;
  std::vector<TrackerCertificate> certs;
  for (const auto& c : classes) {
    pts.push_back(b.point(c.front()));
    std::vector<std::size_t> fam;
    for (std::size_t i : c) fam.push_back(b.exists_index(i));
    const Element e = s.lattice().element(s.exists_index(fam));
    ex.push_back(e);
    // Any member's existence value witnesses the class.
    certs.push_back(certify(alg, "quotient class " + b.point(c.front()) + " is inhabited",
                            macro("coeq_mediator", {param_of(alg, b.exists(c.front()))}), e));
  }
  Assembly obj(alg, std::move(pts), std::move(ex));
  Morphism k = check_morphism(b, obj, std::move(class_of));
  certs.push_back(certify(alg, "quotient map", macro("quotient_tracker"), k.tracking_value()));
  return Coequalizer{f, g, obj, k, std::move(classes), std::move(certs)};
}

inline Mediated<Morphism> Coequalizer::mediate(const Morphism& h) const {
  if (!(h.source() == f.target())) throw CarrierMismatch("cocone does not start at the codomain");
  for (std::size_t a = 0; a < f.source().size(); ++a)
    if (h.map()[f.map()[a]] != h.map()[g.map()[a]])
      throw CarrierMismatch("cocone does not coequalize the pair");
  std::vector<std::size_t> m;
  for (const auto& c : classes) m.push_back(h.map()[c.front()]);
  Morphism h2 = check_morphism(object, h.target(), std::move(m));
  const ImplicativeAlgebra& alg = object.algebra();
  auto cert = certify(alg, "coequalizer mediator",
                      macro("coeq_mediator", {param_of(alg, h.tracking_value())}),
                      h2.tracking_value());
  return {std::move(h2), std::move(cert)};
}

// --- images and the classifier ----------------------------------------------

inline ImageFactorization image_factorize(const Morphism& f) {
  const Assembly& b = f.target();
  const ImplicativeAlgebra& alg = b.algebra();
  std::vector<bool> hit(b.size(), false);
  for (std::size_t v : f.map()) hit[v] = true;
  std::vector<std::string> pts;
  std::vector<Element> ex;
  std::vector<std::size_t> incl, position(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i)
    if (hit[i]) {
      position[i] = pts.size();
      pts.push_back(b.point(i));
      ex.push_back(b.exists(i));
      incl.push_back(i);
    }
  Assembly im(alg, std::move(pts), std::move(ex));
  std::vector<std::size_t> e(f.map().size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = position[f.map()[i]];
  Morphism epi = check_morphism(f.source(), im, std::move(e));
  Morphism mono = check_morphism(im, b, std::move(incl));
  std::vector<TrackerCertificate> certs;
  certs.push_back(certify(alg, "image corestriction", param_of(alg, f.tracking_value()),
                          epi.tracking_value()));
  certs.push_back(certify(alg, "image inclusion", macro("identity"), mono.tracking_value()));
  return ImageFactorization{im, epi, mono, std::move(certs)};
}

inline bool is_extremal_mono(const Morphism& f) {
  return is_mono(f) && is_iso(image_factorize(f).epi);
}

inline Classifier subobject_classifier(const ImplicativeAlgebra& alg) {
  Assembly omega = delta(alg, {"empty", "full"});
  Morphism t = check_morphism(terminal(alg), omega, {1});
  return Classifier{omega, t};
}

namespace detail {

/// True if the pullback of `truth` along `chi` is isomorphic over the base to m.
inline bool classifies(const Classifier& c, const Morphism& chi, const Morphism& m) {
  Pullback pb = pullback(chi, c.truth);
  const Assembly& a = m.source();
  std::vector<std::size_t> phi(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto it = std::find(pb.pairs.begin(), pb.pairs.end(), std::make_pair(m.map()[i], std::size_t{0}));
    if (it == pb.pairs.end()) return false;
    phi[i] = static_cast<std::size_t>(it - pb.pairs.begin());
  }
  auto iso = try_morphism(a, pb.object, std::move(phi));
  return iso && is_iso(*iso);
}

}  // namespace detail

inline Morphism classify_mono(const Morphism& f) {
  if (!is_extremal_mono(f))
    throw NotStrongMono("only extremal (strong) monomorphisms are classified");
  const Assembly& b = f.target();
  Classifier c = subobject_classifier(b.algebra());
  std::vector<std::size_t> chi(b.size(), 0);
  for (std::size_t v : f.map()) chi[v] = 1;
  Morphism m = check_morphism(b, c.omega, std::move(chi));
  if (!detail::classifies(c, m, f))
    throw InternalError("pullback of truth along the classifying map is not the subobject");
  return m;
}

// --- verification --------------------------------------------------------------

inline std::vector<Assembly> assembly_family(const ImplicativeAlgebra& alg,
                                             std::size_t max_carrier, std::size_t cap) {
  const auto members = alg.separator().members();
  std::vector<Assembly> out;
  for (std::size_t k = 0; k <= max_carrier; ++k) {
    std::vector<std::string> pts;
    for (std::size_t i = 0; i < k; ++i) pts.push_back("p" + std::to_string(i));
    for (const auto& assign : all_maps(k, members.size())) {
      if (out.size() >= cap) throw CapExceeded("assembly family exceeds the configured cap");
      std::vector<Element> ex;
      for (std::size_t v : assign) ex.push_back(members[v]);
      out.emplace_back(alg, pts, std::move(ex));
    }
  }
  return out;
}

namespace detail {

inline std::string describe(const Morphism& f) {
  std::string s = "[";
  for (std::size_t i = 0; i < f.map().size(); ++i) {
    if (i) s += ",";
    s += f.source().point(i) + "->" + f.target().point(f.map()[i]);
  }
  return s + "]";
}

inline std::string describe(const Assembly& x) {
  std::string s = "{";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += " ";
    s += x.point(i) + ":" + x.algebra().name(x.exists(i));
  }
  return s + "}";
}

inline std::vector<std::size_t> composed(const Morphism& g, const Morphism& f) {
  std::vector<std::size_t> m(f.map().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = g.map()[f.map()[i]];
  return m;
}

}  // namespace detail

inline UniversalReport verify_terminal(const Assembly& t, std::span<const Assembly> family) {
  UniversalReport r;
  for (const Assembly& x : family) {
    ++r.checks;
    const auto homs = hom_set(x, t);
    if (homs.size() != 1)
      r.fail("terminal: " + std::to_string(homs.size()) + " morphisms from " + detail::describe(x));
  }
  return r;
}

inline UniversalReport verify_initial(const Assembly& i, std::span<const Assembly> family) {
  UniversalReport r;
  for (const Assembly& x : family) {
    ++r.checks;
    const auto homs = hom_set(i, x);
    if (homs.size() != 1)
      r.fail("initial: " + std::to_string(homs.size()) + " morphisms into " + detail::describe(x));
  }
  return r;
}

inline UniversalReport verify_product(const Product& p, std::span<const Assembly> family) {
  UniversalReport r;
  for (const Assembly& x : family) {
    const auto candidates = hom_set(x, p.object);
    for (const Morphism& f : hom_set(x, p.left))
      for (const Morphism& g : hom_set(x, p.right)) {
        ++r.checks;
        std::vector<const Morphism*> found;
        for (const Morphism& h : candidates)
          if (detail::composed(p.pi1, h) == f.map() && detail::composed(p.pi2, h) == g.map())
            found.push_back(&h);
        if (found.size() != 1) {
          r.fail("product " + detail::describe(p.object) + ": " + std::to_string(found.size()) +
                 " mediators for cone " + detail::describe(f) + " " + detail::describe(g));
          continue;
        }
        try {
          if (!(p.mediate(f, g).morphism == *found.front()))
            r.fail("product: pairing differs from the unique mediator");
        } catch (const Error& e) {
          r.fail(std::string("product: pairing failed: ") + e.what());
        }
      }
  }
  return r;
}

inline UniversalReport verify_equalizer(const Equalizer& e, std::span<const Assembly> family) {
  UniversalReport r;
  const Assembly& a = e.f.source();
  for (const Assembly& x : family) {
    const auto candidates = hom_set(x, e.object);
    for (const Morphism& h : hom_set(x, a)) {
      if (detail::composed(e.f, h) != detail::composed(e.g, h)) continue;
      ++r.checks;
      std::vector<const Morphism*> found;
      for (const Morphism& h2 : candidates)
        if (detail::composed(e.inclusion, h2) == h.map()) found.push_back(&h2);
      if (found.size() != 1) {
        r.fail("equalizer of " + detail::describe(e.f) + "," + detail::describe(e.g) + ": " +
               std::to_string(found.size()) + " mediators for " + detail::describe(h));
        continue;
      }
      try {
        if (!(e.mediate(h).morphism == *found.front()))
          r.fail("equalizer: factorization differs from the unique mediator");
      } catch (const Error& ex) {
        r.fail(std::string("equalizer: factorization failed: ") + ex.what());
      }
    }
  }
  return r;
}

inline UniversalReport verify_coproduct(const Coproduct& c, std::span<const Assembly> family) {
  UniversalReport r;
  for (const Assembly& x : family) {
    const auto candidates = hom_set(c.object, x);
    for (const Morphism& f : hom_set(c.left, x))
      for (const Morphism& g : hom_set(c.right, x)) {
        ++r.checks;
        std::vector<const Morphism*> found;
        for (const Morphism& h : candidates)
          if (detail::composed(h, c.inl) == f.map() && detail::composed(h, c.inr) == g.map())
            found.push_back(&h);
        if (found.size() != 1) {
          r.fail("coproduct " + detail::describe(c.object) + ": " + std::to_string(found.size()) +
                 " mediators for cocone " + detail::describe(f) + " " + detail::describe(g));
          continue;
        }
        try {
          if (!(c.mediate(f, g).morphism == *found.front()))
            r.fail("coproduct: case analysis differs from the unique mediator");
        } catch (const Error& e) {
          r.fail(std::string("coproduct: case analysis failed: ") + e.what());
        }
      }
  }
  return r;
}

inline UniversalReport verify_coequalizer(const Coequalizer& c, std::span<const Assembly> family) {
  UniversalReport r;
  const Assembly& b = c.f.target();
  for (const Assembly& x : family) {
    const auto candidates = hom_set(c.object, x);
    for (const Morphism& h : hom_set(b, x)) {
      if (detail::composed(h, c.f) != detail::composed(h, c.g)) continue;
      ++r.checks;
      std::vector<const Morphism*> found;
      for (const Morphism& h2 : candidates)
        if (detail::composed(h2, c.quotient) == h.map()) found.push_back(&h2);
      if (found.size() != 1) {
        r.fail("coequalizer of " + detail::describe(c.f) + "," + detail::describe(c.g) + ": " +
               std::to_string(found.size()) + " mediators for " + detail::describe(h));
        continue;
      }
      try {
        if (!(c.mediate(h).morphism == *found.front()))
          r.fail("coequalizer: factorization differs from the unique mediator");
      } catch (const Error& ex) {
        r.fail(std::string("coequalizer: factorization failed: ") + ex.what());
      }
    }
  }
  return r;
}

inline UniversalReport verify_classifier(const Classifier& c, std::span<const Assembly> family) {
  UniversalReport r;
  for (const Assembly& b : family) {
    const auto chis = hom_set(b, c.omega);
    for (const Assembly& a : family)
      for (const Morphism& m : hom_set(a, b)) {
        if (!is_mono(m)) continue;
        ++r.checks;
        const bool strong = is_extremal_mono(m);
        std::size_t count = 0;
        for (const Morphism& chi : chis)
          if (detail::classifies(c, chi, m)) ++count;
        if (count != (strong ? 1u : 0u)) {
          r.fail("classifier: " + std::to_string(count) + " classifying maps for " +
                 (strong ? "extremal" : "non-extremal") + " mono " + detail::describe(m));
          continue;
        }
        if (strong) {
          try {
            Morphism chi = classify_mono(m);
            if (!detail::classifies(c, chi, m)) r.fail("classifier: classify_mono is wrong");
          } catch (const Error& e) {
            r.fail(std::string("classifier: classify_mono failed: ") + e.what());
          }
        }
      }
  }
  return r;
}

inline const char* to_string(UniversalKind k) {
  switch (k) {
    case UniversalKind::terminal: return "terminal";
    case UniversalKind::product: return "product";
    case UniversalKind::equalizer: return "equalizer";
    case UniversalKind::initial: return "initial";
    case UniversalKind::coproduct: return "coproduct";
    case UniversalKind::coequalizer: return "coequalizer";
    case UniversalKind::classifier: return "classifier";
  }
  return "?";
}

inline UniversalReport verify_universal_property(UniversalKind kind, const ImplicativeAlgebra& alg,
                                                 std::span<const Assembly> family) {
  UniversalReport r;
  auto carrier_check = [&](bool ok, const std::string& what) {
    ++r.checks;
    if (!ok) r.fail(what + ": carrier differs from the Set construction");
  };
  switch (kind) {
    case UniversalKind::terminal: {
      Assembly t = terminal(alg);
      carrier_check(t.size() == 1, "terminal");
      r.merge(verify_terminal(t, family));
      break;
    }
    case UniversalKind::initial: {
      Assembly i = initial(alg);
      carrier_check(i.size() == 0, "initial");
      r.merge(verify_initial(i, family));
      break;
    }
    case UniversalKind::product:
      for (const Assembly& a : family)
        for (const Assembly& b : family) {
          Product p = product(a, b);
          bool ok = p.object.size() == a.size() * b.size();
          for (std::size_t i = 0; ok && i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
              ok = ok && p.pi1.map()[p.index(i, j)] == i && p.pi2.map()[p.index(i, j)] == j;
          carrier_check(ok, "product");
          r.merge(verify_product(p, family));
        }
      break;
    case UniversalKind::coproduct:
      for (const Assembly& a : family)
        for (const Assembly& b : family) {
          Coproduct c = coproduct(a, b);
          carrier_check(c.object.size() == a.size() + b.size() && is_mono(c.inl) &&
                            is_mono(c.inr),
                        "coproduct");
          r.merge(verify_coproduct(c, family));
        }
      break;
    case UniversalKind::equalizer:
    case UniversalKind::coequalizer:
      for (const Assembly& a : family)
        for (const Assembly& b : family) {
          const auto homs = hom_set(a, b);
          for (const Morphism& f : homs)
            for (const Morphism& g : homs) {
              if (kind == UniversalKind::equalizer) {
                Equalizer e = equalizer(f, g);
                std::vector<std::size_t> expected;
                for (std::size_t i = 0; i < a.size(); ++i)
                  if (f.map()[i] == g.map()[i]) expected.push_back(i);
                carrier_check(e.inclusion.map() == expected, "equalizer");
                r.merge(verify_equalizer(e, family));
              } else {
                Coequalizer c = coequalizer(f, g);
                // Set quotient by closing the generating relation.
                const std::size_t n = b.size();
                std::vector<std::vector<bool>> rel(n, std::vector<bool>(n, false));
                for (std::size_t i = 0; i < n; ++i) rel[i][i] = true;
                for (std::size_t i = 0; i < a.size(); ++i)
                  rel[f.map()[i]][g.map()[i]] = rel[g.map()[i]][f.map()[i]] = true;
                for (std::size_t k = 0; k < n; ++k)
                  for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                      if (rel[i][k] && rel[k][j]) rel[i][j] = true;
                bool ok = true;
                for (std::size_t i = 0; i < n; ++i)
                  for (std::size_t j = 0; j < n; ++j)
                    ok = ok && (rel[i][j] == (c.quotient.map()[i] == c.quotient.map()[j]));
                carrier_check(ok, "coequalizer");
                r.merge(verify_coequalizer(c, family));
              }
            }
        }
      break;
    case UniversalKind::classifier: {
      Classifier c = subobject_classifier(alg);
      carrier_check(c.omega.size() == 2, "classifier");
      r.merge(verify_classifier(c, family));
      break;
    }
  }
  return r;
}

}  // namespace impasm
