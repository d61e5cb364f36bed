// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/common.hpp"
#include "support/oracle.hpp"
#include "impasm/cli.hpp"

using namespace fx;

namespace {

struct Tally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;
  std::string first_failure;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
  bool passed() const { return failures == 0 && checks > 0; }
};

using Criterion = std::function<void(Tally&)>;

void laws(Tally& t) {
  for (auto& r : reference::all()) {
    const auto& s = r.algebra.structure();
    for (const auto& rep : {check_axioms(s), check_adjunction(s), check_monotonicity(s), check_beta_eta(s)}) {
      t.checks += rep.checks;
      t.check(rep.passed(), r.name + " " + rep.name);
    }
  }
  for (auto alg : {reference::b2(), reference::h3(), reference::m2()}) {
    const auto& s = alg.structure();
    auto raw = oracle::raw(s);
    for (std::size_t a = 0; a < raw.n; ++a)
      for (std::size_t b = 0; b < raw.n; ++b) t.check(s.app_index(a, b) == raw.meet(a, b), "app = meet");
    auto rep = check_heyting_collapse(s, 200, 1);
    t.checks += rep.checks;
    t.check(rep.passed(), "Heyting collapse");
  }
}

void beta(Tally& t) {
  std::size_t terms = 0;
  for (auto& r : reference::all()) {
    std::mt19937_64 rng(20240229);
    Interpreter in(r.algebra.structure());
    const auto& L = r.algebra.lattice();
    // Draw until 200 terms with at least one redex have been seen.
    std::size_t with_redex = 0;
    for (std::size_t tries = 0; with_redex < 200 && tries < 100000; ++tries) {
      Term term = random_closed_term(rng, 5);
      const auto reducts = beta_reducts(term);
      if (reducts.empty()) continue;
      ++with_redex;
      const Element v = in(term);
      for (const Term& red : reducts)
        t.check(L.leq(v, in(red)), r.name + ": " + to_string(term) + " -> " + to_string(red));
    }
    t.check(with_redex == 200, r.name + ": too few reducible terms");
    terms += with_redex;
  }
  t.notes.push_back(std::to_string(terms) + " reducible terms");
}

void minimality(Tally& t) {
  for (auto& r : reference::all()) {
    const auto& s = r.algebra.structure();
    auto raw = oracle::raw(s);
    for (std::size_t mask = 0; mask < (std::size_t{1} << raw.n); ++mask) {
      std::vector<bool> g(raw.n);
      std::vector<Element> gens;
      for (std::size_t i = 0; i < raw.n; ++i)
        if ((g[i] = (mask >> i) & 1)) gens.push_back(s.lattice().element(i));
      t.check(generate(s, gens).bits() == raw.least_separator(g), r.name + " generators " + std::to_string(mask));
    }
  }
}

void universal(Tally& t) {
  for (auto& [name, alg] : std::vector<reference::Named>{{"B2", reference::b2()}, {"N3", reference::n3()}}) {
    auto fam = assembly_family(alg, 2);
    for (auto kind : {UniversalKind::terminal, UniversalKind::product, UniversalKind::equalizer,
                      UniversalKind::initial, UniversalKind::coproduct, UniversalKind::coequalizer,
                      UniversalKind::classifier}) {
      auto rep = verify_universal_property(kind, alg, fam);
      t.checks += rep.checks;
      t.check(rep.passed(), name + " " + to_string(kind) +
                                (rep.failures.empty() ? "" : ": " + rep.failures.front()));
    }
  }
}

void certificates(Tally& t) {
  auto take = [&](const std::vector<TrackerCertificate>& cs) {
    for (const auto& c : cs) t.check(c.holds, c.what);
  };
  for (auto alg : {reference::b2(), reference::n3()}) {
    auto fam = assembly_family(alg, 2);
    for (const auto& a : fam)
      for (const auto& b : fam) {
        auto p = product(a, b);
        take(p.certificates);
        auto c = coproduct(a, b);
        take(c.certificates);
        for (const auto& f : hom_set(a, b)) {
          take({composition_certificate(f, identity(a))});
          take(image_factorize(f).certificates);
          for (std::size_t y = 0; y < b.size(); ++y) take({fiber(f, y).certificate});
          take({p.mediate(identity(a), f).certificate});
          for (const auto& g : hom_set(a, b)) {
            auto e = equalizer(f, g);
            take(e.certificates);
            take({e.mediate(e.inclusion).certificate});
            take(coequalizer(f, g).certificates);
            take(pullback(f, g).certificates);
          }
        }
        for (const auto& f : hom_set(a, b))
          for (const auto& g : hom_set(b, b)) take({c.mediate(f, g).certificate});
      }
    // Dependent products with their unit, transpose and functorial action.
    for (const auto& x : fam)
      for (const auto& y : fam)
        for (const auto& f : hom_set(x, y))
          for (const auto& w : fam)
            for (const auto& q : hom_set(w, x)) {
              SlicedObject qs(q);
              auto d = dependent_product(f, qs);
              take(d.certificates);
              take({pi_map(d, d, identity(w)).certificate});
              for (const auto& pw : fam)
                for (const auto& p : hom_set(pw, y)) {
                  SlicedObject ps(p);
                  auto dp = dependent_product(f, reindex(f, ps));
                  take({pi_unit(ps, dp).certificate});
                  for (const auto& m : slice_hom(ps, d.object)) take({pi_transpose(ps, d, m).certificate});
                }
            }
    for (std::size_t k = 1; k <= 5; ++k) take(truncated_nno(alg, k).certificates);
    auto x = delta(alg, {"a", "b"});
    for (const auto& b : fam) take(exponential(x, b).certificates);
  }
  t.notes.push_back(std::to_string(t.checks) + " certificates");
}

void pi_adjunction(Tally& t) {
  std::size_t instances = 0;
  for (auto alg : {reference::b2(), reference::n3()}) {
    auto small = assembly_family(alg, 2);
    for (const auto& x : small)
      for (const auto& y : small)
        for (const auto& f : hom_set(x, y))
          for (const auto& pt : small)
            for (const auto& p : hom_set(pt, y))
              for (const auto& qt : small)
                for (const auto& q : hom_set(qt, x)) {
                  auto rep = verify_pi_adjunction(f, SlicedObject(p), SlicedObject(q));
                  ++instances;
                  t.check(rep.passed(), "left " + std::to_string(rep.left) + " right " +
                                            std::to_string(rep.right));
                }
  }
  t.notes.push_back(std::to_string(instances) + " slice instances");
}

void nno(Tally& t) {
  for (auto& [name, alg] : std::vector<reference::Named>{
           {"B2", reference::b2()}, {"H3", reference::h3()}, {"N3", reference::n3()}}) {
    const std::size_t a = alg.lattice().size();
    for (std::size_t n = 0; n <= 4; ++n)
      t.check(nat_exists(alg, n) == nat_oracle(alg.structure(), n, a * a + n, a),
              name + " E_N(" + std::to_string(n) + ")");
  }
  for (auto& r : reference::all())
    for (std::size_t n = 0; n <= 8; ++n) {
      const Element e = nat_exists(r.algebra, n);
      t.check(r.algebra.lattice().leq(interpret(church(n), r.algebra.structure()), e), "Church bound");
      t.check(r.algebra.in_separator(e), "E_N in S");
    }
  {
    auto b2 = reference::b2();
    auto one = terminal(b2);
    t.check(recursor(b2, one, identity(one), identity(one), 6).passed(), "recursor on terminal");
    auto x = delta(b2, {"a", "b"});
    auto q = check_morphism(one, x, {0});
    t.check(recursor(b2, x, q, check_morphism(x, x, {1, 0}), 6).passed(), "recursor B2 swap");
  }
  {
    auto n3 = reference::n3();
    auto x = n3_xy(n3);
    auto q = check_morphism(terminal(n3), x, {0});
    t.check(recursor(n3, x, q, check_morphism(x, x, {1, 0}), 6).passed(), "recursor N3 swap");
  }
}

void forcing(Tally& t) {
  for (auto& r : reference::all()) {
    auto rep = forcing_report(r.algebra);
    t.check(rep.flags.filter && rep.i_is_iso, r.name + " filter/i");
    t.check(rep.flags.principal, r.name + " principal");
    t.check(rep.gamma_full_sampled, r.name + " gamma fullness");
    t.check(rep.equivalences_consistent, r.name + " equivalences");
  }
  auto all = search_structures(chain3(), parse_predicate("valid"), 100000);
  std::size_t non_filter = 0;
  for (const auto& a : all.hits) {
    const auto f = classify(a);
    t.check(f.filter == check_i_iso(a), "search hit filter/iso");
    if (f.consistent && !f.filter) ++non_filter;
  }
  t.notes.push_back(std::to_string(all.hits.size()) + " structures on the 3-chain, " +
                    std::to_string(non_filter) + " consistent non-filter");
}

std::string run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return std::to_string(code) + "\n" + out.str() + err.str();
}

void io(Tally& t) {
  const std::string dir = IMPASM_SAMPLES;
  for (const char* name : {"b2", "h3", "n3", "m2", "k1"}) {
    const std::string path = dir + "/" + name + ".impalg";
    auto text = to_text(load(path));
    t.check(to_text(parse_document(text)) == text, std::string(name) + " round trip");
    for (const std::vector<std::string>& args :
         std::vector<std::vector<std::string>>{{"validate", path},
                                               {"classify", path},
                                               {"nno", path, "--n", "3", "--oracle"},
                                               {"check", "laws", path, "--max-carrier", "1"}})
      t.check(run_cli(args) == run_cli(args), std::string(name) + " " + args[0]);
  }
  const std::string n3 = dir + "/n3.impalg";
  for (const std::vector<std::string>& args :
       std::vector<std::vector<std::string>>{{"construct", "product", n3, "X", "X"},
                                             {"construct", "pi", n3, "collapse", "swap"},
                                             {"construct", "exponential", n3, "X", "T"}}) {
    const std::string a = run_cli(args);
    t.check(a.rfind("0\n", 0) == 0 && a == run_cli(args), args[1] + " determinism");
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"implicative-structure laws", laws},
      {"beta soundness", beta},
      {"separator minimality", minimality},
      {"universal properties", universal},
      {"tracker certificates", certificates},
      {"dependent product adjunction", pi_adjunction},
      {"natural numbers object", nno},
      {"forcing equivalences", forcing},
      {"io determinism", io},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Tally t;
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      criteria[i].second(t);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = error.empty() && t.passed();
    all = all && ok;
    std::printf("criterion %zu %-30s %s  checks=%zu failures=%zu time=%.2fs", i + 1,
                criteria[i].first.c_str(), ok ? "PASS" : "FAIL", t.checks, t.failures, secs);
    for (const auto& n : t.notes) std::printf("  [%s]", n.c_str());
    if (!error.empty()) std::printf("  exception: %s", error.c_str());
    if (t.failures) std::printf("  first: %s", t.first_failure.c_str());
    std::printf("\n");
  }
  return all ? 0 : 1;
}
