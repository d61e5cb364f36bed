#include <gtest/gtest.h>

#include "support/common.hpp"
#include "support/oracle.hpp"
#include "impasm/forcing.hpp"
#include "impasm/laws.hpp"

using namespace fx;

namespace {

std::vector<ImplicativeStructure> all_on(const FiniteLattice& L) {
  std::vector<ImplicativeStructure> out;
  for (auto& a : search_structures(L, parse_predicate("valid"), 10000).hits)
    out.push_back(a.structure());
  return out;
}

}  // namespace

TEST(Implicative, ValidStructures) {
  EXPECT_NO_THROW(from_heyting(build_lattice({"0", "1"}, {{"0", "1"}})));
  EXPECT_NO_THROW(reference::n3_structure());
  EXPECT_NO_THROW(from_heyting(diamond()));
}

TEST(Implicative, AllBottomTableViolatesAxioms) {
  EXPECT_THROW(validate_structure(chain3(), ImplicationTable(9, 0)), AxiomViolation);
}

TEST(Implicative, NonAntitoneRowRejected) {
  // 1 -> 0 = u lies above 0 -> 0 = 0.
  ImplicationTable t = {0, 1, 2, 0, 1, 2, 1, 1, 2};
  EXPECT_THROW(validate_structure(chain3(), t), AxiomViolation);
}

TEST(Implicative, ApplicationExamples) {
  auto b2 = reference::b2().structure();
  EXPECT_EQ(b2.app(el(b2, "1"), el(b2, "0")), el(b2, "0"));
  auto n3 = reference::n3_structure();
  EXPECT_EQ(n3.app(el(n3, "u"), el(n3, "u")), el(n3, "u"));
}

TEST(Implicative, HeytingApplicationIsMeet) {
  for (auto s : {reference::h3().structure(), reference::m2().structure()})
    for (auto a : s.lattice().elements())
      for (auto b : s.lattice().elements()) EXPECT_EQ(s.app(a, b), s.lattice().meet(a, b));
}

TEST(Implicative, AbstractionExamples) {
  auto h3 = reference::h3().structure();
  auto id = h3.lattice().elements();
  EXPECT_EQ(h3.abs(id), h3.lattice().top());

  auto n3 = reference::n3_structure();
  auto nid = n3.lattice().elements();
  EXPECT_EQ(n3.abs(nid), el(n3, "u"));

  auto b2 = reference::b2().structure();
  std::vector<Element> zero(2, b2.lattice().bottom());
  EXPECT_EQ(b2.abs(zero), el(b2, "0"));
}

TEST(Implicative, ConnectiveExamples) {
  auto b2 = reference::b2().structure();
  const Element one[] = {el(b2, "1")};
  const Element oneone[] = {el(b2, "1"), el(b2, "1")};
  EXPECT_EQ(connective(b2, Connective::conj, oneone), el(b2, "1"));
  EXPECT_EQ(connective(b2, Connective::neg, one), el(b2, "0"));
  EXPECT_EQ(connective(b2, Connective::exists, one), el(b2, "1"));
  EXPECT_EQ(connective(b2, Connective::top, {}), b2.lattice().top());
  EXPECT_EQ(connective(b2, Connective::bot, {}), b2.lattice().bottom());
  EXPECT_THROW(connective(b2, Connective::neg, oneone), ArityError);
}

TEST(Implicative, CombinatorExamples) {
  auto n3 = reference::n3_structure();
  for (auto c : {Combinator::K, Combinator::S, Combinator::I, Combinator::cc, Combinator::fork})
    EXPECT_EQ(combinator(n3, c), el(n3, "u")) << to_string(c);
  auto h3 = reference::h3().structure();
  EXPECT_EQ(combinator(h3, Combinator::K), h3.lattice().top());
  EXPECT_EQ(combinator(h3, Combinator::S), h3.lattice().top());
  EXPECT_EQ(combinator(h3, Combinator::cc), el(h3, "u"));
  auto b2 = reference::b2().structure();
  EXPECT_EQ(combinator(b2, Combinator::cc), b2.lattice().top());
}

// Frozen from the brute-force oracle.
TEST(Implicative, N3FrozenTables) {
  auto n3 = reference::n3_structure();
  const std::size_t conj[3][3] = {{0, 0, 0}, {0, 1, 1}, {0, 1, 1}};
  const std::size_t disj[3][3] = {{0, 1, 1}, {1, 1, 1}, {1, 1, 1}};
  const std::size_t neg[3] = {2, 0, 0};
  for (std::size_t a = 0; a < 3; ++a) {
    EXPECT_EQ(n3.neg(n3.lattice().element(a)).index(), neg[a]);
    for (std::size_t b = 0; b < 3; ++b) {
      EXPECT_EQ(n3.conj_index(a, b), conj[a][b]);
      EXPECT_EQ(n3.disj(n3.lattice().element(a), n3.lattice().element(b)).index(), disj[a][b]);
    }
  }
}

TEST(Implicative, AgreesWithOracleOnReferenceAndSearchedStructures) {
  std::vector<ImplicativeStructure> all;
  for (auto& r : reference::all()) all.push_back(r.algebra.structure());
  auto found = all_on(chain3());
  all.insert(all.end(), found.begin(), found.end());
  for (const auto& s : all) {
    auto r = oracle::raw(s);
    const std::size_t n = s.size();
    EXPECT_EQ(combinator(s, Combinator::K).index(), r.K());
    EXPECT_EQ(combinator(s, Combinator::S).index(), r.S());
    EXPECT_EQ(combinator(s, Combinator::cc).index(), r.cc());
    EXPECT_EQ(combinator(s, Combinator::fork).index(), r.fork());
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        EXPECT_EQ(s.app_index(a, b), r.app(a, b));
        EXPECT_EQ(s.conj_index(a, b), r.conj(a, b));
        EXPECT_EQ(s.disj(s.lattice().element(a), s.lattice().element(b)).index(), r.disj(a, b));
        const std::size_t fam[] = {a, b};
        EXPECT_EQ(s.exists_index(fam), r.exists({a, b}));
      }
    for (const auto& f : all_maps(n, n)) EXPECT_EQ(s.abs_index(f), r.abs(f));
  }
}

TEST(Implicative, ApplicativeOnePoint) {
  auto s = from_applicative({"e"}, {0});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.imp(el(s, "{e}"), el(s, "{}")), el(s, "{}"));
  EXPECT_EQ(combinator(s, Combinator::K), s.lattice().top());
}

TEST(Implicative, ApplicativeConstantTwoPoint) {
  auto s = from_applicative({"p", "q"}, {0, 0, 0, 0});
  ASSERT_EQ(s.size(), 4u);
  auto r = oracle::raw(s);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) {
      EXPECT_EQ(s.app_index(a, b), r.app(a, b));
      for (std::size_t c = 0; c < 4; ++c)
        EXPECT_EQ(r.leq[r.app(a, b)][c], r.leq[a][r.imp[b][c]]);
    }
}

TEST(Implicative, LawChecksPass) {
  for (auto& r : reference::all()) {
    EXPECT_TRUE(check_axioms(r.algebra.structure()).passed()) << r.name;
    EXPECT_TRUE(check_adjunction(r.algebra.structure()).passed()) << r.name;
    EXPECT_TRUE(check_monotonicity(r.algebra.structure()).passed()) << r.name;
    EXPECT_TRUE(check_beta_eta(r.algebra.structure()).passed()) << r.name;
  }
}
