#include <gtest/gtest.h>

#include "support/common.hpp"
#include "impasm/forcing.hpp"

using namespace fx;

TEST(Forcing, TwoAssemblyValues) {
  auto n3 = reference::n3();
  auto two = two_assembly(n3);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two.exists(0), el(n3, "u"));
  EXPECT_EQ(two.exists(1), el(n3, "u"));
  auto b2 = reference::b2();
  EXPECT_EQ(two_assembly(b2).exists(0), b2.top());
  EXPECT_EQ(two_assembly(b2).exists(1), b2.top());
}

TEST(Forcing, CanonicalIsMonoEpiAndIsoIffFilter) {
  for (auto& r : reference::all()) {
    auto i = canonical_i(r.algebra);
    EXPECT_TRUE(is_mono(i) && is_epi(i));
    EXPECT_EQ(check_i_iso(r.algebra), classify(r.algebra).filter) << r.name;
  }
  EXPECT_TRUE(check_i_iso(reference::n3()));
  EXPECT_TRUE(check_i_iso(reference::b2()));
}

TEST(Forcing, GammaFullness) {
  for (auto& r : reference::all()) EXPECT_TRUE(gamma_fullness_sample(r.algebra)) << r.name;
  EXPECT_TRUE(gamma_fullness_sample(std::span<const Assembly>{}));
}

TEST(Forcing, ReportExamples) {
  auto b = forcing_report(reference::b2());
  EXPECT_TRUE(b.flags.principal);
  EXPECT_TRUE(b.forcing());
  EXPECT_EQ(b.quotient_size, 2u);

  auto n3 = reference::n3();
  auto n = forcing_report(n3);
  EXPECT_TRUE(n.flags.principal);
  EXPECT_EQ(n.minimum, el(n3, "u"));
  EXPECT_TRUE(n.forcing());
  EXPECT_EQ(n.quotient_size, 2u);

  auto h = forcing_report(reference::h3());
  EXPECT_TRUE(h.flags.principal);
  EXPECT_EQ(h.quotient_size, 3u);
  EXPECT_EQ(forcing_report(reference::m2()).quotient_size, 4u);
}

TEST(Forcing, EquivalencesConsistentOnReferenceAlgebras) {
  for (auto& r : reference::all()) {
    auto rep = forcing_report(r.algebra);
    EXPECT_TRUE(rep.equivalences_consistent) << r.name;
    EXPECT_EQ(rep.i_is_iso, rep.flags.filter) << r.name;
    if (rep.flags.principal) {
      EXPECT_TRUE(rep.i_is_iso && rep.gamma_full_sampled) << r.name;
    }
  }
}

TEST(Forcing, PredicateParsing) {
  auto b2 = reference::b2();
  EXPECT_TRUE(parse_predicate("valid")(b2));
  EXPECT_TRUE(parse_predicate("consistent & classical")(b2));
  EXPECT_FALSE(parse_predicate("!filter")(b2));
  EXPECT_FALSE(parse_predicate("classical")(reference::h3()));
  EXPECT_TRUE(parse_predicate("heyting,principal")(reference::h3()));
  EXPECT_FALSE(parse_predicate("heyting")(reference::n3()));
  EXPECT_THROW(parse_predicate("bogus"), Error);
}

TEST(Forcing, SearchOnTwoChain) {
  auto L = build_lattice({"0", "1"}, {{"0", "1"}});
  auto valid = search_structures(L, parse_predicate("valid"), 100);
  EXPECT_GE(valid.hits.size(), 1u);
  bool boolean_found = false;
  auto boolean = heyting_implication(L);
  for (const auto& a : valid.hits)
    if (a.structure().implication_table() == boolean) boolean_found = true;
  EXPECT_TRUE(boolean_found);

  auto classical = search_structures(L, parse_predicate("classical"), 100);
  boolean_found = false;
  for (const auto& a : classical.hits)
    if (a.structure().implication_table() == boolean) boolean_found = true;
  EXPECT_TRUE(boolean_found);
}

TEST(Forcing, SearchHitsRespectFilterIsoEquivalence) {
  // No existence of a consistent non-filter separator is assumed here.
  for (const auto& L : {chain3(), diamond()}) {
    auto out = search_structures(L, parse_predicate("consistent"), 2000);
    EXPECT_GT(out.hits.size(), 0u);
    for (const auto& a : out.hits) {
      EXPECT_EQ(check_i_iso(a), classify(a).filter);
      EXPECT_TRUE(forcing_report(a).equivalences_consistent);
    }
  }
}

TEST(Forcing, SearchLimit) {
  auto out = search_structures(chain3(), parse_predicate("valid"), 3);
  EXPECT_EQ(out.hits.size(), 3u);
}
