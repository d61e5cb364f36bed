#include <gtest/gtest.h>

#include <random>

#include "support/common.hpp"
#include "impasm/laws.hpp"

using namespace fx;

namespace {
bool same(const Term& a, const std::string& src) { return alpha_equal(a, parse(src)); }
}  // namespace

TEST(Lambda, ParseShapes) {
  auto k = parse("\\x y. x");
  ASSERT_EQ(k.kind(), Term::Kind::abstraction);
  EXPECT_EQ(k.name(), "x");
  ASSERT_EQ(k.body().kind(), Term::Kind::abstraction);
  EXPECT_EQ(k.body().name(), "y");
  EXPECT_EQ(k.body().body().kind(), Term::Kind::variable);
  EXPECT_EQ(k.body().body().name(), "x");

  auto p = parse("#u (\\x.x)");
  ASSERT_EQ(p.kind(), Term::Kind::application);
  EXPECT_EQ(p.function().kind(), Term::Kind::parameter);
  EXPECT_EQ(p.function().name(), "u");
  EXPECT_EQ(p.argument().kind(), Term::Kind::abstraction);

  EXPECT_TRUE(alpha_equal(parse("\\z. z (\\x y. x)"), macro("pi1")));
  EXPECT_EQ(parse("cc").kind(), Term::Kind::cc);
}

TEST(Lambda, ParseErrors) {
  EXPECT_THROW(parse("\\x x"), ParseError);
  EXPECT_THROW(parse("(x"), ParseError);
  EXPECT_THROW(parse(""), ParseError);
  EXPECT_THROW(parse("x )"), ParseError);
}

TEST(Lambda, RoundTripThroughPrinter) {
  for (const char* src : {"\\x y. x", "#u (\\x.x)", "\\z. z (\\x y. x)", "(\\x.x x)(\\x.x)", "cc #1"}) {
    auto t = parse(src);
    EXPECT_TRUE(alpha_equal(parse(to_string(t)), t)) << src;
  }
}

TEST(Lambda, FreeVariables) {
  EXPECT_TRUE(parse("\\x. x").closed());
  auto t = parse("\\x. x y z");
  EXPECT_EQ(t.free_variables(), (std::vector<std::string>{"y", "z"}));
}

TEST(Lambda, InterpretExamples) {
  auto h3 = reference::h3().structure();
  EXPECT_EQ(interpret(parse("\\x y. x"), h3), h3.lattice().top());
  auto n3 = reference::n3_structure();
  EXPECT_EQ(interpret(parse("\\x y. x"), n3), el(n3, "u"));
  EXPECT_EQ(interpret(parse("\\x y. x"), n3), combinator(n3, Combinator::K));
  EXPECT_EQ(interpret(parse("(\\x.x) #u"), n3), el(n3, "u"));
  EXPECT_EQ(interpret(parse("\\x y z. x z (y z)"), n3), combinator(n3, Combinator::S));
  EXPECT_EQ(interpret(parse("cc"), n3), combinator(n3, Combinator::cc));
}

TEST(Lambda, InterpretUsesEnvironment) {
  auto n3 = reference::n3_structure();
  Environment env{{"y", el(n3, "0")}};
  EXPECT_EQ(interpret(parse("y"), n3, env), el(n3, "0"));
  EXPECT_THROW(interpret(parse("y"), n3), UnboundVariable);
  EXPECT_THROW(interpret(parse("#nope"), n3), Error);
}

TEST(Lambda, BetaReducts) {
  auto r1 = beta_reducts(parse("(\\x.x) y"));
  ASSERT_EQ(r1.size(), 1u);
  EXPECT_TRUE(same(r1[0], "y"));
  EXPECT_TRUE(beta_reducts(parse("\\x.x")).empty());
  auto r3 = beta_reducts(parse("(\\x.x x)(\\x.x)"));
  ASSERT_EQ(r3.size(), 1u);
  EXPECT_TRUE(same(r3[0], "(\\x.x)(\\x.x)"));
}

TEST(Lambda, SubstitutionAvoidsCapture) {
  auto t = substitute(parse("\\y. x y"), "x", parse("y"));
  // The bound y must be renamed so the free y stays free.
  EXPECT_EQ(t.free_variables(), (std::vector<std::string>{"y"}));
  EXPECT_TRUE(alpha_equal(t, parse("\\w. y w")));
}

TEST(Lambda, Church) {
  EXPECT_TRUE(same(church(0), "\\x f. x"));
  EXPECT_TRUE(same(church(1), "\\x f. f x"));
  EXPECT_TRUE(same(church(3), "\\x f. f (f (f x))"));
}

TEST(Lambda, Macros) {
  EXPECT_TRUE(same(macro("pi1"), "\\z. z (\\x y. x)"));
  EXPECT_TRUE(same(macro("pair_tracker", {parse("#F"), parse("#G")}), "\\x z. z (#F x) (#G x)"));
  EXPECT_TRUE(same(macro("rec_tracker", {parse("#Q"), parse("#F")}), "\\m. m #Q #F"));
  EXPECT_THROW(macro("no_such_macro"), UnknownMacro);
  EXPECT_THROW(macro("pair_tracker", {parse("#F")}), UnfilledHole);
  EXPECT_EQ(macro_arity("pair_tracker"), 2u);
  for (const auto& name : macro_names()) {
    std::vector<Term> holes(macro_arity(name), parse("\\x.x"));
    EXPECT_TRUE(macro(name, holes).closed()) << name;
  }
}

TEST(Lambda, BetaSoundnessOnReferenceAlgebras) {
  for (auto& r : reference::all())
    EXPECT_TRUE(check_beta_soundness(r.algebra.structure(), 200, 7).passed()) << r.name;
}

TEST(Lambda, HeytingCollapse) {
  for (auto s : {reference::b2().structure(), reference::h3().structure(), reference::m2().structure()})
    EXPECT_TRUE(check_heyting_collapse(s, 100, 11).passed());
}

TEST(Lambda, ClosureUnderSeparatorParameters) {
  // Closed terms whose parameters lie in S evaluate into S.
  for (auto& r : reference::all()) {
    std::vector<Term> params;
    for (auto e : r.algebra.separator().members()) params.push_back(Term::param(r.algebra.lattice(), e));
    std::mt19937_64 rng(5);
    Interpreter in(r.algebra.structure());
    for (int i = 0; i < 100; ++i) {
      auto t = random_closed_term(rng, 5, params);
      EXPECT_TRUE(r.algebra.in_separator(in(t))) << r.name << " " << to_string(t);
    }
  }
}
