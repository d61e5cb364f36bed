#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/common.hpp"
#include "impasm/cli.hpp"

using namespace fx;

namespace {

const std::string samples = IMPASM_SAMPLES;

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

const char* minimal_b2 =
    "[lattice]\n"
    "elements = 0 1\n"
    "cover = 0<1\n"
    "\n"
    "[separator]\n"
    "members = 1\n";

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("impasm_test_" + name)).string();
}

}  // namespace

TEST(WorkspaceIo, MinimalDocument) {
  auto doc = parse_document(minimal_b2);
  EXPECT_TRUE(doc.heyting);
  EXPECT_EQ(doc.lattice.size(), 2u);
  EXPECT_TRUE(forcing_report(doc.algebra).forcing());
}

TEST(WorkspaceIo, MissingKIsRejected) {
  std::string text =
      "[lattice]\nelements = 0 u 1\ncover = 0<u u<1\n\n"
      "[implication]\nrow 0 = 1 1 1\nrow u = 0 u 1\nrow 1 = 0 u 1\n\n"
      "[separator]\nmembers = 1\n";
  try {
    parse_document(text);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("Hilbert axioms"), std::string::npos) << e.what();
  }
}

TEST(WorkspaceIo, ParseErrorsCarryPositions) {
  EXPECT_THROW(parse_document("[lattice\nelements = 0 1\n"), ParseError);
  EXPECT_THROW(parse_document("elements = 0 1\n"), ParseError);
  EXPECT_THROW(parse_document("[lattice]\nelements = 0 1\ncover = 0<1\n[bogus]\n"), ParseError);
  EXPECT_THROW(parse_document("[lattice]\nelements = 0 1\ncover 0<1\n"), ParseError);
}

TEST(WorkspaceIo, InvalidContentIsValidationError) {
  std::string base = "[lattice]\nelements = 0 1\ncover = 0<1\n\n[separator]\nmembers = 1\n\n";
  EXPECT_THROW(parse_document(base + "[assembly X]\npoints = a\nexists = a:0\n"), ValidationError);
  EXPECT_THROW(parse_document(base + "[assembly X]\npoints = a\nexists = a:1\n\n"
                                     "[morphism f : X -> Y]\nmap = a:a\n"),
               ValidationError);
  EXPECT_THROW(parse_document("[lattice]\nelements = a b\ncover = a<b b<a\n"), ValidationError);
  EXPECT_THROW(parse_document("[lattice]\nelements = 0 1\ncover = 0<2\n"), ValidationError);
  EXPECT_THROW(parse_document(base + "[assembly X]\npoints = a\nexists = a1\n"), ParseError);
}

TEST(WorkspaceIo, RoundTripIsCanonical) {
  for (const char* name : {"b2", "h3", "n3", "m2", "k1"}) {
    auto doc = load(samples + "/" + name + ".impalg");
    auto text = to_text(doc);
    auto again = parse_document(text);
    EXPECT_EQ(to_text(again), text) << name;
    EXPECT_EQ(again.algebra.separator().bits(), doc.algebra.separator().bits());
    EXPECT_EQ(again.assemblies.size(), doc.assemblies.size());
    EXPECT_EQ(again.morphisms.size(), doc.morphisms.size());
    auto path = temp_path(std::string(name) + ".impalg");
    save(doc, path);
    EXPECT_EQ(to_text(load(path)), text);
    std::filesystem::remove(path);
  }
}

TEST(WorkspaceIo, SampleContents) {
  auto doc = load(samples + "/n3.impalg");
  EXPECT_FALSE(doc.heyting);
  EXPECT_EQ(doc.algebra.separator().members(),
            (std::vector<Element>{el(doc.algebra, "u"), el(doc.algebra, "1")}));
  const auto& swap = doc.morphism("swap");
  EXPECT_EQ(swap.morphism.tracking_value(), el(doc.algebra, "u"));
  EXPECT_EQ(doc.assembly("X").size(), 2u);
  EXPECT_THROW(doc.assembly("nope"), ValidationError);
}

TEST(Cli, EvalHeytingCollapse) {
  auto r = run({"eval", samples + "/b2.impalg", "\\x y. x"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1\n");
}

TEST(Cli, ClassifyN3) {
  auto r = run({"classify", samples + "/n3.impalg"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')),
            "consistent=yes classical=yes filter=yes principal=yes forcing=yes");
}

TEST(Cli, CheckLaws) {
  auto r = run({"check", "laws", samples + "/b2.impalg", "--max-carrier", "2"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("result = pass"), std::string::npos);
}

TEST(Cli, NnoWithOracle) {
  auto r = run({"nno", samples + "/n3.impalg", "--n", "3", "--oracle"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("MISMATCH"), std::string::npos);
  EXPECT_NE(r.out.find("E_N(3) = u oracle = u ok"), std::string::npos) << r.out;
}

TEST(Cli, ConstructOutputsReload) {
  const std::vector<std::vector<std::string>> cases = {
      {"product", "X", "X"}, {"coproduct", "X", "T"}, {"equalizer", "swap", "swap"},
      {"coequalizer", "swap", "swap"}, {"exponential", "X", "X"}, {"pi", "collapse", "swap"}};
  for (const auto& c : cases) {
    auto path = temp_path("construct_" + c[0] + ".impalg");
    std::vector<std::string> args{"construct", c[0], samples + "/n3.impalg"};
    args.insert(args.end(), c.begin() + 1, c.end());
    args.push_back("--out");
    args.push_back(path);
    auto r = run(args);
    EXPECT_EQ(r.code, 0) << c[0] << ": " << r.err;
    EXPECT_NE(r.out.find("certificates = "), std::string::npos);
    auto doc = load(path);
    EXPECT_GT(doc.assemblies.size(), 2u) << c[0];
    std::filesystem::remove(path);
  }
}

TEST(Cli, SearchReportsCounts) {
  auto r = run({"search", samples + "/b2.impalg", "--predicate", "classical", "--limit", "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("hits = "), std::string::npos);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"eval", samples + "/b2.impalg", "x"}).code, 2);
  EXPECT_EQ(run({"eval", samples + "/b2.impalg", "(\\x"}).code, 2);
  EXPECT_EQ(run({"validate", "/nonexistent/file.impalg"}).code, 2);
  EXPECT_EQ(run({"validate", samples + "/b2.impalg"}).code, 0);
  EXPECT_EQ(run({"construct", "bogus", samples + "/b2.impalg"}).code, 2);

  auto bad = temp_path("bad.impalg");
  {
    std::ofstream f(bad);
    f << "[lattice]\nelements = 0 1\ncover = 0<1\n\n[separator]\nmembers = 0\n\n"
         "[assembly X]\npoints = a\nexists = a:7\n";
  }
  EXPECT_EQ(run({"validate", bad}).code, 1);  // well formed, but names an undeclared element
  {
    std::ofstream f(bad);
    f << "[lattice]\nelements = 0 1\ncover 0<1\n";
  }
  EXPECT_EQ(run({"validate", bad}).code, 2);
  std::filesystem::remove(bad);
}

TEST(Cli, Deterministic) {
  for (const std::vector<std::string>& args :
       std::vector<std::vector<std::string>>{{"classify", samples + "/m2.impalg"},
                                             {"check", "laws", samples + "/n3.impalg"},
                                             {"construct", "pi", samples + "/n3.impalg", "collapse", "swap"}}) {
    auto a = run(args), b = run(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.code, b.code);
  }
}
