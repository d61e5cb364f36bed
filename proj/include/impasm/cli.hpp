#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "impasm/forcing.hpp"
#include "impasm/laws.hpp"
#include "impasm/lccc.hpp"
#include "impasm/nno.hpp"
#include "impasm/workspace_io.hpp"

namespace impasm {

enum ExitCode : int { exit_ok = 0, exit_failure = 1, exit_usage = 2 };

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ---------------------------------------------------------------------------

namespace detail {

class UsageError : public Error {
 public:
  using Error::Error;
};

inline const char* yes_no(bool b) { return b ? "yes" : "no"; }

inline WorkspaceDocument load_for_command(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw UsageError("cannot open '" + path + "'");
  return load(path);
}

inline int cmd_validate(const std::string& path, std::ostream& out) {
  WorkspaceDocument doc = load_for_command(path);
  out << "lattice = " << doc.lattice.size() << " elements\n";
  out << "implication = " << (doc.heyting ? "heyting" : "explicit") << "\n";
  out << "separator =";
  for (Element e : doc.algebra.separator().members()) out << " " << doc.algebra.name(e);
  out << "\nassemblies = " << doc.assemblies.size() << "\n";
  out << "morphisms = " << doc.morphisms.size() << "\n";
  out << "status = valid\n";
  return exit_ok;
}

inline int cmd_eval(const std::string& path, const std::string& source, std::ostream& out) {
  WorkspaceDocument doc = load_for_command(path);
  Term t = parse(source);
  if (!t.closed()) throw UnboundVariable(t.free_variables().front());
  out << doc.algebra.name(interpret(t, doc.algebra.structure())) << "\n";
  return exit_ok;
}

inline int cmd_classify(const std::string& path, std::ostream& out) {
  WorkspaceDocument doc = load_for_command(path);
  const ImplicativeAlgebra& alg = doc.algebra;
  ForcingReport r = forcing_report(alg);
  out << "consistent=" << yes_no(r.flags.consistent) << " classical=" << yes_no(r.flags.classical)
      << " filter=" << yes_no(r.flags.filter) << " principal=" << yes_no(r.flags.principal)
      << " forcing=" << yes_no(r.forcing()) << "\n";
  for (Combinator c : {Combinator::K, Combinator::S, Combinator::I, Combinator::cc, Combinator::fork})
    out << to_string(c) << " = " << alg.name(alg.structure().combinator(c)) << "\n";
  out << "minimum = " << (r.minimum ? alg.name(*r.minimum) : std::string("none")) << "\n";
  out << "quotient_size = " << r.quotient_size << "\n";
  out << "i_is_iso = " << yes_no(r.i_is_iso) << "\n";
  out << "gamma_full_sampled = " << yes_no(r.gamma_full_sampled) << "\n";
  out << "equivalences_consistent = " << yes_no(r.equivalences_consistent) << "\n";
  return r.equivalences_consistent ? exit_ok : exit_failure;
}

struct ConstructOptions {
  std::string kind;
  std::string path;
  std::vector<std::string> args;
  std::string out_path;
  std::string name;
};

inline int cmd_construct(const ConstructOptions& o, std::ostream& out) {
  WorkspaceDocument doc = load_for_command(o.path);
  auto need = [&](std::size_t k) {
    if (o.args.size() != k)
      throw UsageError("construct " + o.kind + " takes " + std::to_string(k) + " arguments");
  };
  auto base = [&](const std::string& dflt) { return o.name.empty() ? dflt : o.name; };
  std::vector<std::string> new_assemblies;
  std::vector<std::string> new_morphisms;
  std::vector<TrackerCertificate> certs;
  auto add_obj = [&](const std::string& n, const Assembly& a) {
    doc.add_assembly(n, a);
    new_assemblies.push_back(n);
  };
  auto add_mor = [&](const std::string& n, const std::string& s, const std::string& t,
                     const Morphism& m) {
    doc.add_morphism(n, s, t, m);
    new_morphisms.push_back(n);
  };

  if (o.kind == "product" || o.kind == "coproduct" || o.kind == "exponential") {
    need(2);
    const Assembly& a = doc.assembly(o.args[0]);
    const Assembly& b = doc.assembly(o.args[1]);
    if (o.kind == "product") {
      Product p = product(a, b);
      const std::string n = base("prod_" + o.args[0] + "_" + o.args[1]);
      add_obj(n, p.object);
      add_mor(n + "_pi1", n, o.args[0], p.pi1);
      add_mor(n + "_pi2", n, o.args[1], p.pi2);
      certs = p.certificates;
    } else if (o.kind == "coproduct") {
      Coproduct c = coproduct(a, b);
      const std::string n = base("coprod_" + o.args[0] + "_" + o.args[1]);
      add_obj(n, c.object);
      add_mor(n + "_inl", o.args[0], n, c.inl);
      add_mor(n + "_inr", o.args[1], n, c.inr);
      certs = c.certificates;
    } else {
      Exponential e = exponential(a, b);
      add_obj(base("exp_" + o.args[0] + "_" + o.args[1]), e.object);
      certs = e.certificates;
    }
  } else if (o.kind == "equalizer" || o.kind == "coequalizer") {
    need(2);
    const NamedMorphism& f = doc.morphism(o.args[0]);
    const NamedMorphism& g = doc.morphism(o.args[1]);
    if (o.kind == "equalizer") {
      Equalizer e = equalizer(f.morphism, g.morphism);
      const std::string n = base("eq_" + o.args[0] + "_" + o.args[1]);
      const std::string src = f.source;
      add_obj(n, e.object);
      add_mor(n + "_incl", n, src, e.inclusion);
      certs = e.certificates;
    } else {
      Coequalizer c = coequalizer(f.morphism, g.morphism);
      const std::string n = base("coeq_" + o.args[0] + "_" + o.args[1]);
      const std::string tgt = f.target;
      add_obj(n, c.object);
      add_mor(n + "_quot", tgt, n, c.quotient);
      certs = c.certificates;
    }
  } else if (o.kind == "pi") {
    need(2);
    const NamedMorphism& f = doc.morphism(o.args[0]);
    const NamedMorphism& t = doc.morphism(o.args[1]);
    if (t.target != f.source)
      throw ValidationError("pi: '" + o.args[1] + "' must be a map into the domain of '" +
                            o.args[0] + "'");
    DependentProduct d = dependent_product(f.morphism, SlicedObject(t.morphism));
    const std::string n = base("pi_" + o.args[0] + "_" + o.args[1]);
    const std::string y = f.target;
    add_obj(n, d.object.total);
    add_mor(n + "_bp", n, y, d.object.projection);
    certs = d.certificates;
  } else {
    throw UsageError("unknown construction '" + o.kind + "'");
  }

  for (const auto& n : new_assemblies) out << assembly_section(n, doc.assembly(n)) << "\n";
  for (const auto& n : new_morphisms) out << morphism_section(doc.morphism(n)) << "\n";
  std::size_t held = 0;
  for (const auto& c : certs) held += c.holds;
  out << "certificates = " << held << "/" << certs.size() << "\n";
  for (const auto& c : certs)
    out << "  " << c.what << ": " << doc.algebra.name(c.tracker) << " <= "
        << doc.algebra.name(c.tau) << "\n";
  if (!o.out_path.empty()) {
    const std::string text = to_text(doc);
    parse_document(text);  // the output must re-load
    save(doc, o.out_path);
  }
  return held == certs.size() ? exit_ok : exit_failure;
}

inline int cmd_laws(const std::string& path, const LawSuiteOptions& opt, std::ostream& out) {
  WorkspaceDocument doc = load_for_command(path);
  bool ok = true;
  for (const LawReport& r : run_law_suite(doc.algebra, opt)) {
    out << r.name << ": checks=" << r.checks << " failures=" << r.failures.size() << " "
        << (r.passed() ? "ok" : "FAIL") << "\n";
    for (const auto& f : r.failures) out << "  " << f << "\n";
    ok = ok && r.passed();
  }
  out << "result = " << (ok ? "pass" : "fail") << "\n";
  return ok ? exit_ok : exit_failure;
}

inline int cmd_nno(const std::string& path, std::size_t n, bool oracle, std::ostream& out) {
  WorkspaceDocument doc = load_for_command(path);
  const ImplicativeAlgebra& alg = doc.algebra;
  const std::size_t size = alg.lattice().size();
  bool ok = true;
  for (std::size_t k = 0; k <= n; ++k) {
    const Element e = nat_exists(alg, k);
    out << "E_N(" << k << ") = " << alg.name(e);
    if (oracle) {
      const Element o = nat_oracle(alg.structure(), k, size * size + k, size);
      out << " oracle = " << alg.name(o) << (o == e ? " ok" : " MISMATCH");
      ok = ok && o == e;
    }
    out << "\n";
  }
  return ok ? exit_ok : exit_failure;
}

inline int cmd_search(const std::string& path, const std::string& pred, std::size_t limit,
                      std::ostream& out) {
  WorkspaceDocument doc = load_for_command(path);
  const StructurePredicate p = parse_predicate(pred);
  const SearchOutcome r = search_structures(doc.lattice, p, limit);
  const auto& nm = doc.lattice.names();
  const std::size_t n = doc.lattice.size();
  out << "candidates = " << r.candidates << "\nvalid = " << r.valid << "\nhits = " << r.hits.size()
      << "\n";
  std::size_t k = 0;
  for (const ImplicativeAlgebra& alg : r.hits) {
    const SeparatorFlags f = classify(alg);
    out << "\n# hit " << ++k << ": consistent=" << yes_no(f.consistent)
        << " classical=" << yes_no(f.classical) << " filter=" << yes_no(f.filter)
        << " principal=" << yes_no(f.principal) << " i_is_iso=" << yes_no(check_i_iso(alg))
        << "\n";
    const auto& t = alg.structure().implication_table();
    for (std::size_t a = 0; a < n; ++a) {
      out << "row " << nm[a] << " =";
      for (std::size_t b = 0; b < n; ++b) out << " " << nm[t[a * n + b]];
      out << "\n";
    }
    out << "separator =";
    for (Element e : alg.separator().members()) out << " " << alg.name(e);
    out << "\n";
  }
  return exit_ok;
}

}  // namespace detail

inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Finite implicative algebras and their assemblies", "impasm"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string file, term, predicate = "valid";
  std::size_t limit = 10, nno_n = 4;
  bool oracle = false;
  LawSuiteOptions laws;
  ConstructOptions cons;

  auto* validate = app.add_subcommand("validate", "Load and validate a workspace file");
  validate->add_option("FILE", file)->required();

  auto* eval = app.add_subcommand("eval", "Interpret a closed lambda term");
  eval->add_option("FILE", file)->required();
  eval->add_option("TERM", term)->required();

  auto* cls = app.add_subcommand("classify", "Separator flags and the forcing report");
  cls->add_option("FILE", file)->required();

  auto* construct = app.add_subcommand("construct", "Build a limit, colimit, exponential or dependent product");
  construct->add_option("KIND", cons.kind)
      ->required()
      ->check(CLI::IsMember({"product", "coproduct", "equalizer", "coequalizer", "exponential", "pi"}));
  construct->add_option("FILE", cons.path)->required();
  construct->add_option("ARGS", cons.args);
  construct->add_option("--out", cons.out_path, "Write the extended workspace here");
  construct->add_option("--name", cons.name, "Name of the new assembly");

  auto* check = app.add_subcommand("check", "Property checks");
  check->require_subcommand(1);
  auto* lawcmd = check->add_subcommand("laws", "Run the full property suite");
  lawcmd->add_option("FILE", file)->required();
  lawcmd->add_option("--max-carrier", laws.max_carrier)->check(CLI::Range(0, 3));
  lawcmd->add_option("--terms", laws.random_terms);
  lawcmd->add_option("--seed", laws.seed);

  auto* nno = app.add_subcommand("nno", "Existence predicate of the natural numbers");
  nno->add_option("FILE", file)->required();
  nno->add_option("--n", nno_n)->required();
  nno->add_flag("--oracle", oracle, "Compare with the brute-force oracle");

  auto* search = app.add_subcommand("search", "Enumerate implication tables on the file's lattice");
  search->add_option("FILE", file)->required();
  search->add_option("--predicate", predicate);
  search->add_option("--limit", limit);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (validate->parsed()) return cmd_validate(file, out);
    if (eval->parsed()) return cmd_eval(file, term, out);
    if (cls->parsed()) return cmd_classify(file, out);
    if (construct->parsed()) return cmd_construct(cons, out);
    if (lawcmd->parsed()) return cmd_laws(file, laws, out);
    if (nno->parsed()) return cmd_nno(file, nno_n, oracle, out);
    if (search->parsed()) return cmd_search(file, predicate, limit, out);
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return exit_usage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const UnboundVariable& e) {
    err << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const InternalError& e) {
    err << "internal error: " << e.what() << "\n";
    return exit_failure;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_usage;
}

}  // namespace impasm
