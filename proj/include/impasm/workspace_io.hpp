#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "impasm/assemblies.hpp"
#include "impasm/errors.hpp"

namespace impasm {

struct NamedAssembly {
  std::string name;
  Assembly assembly;
};

struct NamedMorphism {
  std::string name;
  std::string source;
  std::string target;
  Morphism morphism;
};

/// A loaded IMPALG v1 file. Every object in it has been validated.
struct WorkspaceDocument {
  FiniteLattice lattice;
  bool heyting = true;
  ImplicationTable table;
  bool explicit_members = false;    // members = ... rather than generators = ...
  std::vector<Element> separator_spec;
  ImplicativeAlgebra algebra;
  std::vector<NamedAssembly> assemblies;
  std::vector<NamedMorphism> morphisms;

  const Assembly* find_assembly(std::string_view name) const {
    for (const auto& a : assemblies)
      if (a.name == name) return &a.assembly;
    return nullptr;
  }
  const NamedMorphism* find_morphism(std::string_view name) const {
    for (const auto& m : morphisms)
      if (m.name == name) return &m;
    return nullptr;
  }
  const Assembly& assembly(std::string_view name) const {
    if (auto a = find_assembly(name)) return *a;
    throw ValidationError("no assembly named '" + std::string(name) + "'");
  }
  const NamedMorphism& morphism(std::string_view name) const {
    if (auto m = find_morphism(name)) return *m;
    throw ValidationError("no morphism named '" + std::string(name) + "'");
  }
  /// Name of a stored assembly structurally equal to `a`, if any.
  std::optional<std::string> name_of(const Assembly& a) const {
    for (const auto& na : assemblies)
      if (na.assembly == a) return na.name;
    return std::nullopt;
  }

  void add_assembly(std::string name, Assembly a);
  void add_morphism(std::string name, std::string source, std::string target, Morphism m);
};

/// Identifiers for assemblies and morphisms.
bool valid_object_name(std::string_view s);
/// Lattice element and point names: no whitespace, '#', '[' or ']'.
bool valid_point_name(std::string_view s);

/// Throws ParseError for malformed text and ValidationError (or the module's
/// own error) when a construct violates its invariants or names something
/// that was never declared.
WorkspaceDocument parse_document(std::string_view text);
WorkspaceDocument load(const std::string& path);

/// Canonical text: fixed section order, declared element and point order,
/// covers recomputed from the order.
std::string to_text(const WorkspaceDocument& doc);
void save(const WorkspaceDocument& doc, const std::string& path);

/// Canonical text of a single section.
std::string assembly_section(const std::string& name, const Assembly& a);
std::string morphism_section(const NamedMorphism& m);

// ---------------------------------------------------------------------------

inline bool valid_object_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' ||
          c == '-'))
      return false;
  return true;
}

inline bool valid_point_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '#' || c == '[' || c == ']')
      return false;
  return true;
}

inline void WorkspaceDocument::add_assembly(std::string name, Assembly a) {
  if (!valid_object_name(name)) throw ValidationError("invalid assembly name '" + name + "'");
  if (find_assembly(name)) throw ValidationError("assembly '" + name + "' is declared twice");
  if (!(a.algebra() == algebra)) throw CarrierMismatch("assembly over a different algebra");
  for (const auto& p : a.points())
    if (!valid_point_name(p)) throw ValidationError("invalid point name '" + p + "'");
  assemblies.push_back({std::move(name), std::move(a)});
}

inline void WorkspaceDocument::add_morphism(std::string name, std::string source,
                                            std::string target, Morphism m) {
  if (!valid_object_name(name)) throw ValidationError("invalid morphism name '" + name + "'");
  if (find_morphism(name)) throw ValidationError("morphism '" + name + "' is declared twice");
  if (!(assembly(source) == m.source()) || !(assembly(target) == m.target()))
    throw CarrierMismatch("morphism '" + name + "' does not match its declared ends");
  morphisms.push_back({std::move(name), std::move(source), std::move(target), std::move(m)});
}

namespace detail {

struct RawEntry {
  std::string key;
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;  // of the value
};

struct RawSection {
  std::string kind;
  std::string name, source, target;
  std::size_t line = 0;
  std::vector<RawEntry> entries;

  const RawEntry* get(std::string_view key) const {
    for (const auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
};

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

/// Words of `value` with their 1-based columns in the line.
inline std::vector<std::pair<std::string, std::size_t>> words(const RawEntry& e) {
  std::vector<std::pair<std::string, std::size_t>> out;
  std::size_t i = 0;
  const std::string& v = e.value;
  while (i < v.size()) {
    while (i < v.size() && std::isspace(static_cast<unsigned char>(v[i]))) ++i;
    if (i >= v.size()) break;
    std::size_t j = i;
    while (j < v.size() && !std::isspace(static_cast<unsigned char>(v[j]))) ++j;
    out.emplace_back(v.substr(i, j - i), e.column + i);
    i = j;
  }
  return out;
}

inline std::vector<RawSection> split_sections(std::string_view text) {
  std::vector<RawSection> out;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++lineno;
    const bool last = end >= text.size();
    pos = end + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::string_view t = trim(line);
    if (t.empty()) {
      if (last) break;
      continue;
    }
    const std::size_t indent = static_cast<std::size_t>(t.data() - line.data());
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError(lineno, indent + 1, "section header must end with ']'");
      std::string_view inner = trim(t.substr(1, t.size() - 2));
      RawSection sec;
      sec.line = lineno;
      std::istringstream in{std::string(inner)};
      std::vector<std::string> toks;
      for (std::string w; in >> w;) toks.push_back(w);
      if (toks.empty()) throw ParseError(lineno, indent + 1, "empty section header");
      sec.kind = toks[0];
      if (sec.kind == "lattice" || sec.kind == "implication" || sec.kind == "separator") {
        if (toks.size() != 1)
          throw ParseError(lineno, indent + 1, "section [" + sec.kind + "] takes no name");
      } else if (sec.kind == "assembly") {
        if (toks.size() != 2) throw ParseError(lineno, indent + 1, "expected [assembly NAME]");
        sec.name = toks[1];
      } else if (sec.kind == "morphism") {
        // Allow "f : X -> Y" with or without spaces around ':' and '->'.
        std::string rest(trim(inner.substr(8)));
        const auto colon = rest.find(':');
        const auto arrow = rest.find("->");
        if (colon == std::string::npos || arrow == std::string::npos || arrow < colon)
          throw ParseError(lineno, indent + 1, "expected [morphism NAME : SOURCE -> TARGET]");
        sec.name = std::string(trim(std::string_view(rest).substr(0, colon)));
        sec.source = std::string(trim(std::string_view(rest).substr(colon + 1, arrow - colon - 1)));
        sec.target = std::string(trim(std::string_view(rest).substr(arrow + 2)));
        if (sec.name.empty() || sec.source.empty() || sec.target.empty())
          throw ParseError(lineno, indent + 1, "expected [morphism NAME : SOURCE -> TARGET]");
      } else {
        throw ParseError(lineno, indent + 2, "unknown section '" + sec.kind + "'");
      }
      out.push_back(std::move(sec));
    } else {
      if (out.empty()) throw ParseError(lineno, indent + 1, "entry outside of any section");
      const auto eq = t.find('=');
      if (eq == std::string_view::npos) throw ParseError(lineno, indent + 1, "expected 'key = value'");
      RawEntry e;
      std::istringstream in{std::string(t.substr(0, eq))};
      std::vector<std::string> kw;
      for (std::string w; in >> w;) kw.push_back(w);
      if (kw.empty()) throw ParseError(lineno, indent + 1, "missing key before '='");
      for (std::size_t i = 0; i < kw.size(); ++i) e.key += (i ? " " : "") + kw[i];
      std::string_view raw = t.substr(eq + 1);
      std::size_t lead = 0;
      while (lead < raw.size() && std::isspace(static_cast<unsigned char>(raw[lead]))) ++lead;
      e.value = std::string(trim(raw));
      e.line = lineno;
      e.column = indent + eq + 2 + lead;
      for (const auto& prev : out.back().entries)
        if (prev.key == e.key) throw ParseError(lineno, indent + 1, "duplicate key '" + e.key + "'");
      out.back().entries.push_back(std::move(e));
    }
    if (last) break;
  }
  return out;
}

inline void require_keys(const RawSection& sec, std::initializer_list<std::string_view> allowed) {
  for (const auto& e : sec.entries) {
    bool ok = std::find(allowed.begin(), allowed.end(), e.key) != allowed.end();
    if (!ok && sec.kind == "implication" && e.key.rfind("row ", 0) == 0) ok = true;
    if (!ok) throw ParseError(e.line, 1, "unknown key '" + e.key + "' in [" + sec.kind + "]");
  }
}

/// A name that is well formed but refers to nothing declared.
[[noreturn]] inline void unresolved(std::size_t line, std::size_t col, const std::string& what) {
  throw ValidationError(std::to_string(line) + ":" + std::to_string(col) + ": " + what);
}

inline Element element_word(const FiniteLattice& L, const std::string& w, std::size_t line,
                            std::size_t col) {
  if (auto e = L.find(w)) return *e;
  unresolved(line, col, "unknown lattice element '" + w + "'");
}

/// "left:right" where left must satisfy `is_left` and right `is_right`; the
/// split point is chosen so that exactly one reading works.
template <class L, class R>
std::pair<std::string, std::string> split_pair(const std::string& w, std::size_t line,
                                               std::size_t col, L is_left, R is_right) {
  std::optional<std::pair<std::string, std::string>> found;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] != ':') continue;
    std::string a = w.substr(0, i), b = w.substr(i + 1);
    if (is_left(a) && is_right(b)) {
      if (found) throw ParseError(line, col, "ambiguous entry '" + w + "'");
      found.emplace(std::move(a), std::move(b));
    }
  }
  if (!found) {
    if (w.find(':') == std::string::npos)
      throw ParseError(line, col, "expected NAME:VALUE, got '" + w + "'");
    unresolved(line, col, "entry '" + w + "' does not name a declared point and value");
  }
  return *found;
}

}  // namespace detail

inline WorkspaceDocument parse_document(std::string_view text) {
  using namespace detail;
  const auto sections = split_sections(text);
  const RawSection* lat = nullptr;
  const RawSection* imp = nullptr;
  const RawSection* sep = nullptr;
  for (const auto& s : sections) {
    const RawSection** slot = s.kind == "lattice" ? &lat : s.kind == "implication" ? &imp
                              : s.kind == "separator" ? &sep : nullptr;
    if (!slot) continue;
    if (*slot) throw ParseError(s.line, 1, "section [" + s.kind + "] appears twice");
    *slot = &s;
  }
  if (!lat) throw ParseError(1, 1, "missing [lattice] section");

  // Lattice.
  require_keys(*lat, {"elements", "cover"});
  const RawEntry* el = lat->get("elements");
  if (!el) throw ParseError(lat->line, 1, "[lattice] needs 'elements'");
  std::vector<std::string> names;
  for (auto& [w, c] : words(*el)) {
    if (!valid_point_name(w) || w.find(':') != std::string::npos || w.find('<') != std::string::npos)
      throw ParseError(el->line, c, "invalid element name '" + w + "'");
    names.push_back(w);
  }
  std::vector<std::pair<std::string, std::string>> covers;
  if (const RawEntry* cv = lat->get("cover"))
    for (auto& [w, c] : words(*cv)) {
      const auto lt = w.find('<');
      if (lt == std::string::npos || lt == 0 || lt + 1 == w.size())
        throw ParseError(cv->line, c, "expected a covering pair 'a<b', got '" + w + "'");
      const std::string lo = w.substr(0, lt), hi = w.substr(lt + 1);
      if (std::find(names.begin(), names.end(), lo) == names.end())
        unresolved(cv->line, c, "unknown lattice element '" + lo + "'");
      if (std::find(names.begin(), names.end(), hi) == names.end())
        unresolved(cv->line, c + lt + 1, "unknown lattice element '" + hi + "'");
      covers.emplace_back(lo, hi);
    }
  if (names.empty()) throw ValidationError("lattice: no elements declared");
  FiniteLattice L = [&] {
    try {
      return build_lattice(names, covers);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(std::string("lattice: ") + e.what());
    }
  }();
  const std::size_t n = L.size();

  // Implication.
  bool heyting = true;
  ImplicationTable table;
  if (imp) {
    require_keys(*imp, {"heyting"});
    const RawEntry* h = imp->get("heyting");
    bool has_rows = false;
    for (const auto& e : imp->entries) has_rows |= e.key.rfind("row ", 0) == 0;
    if (h) {
      if (h->value != "true") throw ParseError(h->line, h->column, "heyting must be 'true'");
      if (has_rows) throw ParseError(h->line, 1, "give either heyting = true or rows, not both");
    } else {
      heyting = false;
      table.assign(n * n, n);
      for (const auto& e : imp->entries) {
        const std::string rn = e.key.substr(4);
        const Element a = element_word(L, rn, e.line, 1);
        const auto ws = words(e);
        if (ws.size() != n)
          throw ParseError(e.line, e.column,
                           "row " + rn + " needs " + std::to_string(n) + " values");
        for (std::size_t b = 0; b < n; ++b)
          table[a.index() * n + b] = element_word(L, ws[b].first, e.line, ws[b].second).index();
      }
      for (std::size_t a = 0; a < n; ++a)
        if (table[a * n] == n)
          throw ValidationError("implication: no row given for element '" + L.names()[a] + "'");
    }
  }
  ImplicativeStructure S = [&] {
    try {
      if (heyting) return from_heyting(L);
      return validate_structure(L, table);
    } catch (const Error& e) {
      throw ValidationError(std::string("implication: ") + e.what());
    }
  }();
  if (heyting) table = S.implication_table();

  // Separator.
  bool explicit_members = false;
  std::vector<Element> listed;
  if (sep) {
    require_keys(*sep, {"generators", "members"});
    const RawEntry* g = sep->get("generators");
    const RawEntry* m = sep->get("members");
    if (g && m) throw ParseError(m->line, 1, "give either generators or members, not both");
    if (m) explicit_members = true;
    if (const RawEntry* e = g ? g : m)
      for (auto& [w, c] : words(*e)) listed.push_back(element_word(L, w, e->line, c));
  }
  std::sort(listed.begin(), listed.end());
  listed.erase(std::unique(listed.begin(), listed.end()), listed.end());
  Separator sp = [&] {
    try {
      return explicit_members ? validate_separator(S, listed) : generate(S, listed);
    } catch (const Error& e) {
      throw ValidationError(std::string("separator: ") + e.what());
    }
  }();

  WorkspaceDocument doc{L, heyting, table, explicit_members, listed, ImplicativeAlgebra(sp), {}, {}};

  for (const auto& sec : sections) {
    if (sec.kind == "assembly") {
      require_keys(sec, {"points", "exists"});
      if (!valid_object_name(sec.name)) throw ParseError(sec.line, 1, "invalid assembly name '" + sec.name + "'");
      if (doc.find_assembly(sec.name)) throw ParseError(sec.line, 1, "assembly '" + sec.name + "' declared twice");
      std::vector<std::string> pts;
      if (const RawEntry* p = sec.get("points"))
        for (auto& [w, c] : words(*p)) {
          if (!valid_point_name(w)) throw ParseError(p->line, c, "invalid point name '" + w + "'");
          if (std::find(pts.begin(), pts.end(), w) != pts.end())
            throw ParseError(p->line, c, "duplicate point '" + w + "'");
          pts.push_back(w);
        }
      std::vector<std::optional<Element>> ex(pts.size());
      if (const RawEntry* e = sec.get("exists"))
        for (auto& [w, c] : words(*e)) {
          auto [pt, v] = split_pair(
              w, e->line, c,
              [&](const std::string& a) { return std::find(pts.begin(), pts.end(), a) != pts.end(); },
              [&](const std::string& b) { return L.find(b).has_value(); });
          const std::size_t i =
              static_cast<std::size_t>(std::find(pts.begin(), pts.end(), pt) - pts.begin());
          if (ex[i]) throw ParseError(e->line, c, "point '" + pt + "' given twice");
          ex[i] = *L.find(v);
        }
      std::vector<Element> values;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!ex[i])
          throw ValidationError("assembly " + sec.name + ": point '" + pts[i] +
                                "' has no existence value");
        values.push_back(*ex[i]);
      }
      try {
        doc.add_assembly(sec.name, Assembly(doc.algebra, pts, values));
      } catch (const ValidationError& err) {
        throw ValidationError("assembly " + sec.name + ": " + err.what());
      }
    } else if (sec.kind == "morphism") {
      require_keys(sec, {"map"});
      if (!valid_object_name(sec.name)) throw ParseError(sec.line, 1, "invalid morphism name '" + sec.name + "'");
      if (doc.find_morphism(sec.name)) throw ParseError(sec.line, 1, "morphism '" + sec.name + "' declared twice");
      const Assembly* x = doc.find_assembly(sec.source);
      const Assembly* y = doc.find_assembly(sec.target);
      if (!x) unresolved(sec.line, 1, "unknown assembly '" + sec.source + "' (declare it first)");
      if (!y) unresolved(sec.line, 1, "unknown assembly '" + sec.target + "' (declare it first)");
      std::vector<std::optional<std::size_t>> m(x->size());
      if (const RawEntry* e = sec.get("map"))
        for (auto& [w, c] : words(*e)) {
          auto [a, b] = split_pair(
              w, e->line, c, [&](const std::string& s) { return x->find(s).has_value(); },
              [&](const std::string& s) { return y->find(s).has_value(); });
          const std::size_t i = x->at(a);
          if (m[i]) throw ParseError(e->line, c, "point '" + a + "' mapped twice");
          m[i] = y->at(b);
        }
      std::vector<std::size_t> map;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i])
          throw ValidationError("morphism " + sec.name + ": point '" + x->point(i) +
                                "' has no image");
        map.push_back(*m[i]);
      }
      try {
        doc.add_morphism(sec.name, sec.source, sec.target, check_morphism(*x, *y, std::move(map)));
      } catch (const NotTracked& err) {
        throw NotTracked("morphism " + sec.name + ": " + err.what(), err.tracking_value());
      }
    }
  }
  return doc;
}

inline WorkspaceDocument load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document(ss.str());
}

namespace detail {

inline std::string join_words(const std::vector<std::string>& ws) {
  std::string out;
  for (const auto& w : ws) out += " " + w;
  return out;
}

}  // namespace detail

inline std::string assembly_section(const std::string& name, const Assembly& a) {
  std::vector<std::string> ex;
  for (std::size_t i = 0; i < a.size(); ++i)
    ex.push_back(a.point(i) + ":" + a.algebra().name(a.exists(i)));
  return "[assembly " + name + "]\npoints =" + detail::join_words(a.points()) + "\nexists =" +
         detail::join_words(ex) + "\n";
}

inline std::string morphism_section(const NamedMorphism& m) {
  std::vector<std::string> es;
  const Morphism& f = m.morphism;
  for (std::size_t i = 0; i < f.map().size(); ++i)
    es.push_back(f.source().point(i) + ":" + f.target().point(f.map()[i]));
  return "[morphism " + m.name + " : " + m.source + " -> " + m.target + "]\nmap =" +
         detail::join_words(es) + "\n";
}

inline std::string to_text(const WorkspaceDocument& doc) {
  const FiniteLattice& L = doc.lattice;
  const auto& nm = L.names();
  std::string out = "[lattice]\nelements =" + detail::join_words(nm) + "\ncover =";
  for (auto [a, b] : L.covers()) out += " " + nm[a] + "<" + nm[b];
  out += "\n\n[implication]\n";
  if (doc.heyting) {
    out += "heyting = true\n";
  } else {
    const std::size_t n = L.size();
    for (std::size_t a = 0; a < n; ++a) {
      out += "row " + nm[a] + " =";
      for (std::size_t b = 0; b < n; ++b) out += " " + nm[doc.table[a * n + b]];
      out += "\n";
    }
  }
  out += "\n[separator]\n";
  out += doc.explicit_members ? "members =" : "generators =";
  for (Element e : doc.separator_spec) out += " " + L.name(e);
  out += "\n";
  for (const auto& a : doc.assemblies) out += "\n" + assembly_section(a.name, a.assembly);
  for (const auto& m : doc.morphisms) out += "\n" + morphism_section(m);
  return out;
}

inline void save(const WorkspaceDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << to_text(doc);
}

}  // namespace impasm
