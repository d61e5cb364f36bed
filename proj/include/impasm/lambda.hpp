#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "impasm/errors.hpp"
#include "impasm/implicative.hpp"

namespace impasm {

/// Untyped lambda-term whose constants are lattice elements, plus the inert
/// constant cc. Immutable and cheap to copy.
class Term {
 public:
  enum class Kind { variable, abstraction, application, parameter, cc };

  static Term var(std::string name);
  static Term lam(std::string bound, Term body);
  /// Curried abstraction over several binders, outermost first.
  static Term lam(const std::vector<std::string>& bound, Term body);
  static Term app(Term fn, Term arg);
  /// Parameter referenced by element name; resolved at interpretation.
  static Term param(std::string element_name);
  /// Parameter bound to a concrete element.
  static Term param(const FiniteLattice& lattice, Element e);
  static Term cc();

  Kind kind() const noexcept;
  /// Variable name, bound name of an abstraction, or parameter name.
  const std::string& name() const noexcept;
  const Term& body() const;
  const Term& function() const;
  const Term& argument() const;
  const std::optional<Element>& element() const noexcept;
  /// Free variables, sorted.
  const std::vector<std::string>& free_variables() const noexcept;
  bool closed() const noexcept { return free_variables().empty(); }
  std::size_t depth() const noexcept;

  const void* identity() const noexcept { return node_.get(); }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Kind kind = Kind::variable;
  std::string name;
  std::optional<Element> element;
  std::optional<Term> left;
  std::optional<Term> right;
  std::vector<std::string> free;
  std::size_t depth = 1;
};

inline Term::Kind Term::kind() const noexcept { return node_->kind; }
inline const std::string& Term::name() const noexcept { return node_->name; }
inline const Term& Term::body() const { return *node_->left; }
inline const Term& Term::function() const { return *node_->left; }
inline const Term& Term::argument() const { return *node_->right; }
inline const std::optional<Element>& Term::element() const noexcept { return node_->element; }
inline const std::vector<std::string>& Term::free_variables() const noexcept {
  return node_->free;
}
inline std::size_t Term::depth() const noexcept { return node_->depth; }

/// Renders a term in the concrete syntax accepted by parse().
std::string to_string(const Term& t);

/// Term grammar:
///   term    := '\' ident+ '.' term | appterm
///   appterm := atom+
///   atom    := ident | '#' elementname | 'cc' | '(' term ')'
Term parse(std::string_view source);

/// Capture-avoiding substitution t[x := u].
Term substitute(const Term& t, const std::string& x, const Term& u);

/// All one-step beta-reducts, outermost redex first.
std::vector<Term> beta_reducts(const Term& t);

/// Equality up to renaming of bound variables.
bool alpha_equal(const Term& a, const Term& b);

/// \x f. f (f ... (f x))
Term church(std::size_t n);

/// Named tracker terms. Holes are filled positionally with closed terms.
Term macro(const std::string& name, const std::vector<Term>& holes = {});
/// Names of all macros, sorted.
std::vector<std::string> macro_names();
/// Number of holes of a macro.
std::size_t macro_arity(const std::string& name);

using Environment = std::map<std::string, Element>;

/// Evaluates terms in an implicative structure.
///
/// An abstraction is evaluated by enumerating every element for its bound
/// variable, so the cost grows like |A|^(binder nesting). Results of
/// abstraction nodes are memoized on the values of their free variables.
class Interpreter {
 public:
  explicit Interpreter(ImplicativeStructure s) : s_(std::move(s)) {}

  const ImplicativeStructure& structure() const noexcept { return s_; }

  Element operator()(const Term& t, const Environment& env = {});

 private:
  using Frame = std::vector<std::pair<const std::string*, std::size_t>>;
  std::size_t eval(const Term& t, Frame& env);

  struct Key {
    const void* node;
    std::vector<std::size_t> values;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      std::size_t h = std::hash<const void*>{}(k.node);
      for (std::size_t v : k.values) h = h * 1000003u ^ v;
      return h;
    }
  };

  ImplicativeStructure s_;
  std::unordered_map<Key, std::size_t, KeyHash> memo_;
  std::vector<Term> pinned_;  // keeps memoized nodes alive
};

inline Element interpret(const Term& t, const ImplicativeStructure& s, const Environment& env = {}) {
  Interpreter in(s);
  return in(t, env);
}

// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::string> merge_free(const std::vector<std::string>& a,
                                           const std::vector<std::string>& b) {
  std::vector<std::string> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}
inline bool is_param_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '\\' &&
         c != '.';
}

}  // namespace detail

inline Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::variable;
  n->free = {name};
  n->name = std::move(name);
  return Term(std::move(n));
}

inline Term Term::lam(std::string bound, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::abstraction;
  n->free = body.free_variables();
  n->free.erase(std::remove(n->free.begin(), n->free.end(), bound), n->free.end());
  n->depth = body.depth() + 1;
  n->name = std::move(bound);
  n->left = std::move(body);
  return Term(std::move(n));
}

inline Term Term::lam(const std::vector<std::string>& bound, Term body) {
  for (auto it = bound.rbegin(); it != bound.rend(); ++it) body = lam(*it, std::move(body));
  return body;
}

inline Term Term::app(Term fn, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::application;
  n->free = detail::merge_free(fn.free_variables(), arg.free_variables());
  n->depth = std::max(fn.depth(), arg.depth()) + 1;
  n->left = std::move(fn);
  n->right = std::move(arg);
  return Term(std::move(n));
}

inline Term Term::param(std::string element_name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::parameter;
  n->name = std::move(element_name);
  return Term(std::move(n));
}

inline Term Term::param(const FiniteLattice& lattice, Element e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::parameter;
  n->name = lattice.name(e);
  n->element = e;
  return Term(std::move(n));
}

inline Term Term::cc() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::cc;
  return Term(std::move(n));
}

namespace detail {

inline void print(const Term& t, std::string& out, bool fn_position, bool arg_position) {
  switch (t.kind()) {
    case Term::Kind::variable: out += t.name(); return;
    case Term::Kind::parameter: out += "#" + t.name(); return;
    case Term::Kind::cc: out += "cc"; return;
    case Term::Kind::abstraction: {
      const bool paren = fn_position || arg_position;
      if (paren) out += "(";
      out += "\\";
      const Term* cur = &t;
      bool first = true;
      while (cur->kind() == Term::Kind::abstraction) {
        if (!first) out += " ";
        out += cur->name();
        first = false;
        cur = &cur->body();
      }
      out += ". ";
      print(*cur, out, false, false);
      if (paren) out += ")";
      return;
    }
    case Term::Kind::application: {
      if (arg_position) out += "(";
      print(t.function(), out, true, false);
      out += " ";
      print(t.argument(), out, false, true);
      if (arg_position) out += ")";
      return;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Term& t) {
  std::string out;
  detail::print(t, out, false, false);
  return out;
}

namespace detail {

class TermParser {
 public:
  explicit TermParser(std::string_view src) : src_(src) {}

  Term parse_all() {
    Term t = term();
    skip();
    if (pos_ < src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(1, pos_ + 1, msg); }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  std::string ident() {
    skip();
    if (pos_ >= src_.size() || !is_ident_start(src_[pos_])) fail("expected an identifier");
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  Term term() {
    skip();
    if (pos_ < src_.size() && src_[pos_] == '\\') {
      ++pos_;
      std::vector<std::string> binders;
      binders.push_back(ident());
      for (;;) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == '.') {
          ++pos_;
          break;
        }
        if (pos_ >= src_.size() || !is_ident_start(src_[pos_]))
          fail("expected a binder or '.' in abstraction");
        binders.push_back(ident());
      }
      for (const auto& b : binders)
        if (b == "cc") fail("'cc' cannot be bound");
      return Term::lam(binders, term());
    }
    std::optional<Term> acc;
    for (;;) {
      skip();
      if (pos_ >= src_.size() || src_[pos_] == ')') break;
      Term next = [&] {
        if (src_[pos_] == '\\') return term();  // trailing abstraction extends right
        return atom();
      }();
      acc = acc ? Term::app(std::move(*acc), std::move(next)) : std::move(next);
    }
    if (!acc) fail("expected a term");
    return *acc;
  }

  Term atom() {
    skip();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      Term t = term();
      skip();
      if (pos_ >= src_.size() || src_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return t;
    }
    if (c == '#') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < src_.size() && is_param_char(src_[pos_])) ++pos_;
      if (pos_ == start) fail("expected an element name after '#'");
      return Term::param(std::string(src_.substr(start, pos_ - start)));
    }
    if (is_ident_start(c)) {
      std::string id = ident();
      if (id == "cc") return Term::cc();
      return Term::var(std::move(id));
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid1,
                              const std::vector<std::string>& avoid2) {
  auto taken = [&](const std::string& n) {
    return std::binary_search(avoid1.begin(), avoid1.end(), n) ||
           std::binary_search(avoid2.begin(), avoid2.end(), n);
  };
  for (std::size_t i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!taken(candidate)) return candidate;
  }
}

inline void canonical(const Term& t, std::vector<std::string>& bound, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::variable: {
      for (std::size_t i = bound.size(); i-- > 0;)
        if (bound[i] == t.name()) {
          out += "@" + std::to_string(bound.size() - 1 - i) + " ";
          return;
        }
      out += "$" + t.name() + " ";
      return;
    }
    case Term::Kind::parameter: out += "#" + t.name() + " "; return;
    case Term::Kind::cc: out += "cc "; return;
    case Term::Kind::abstraction:
      out += "L(";
      bound.push_back(t.name());
      canonical(t.body(), bound, out);
      bound.pop_back();
      out += ")";
      return;
    case Term::Kind::application:
      out += "A(";
      canonical(t.function(), bound, out);
      canonical(t.argument(), bound, out);
      out += ")";
      return;
  }
}

}  // namespace detail

inline Term parse(std::string_view source) { return detail::TermParser(source).parse_all(); }

inline Term substitute(const Term& t, const std::string& x, const Term& u) {
  const auto& fv = t.free_variables();
  if (!std::binary_search(fv.begin(), fv.end(), x)) return t;
  switch (t.kind()) {
    case Term::Kind::variable: return u;
    case Term::Kind::application:
      return Term::app(substitute(t.function(), x, u), substitute(t.argument(), x, u));
    case Term::Kind::abstraction: {
      const auto& ufv = u.free_variables();
      if (std::binary_search(ufv.begin(), ufv.end(), t.name())) {
        std::string y = detail::fresh_name(t.name(), ufv, t.body().free_variables());
        Term renamed = substitute(t.body(), t.name(), Term::var(y));
        return Term::lam(y, substitute(renamed, x, u));
      }
      return Term::lam(t.name(), substitute(t.body(), x, u));
    }
    default: return t;
  }
}

inline std::vector<Term> beta_reducts(const Term& t) {
  std::vector<Term> out;
  switch (t.kind()) {
    case Term::Kind::application: {
      if (t.function().kind() == Term::Kind::abstraction)
        out.push_back(substitute(t.function().body(), t.function().name(), t.argument()));
      for (Term& r : beta_reducts(t.function())) out.push_back(Term::app(r, t.argument()));
      for (Term& r : beta_reducts(t.argument())) out.push_back(Term::app(t.function(), r));
      break;
    }
    case Term::Kind::abstraction:
      for (Term& r : beta_reducts(t.body())) out.push_back(Term::lam(t.name(), r));
      break;
    default: break;
  }
  return out;
}

inline bool alpha_equal(const Term& a, const Term& b) {
  std::string ca, cb;
  std::vector<std::string> bound;
  detail::canonical(a, bound, ca);
  detail::canonical(b, bound, cb);
  return ca == cb;
}

inline Term church(std::size_t n) {
  Term body = Term::var("x");
  for (std::size_t i = 0; i < n; ++i) body = Term::app(Term::var("f"), std::move(body));
  return Term::lam(std::vector<std::string>{"x", "f"}, std::move(body));
}

namespace detail {

struct MacroDef {
  const char* source;
  std::vector<const char*> holes;
};

inline const std::map<std::string, MacroDef>& macro_table() {
  static const std::map<std::string, MacroDef> table = {
      {"identity", {"\\x. x", {}}},
      {"pi1", {"\\z. z (\\x y. x)", {}}},
      {"pi2", {"\\z. z (\\x y. y)", {}}},
      {"pair", {"\\s. s T U", {"T", "U"}}},
      {"compose", {"\\x. U (V x)", {"U", "V"}}},
      {"pair_tracker", {"\\x z. z (F x) (G x)", {"F", "G"}}},
      {"inl_tracker", {"\\x0 z. z (\\x y. x) x0", {}}},
      {"inr_tracker", {"\\y0 z. z (\\x y. y) y0", {}}},
      {"case_tracker", {"\\z. z (\\u v. u (F v) (G v))", {"F", "G"}}},
      {"quotient_tracker", {"\\x z. z x", {}}},
      {"coeq_mediator", {"\\z. z H", {"H"}}},
      {"nno_zero", {"\\z x f. x", {}}},
      {"nno_succ", {"\\n x f. f (n x f)", {}}},
      {"rec_tracker", {"\\m. m Q F", {"Q", "F"}}},
      {"pi_unit", {"\\s t. t (P s) (\\x z. z x s)", {"P"}}},
      {"pi_transpose",
       {"\\v. (\\z. z (\\x y. y)) (X (v (\\x y. y))) ((\\z. z (\\x y. x)) v)", {"X"}}},
      {"pi_map",
       {"\\w s. s ((\\z. z (\\x y. x)) w) (\\x. U (((\\z. z (\\x y. y)) w) x))", {"U"}}},
  };
  return table;
}

}  // namespace detail

inline Term macro(const std::string& name, const std::vector<Term>& holes) {
  const auto& table = detail::macro_table();
  auto it = table.find(name);
  if (it == table.end()) throw UnknownMacro(name);
  const auto& def = it->second;
  if (holes.size() != def.holes.size())
    throw UnfilledHole("macro '" + name + "' has " + std::to_string(def.holes.size()) +
                       " hole(s), got " + std::to_string(holes.size()) + " filler(s)");
  Term t = parse(def.source);
  for (std::size_t i = 0; i < holes.size(); ++i) {
    if (!holes[i].closed())
      throw UnfilledHole("hole " + std::string(def.holes[i]) + " of macro '" + name +
                         "' must be filled with a closed term");
    t = substitute(t, def.holes[i], holes[i]);
  }
  return t;
}

inline std::vector<std::string> macro_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::macro_table()) out.push_back(k);
  return out;
}

inline std::size_t macro_arity(const std::string& name) {
  auto it = detail::macro_table().find(name);
  if (it == detail::macro_table().end()) throw UnknownMacro(name);
  return it->second.holes.size();
}

inline Element Interpreter::operator()(const Term& t, const Environment& env) {
  Frame frame;
  std::vector<std::string> names;
  names.reserve(env.size());
  for (const auto& [k, v] : env) names.push_back(k);
  std::size_t i = 0;
  for (const auto& [k, v] : env) frame.emplace_back(&names[i++], s_.lattice().check(v));
  return s_.lattice().element(eval(t, frame));
}

inline std::size_t Interpreter::eval(const Term& t, Frame& env) {
  const FiniteLattice& L = s_.lattice();
  switch (t.kind()) {
    case Term::Kind::variable:
      for (std::size_t i = env.size(); i-- > 0;)
        if (*env[i].first == t.name()) return env[i].second;
      throw UnboundVariable(t.name());
    case Term::Kind::parameter:
      if (t.element()) return L.check(*t.element());
      if (auto e = L.find(t.name())) return e->index();
      throw Error("unknown element '#" + t.name() + "'");
    case Term::Kind::cc: return s_.combinator(Combinator::cc).index();
    case Term::Kind::application: {
      const std::size_t f = eval(t.function(), env);
      const std::size_t a = eval(t.argument(), env);
      return s_.app_index(f, a);
    }
    case Term::Kind::abstraction: {
      Key key{t.identity(), {}};
      for (const auto& v : t.free_variables()) {
        bool found = false;
        for (std::size_t i = env.size(); i-- > 0;)
          if (*env[i].first == v) {
            key.values.push_back(env[i].second);
            found = true;
            break;
          }
        if (!found) throw UnboundVariable(v);
      }
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
      std::size_t acc = L.top().index();
      env.emplace_back(&t.name(), 0);
      for (std::size_t a = 0; a < L.size(); ++a) {
        env.back().second = a;
        acc = L.meet_index(acc, s_.imp_index(a, eval(t.body(), env)));
      }
      env.pop_back();
      pinned_.push_back(t);
      memo_.emplace(std::move(key), acc);
      return acc;
    }
  }
  throw InternalError("unreachable term kind");
}

}  // namespace impasm
