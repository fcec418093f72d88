#pragma once

#include <cctype>
#include <memory>

#include "dualis/order.hpp"
#include "dualis/space.hpp"

namespace dualis {

// ---------------------------------------------------------------------------
// Propositional formulas.  ASCII connectives with precedence ~ > & > | > ->
// and right-associative ->.
// ---------------------------------------------------------------------------

struct PropFormula;
using PropPtr = std::shared_ptr<const PropFormula>;

struct PropFormula {
  enum Kind { Var, Top, Bot, Not, And, Or, Imp } kind;
  int var = -1;
  PropPtr a, b;
};

inline PropPtr pvar(int i) { return std::make_shared<PropFormula>(PropFormula{PropFormula::Var, i, nullptr, nullptr}); }
inline PropPtr ptop() { return std::make_shared<PropFormula>(PropFormula{PropFormula::Top, -1, nullptr, nullptr}); }
inline PropPtr pbot() { return std::make_shared<PropFormula>(PropFormula{PropFormula::Bot, -1, nullptr, nullptr}); }
inline PropPtr pnot(PropPtr x) { return std::make_shared<PropFormula>(PropFormula{PropFormula::Not, -1, std::move(x), nullptr}); }
inline PropPtr pand(PropPtr x, PropPtr y) { return std::make_shared<PropFormula>(PropFormula{PropFormula::And, -1, std::move(x), std::move(y)}); }
inline PropPtr por(PropPtr x, PropPtr y) { return std::make_shared<PropFormula>(PropFormula{PropFormula::Or, -1, std::move(x), std::move(y)}); }
inline PropPtr pimp(PropPtr x, PropPtr y) { return std::make_shared<PropFormula>(PropFormula{PropFormula::Imp, -1, std::move(x), std::move(y)}); }

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

struct PropParser {
  std::string_view text;
  std::size_t pos = 0;
  int line = 1, col = 1;
  const std::vector<std::string>* declared;  // may be null: collect on the fly
  std::vector<std::string> vars;

  explicit PropParser(std::string_view t, const std::vector<std::string>* decl)
      : text(t), declared(decl) {
    if (decl) vars = *decl;
  }

  [[noreturn]] void fail(const std::string& msg) { throw syntax_error(msg, line, col); }

  void bump(std::size_t k = 1) {
    for (std::size_t i = 0; i < k && pos < text.size(); ++i, ++pos) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  }
  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) bump();
  }
  bool eat(std::string_view tok) {
    skip_ws();
    if (text.substr(pos, tok.size()) == tok) {
      // keywords must not run into identifier characters
      if (std::isalpha((unsigned char)tok[0])) {
        std::size_t after = pos + tok.size();
        if (after < text.size() && (std::isalnum((unsigned char)text[after]) || text[after] == '_'))
          return false;
      }
      bump(tok.size());
      return true;
    }
    return false;
  }
  std::string ident() {
    skip_ws();
    if (pos >= text.size() || !(std::isalpha((unsigned char)text[pos]) || text[pos] == '_'))
      fail("expected a variable name");
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum((unsigned char)text[pos]) || text[pos] == '_')) bump();
    return std::string(text.substr(start, pos - start));
  }

  PropPtr formula() {
    PropPtr lhs = disjunct();
    if (eat("->")) return pimp(std::move(lhs), formula());  // right-associative
    return lhs;
  }
  PropPtr disjunct() {
    PropPtr lhs = conjunct();
    while (eat("|")) lhs = por(std::move(lhs), conjunct());
    return lhs;
  }
  PropPtr conjunct() {
    PropPtr lhs = unary();
    while (true) {
      skip_ws();
      // do not let '&' swallow nothing, and '-' of '->' is not a connective here
      if (!eat("&")) break;
      lhs = pand(std::move(lhs), unary());
    }
    return lhs;
  }
  PropPtr unary() {
    if (eat("~")) return pnot(unary());
    return atom();
  }
  PropPtr atom() {
    skip_ws();
    if (eat("(")) {
      PropPtr f = formula();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    if (eat("true")) return ptop();
    if (eat("false")) return pbot();
    std::string name = ident();
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == name) return pvar((int)i);
    if (declared) fail("undeclared variable '" + name + "'");
    vars.push_back(name);
    return pvar((int)vars.size() - 1);
  }

  PropPtr run() {
    PropPtr f = formula();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return f;
  }
};

}  // namespace detail

/// Parses against a declared variable list.
inline PropPtr parse_prop(std::string_view text, const std::vector<std::string>& vars) {
  detail::PropParser p(text, &vars);
  return p.run();
}

/// Parses, collecting variables in order of first occurrence.
inline std::pair<PropPtr, std::vector<std::string>> parse_prop_collect(std::string_view text) {
  detail::PropParser p(text, nullptr);
  PropPtr f = p.run();
  return {f, p.vars};
}

/// Minimal-parenthesis printer; parse_prop(print_prop(f)) rebuilds f.
inline std::string print_prop(const PropPtr& f, const std::vector<std::string>& vars,
                              int parent_level = 0) {
  // levels: Imp 1, Or 2, And 3, Not/atoms 4
  auto wrap = [&](int level, std::string s) {
    return level < parent_level ? "(" + s + ")" : s;
  };
  switch (f->kind) {
    case PropFormula::Var: return vars[f->var];
    case PropFormula::Top: return "true";
    case PropFormula::Bot: return "false";
    case PropFormula::Not: return "~" + print_prop(f->a, vars, 4);
    case PropFormula::And:
      return wrap(3, print_prop(f->a, vars, 3) + " & " + print_prop(f->b, vars, 4));
    case PropFormula::Or:
      return wrap(2, print_prop(f->a, vars, 2) + " | " + print_prop(f->b, vars, 3));
    case PropFormula::Imp:
      return wrap(1, print_prop(f->a, vars, 2) + " -> " + print_prop(f->b, vars, 1));
  }
  throw verify_error("unreachable formula kind");
}

// ---------------------------------------------------------------------------
// Semantics
// ---------------------------------------------------------------------------

/// Classical evaluation; valuation bit i gives the i-th variable.
inline bool eval_prop(const PropPtr& f, std::uint32_t valuation) {
  switch (f->kind) {
    case PropFormula::Var: return valuation >> f->var & 1;
    case PropFormula::Top: return true;
    case PropFormula::Bot: return false;
    case PropFormula::Not: return !eval_prop(f->a, valuation);
    case PropFormula::And: return eval_prop(f->a, valuation) && eval_prop(f->b, valuation);
    case PropFormula::Or: return eval_prop(f->a, valuation) || eval_prop(f->b, valuation);
    case PropFormula::Imp: return !eval_prop(f->a, valuation) || eval_prop(f->b, valuation);
  }
  throw verify_error("unreachable formula kind");
}

/// Evaluation in a Heyting algebra under an assignment of variables to elements.
inline int eval_prop_heyting(const PropPtr& f, const HeytingAlgebra& h, const std::vector<int>& val) {
  switch (f->kind) {
    case PropFormula::Var:
      if (f->var >= (int)val.size()) throw invariant_error("valuation misses a variable");
      return val[f->var];
    case PropFormula::Top: return h.top();
    case PropFormula::Bot: return h.bot();
    case PropFormula::Not: return h.impl(eval_prop_heyting(f->a, h, val), h.bot());
    case PropFormula::And: return h.meet(eval_prop_heyting(f->a, h, val), eval_prop_heyting(f->b, h, val));
    case PropFormula::Or: return h.join(eval_prop_heyting(f->a, h, val), eval_prop_heyting(f->b, h, val));
    case PropFormula::Imp: return h.impl(eval_prop_heyting(f->a, h, val), eval_prop_heyting(f->b, h, val));
  }
  throw verify_error("unreachable formula kind");
}

struct HeytingValidity {
  bool valid;
  std::vector<int> witness;  // a refuting assignment when not valid
};

/// True iff the formula evaluates to top under every H-valuation of its variables.
inline HeytingValidity heyting_validity(const PropPtr& f, int nvars, const HeytingAlgebra& h) {
  std::vector<int> val(nvars, 0);
  while (true) {
    if (eval_prop_heyting(f, h, val) != h.top()) return {false, val};
    int i = 0;
    for (; i < nvars; ++i) {
      if (++val[i] < h.size()) break;
      val[i] = 0;
    }
    if (i == nvars) return {true, {}};
  }
}

// ---------------------------------------------------------------------------
// Theories and Lindenbaum-Tarski algebras
// ---------------------------------------------------------------------------

struct PropTheory {
  std::vector<std::string> vars;
  std::vector<PropPtr> axioms;
};

/// All valuations satisfying every axiom, ascending as bit masks.
inline std::vector<std::uint32_t> models_of(const PropTheory& t) {
  if (t.vars.size() > 20) throw budget_error("too many propositional variables");
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < (1u << t.vars.size()); ++v) {
    bool ok = true;
    for (const PropPtr& ax : t.axioms)
      if (!eval_prop(ax, v)) {
        ok = false;
        break;
      }
    if (ok) out.push_back(v);
  }
  return out;
}

/// The Lindenbaum-Tarski algebra of a consistent theory: formula classes are
/// exactly the subsets of the model set (each valuation is pinned down by a
/// conjunction of literals), so element i is the subset of models with mask i.
struct Lindenbaum {
  PropTheory theory;
  std::vector<std::uint32_t> models;
  BooleanAlgebra algebra;

  /// The quotient map: the class of a formula is its satisfying model set.
  int classify(const PropPtr& f) const {
    std::uint32_t m = 0;
    for (std::size_t i = 0; i < models.size(); ++i)
      if (eval_prop(f, models[i])) m |= 1u << i;
    return (int)m;
  }
};

inline Lindenbaum lindenbaum(const PropTheory& t) {
  std::vector<std::uint32_t> models = models_of(t);
  if (models.empty()) throw invariant_error("inconsistent theory: no models, algebra degenerates");
  if (models.size() > 10) throw budget_error("Lindenbaum algebra too large");
  Lindenbaum lt{t, models, powerset_algebra((int)models.size())};
  // each valuation is definable by a conjunction of literals; check realization
  for (std::size_t i = 0; i < models.size(); ++i) {
    PropPtr conj = ptop();
    for (std::size_t v = 0; v < t.vars.size(); ++v) {
      PropPtr lit = (models[i] >> v & 1) ? pvar((int)v) : pnot(pvar((int)v));
      conj = pand(std::move(conj), std::move(lit));
    }
    if (lt.classify(conj) != (1 << i))
      throw verify_error("literal conjunction does not realize its valuation");
  }
  return lt;
}

// ---------------------------------------------------------------------------
// Stone duality
// ---------------------------------------------------------------------------

struct StoneSpec {
  FinTopSpace space;                // discrete; basis holds every b-hat
  std::vector<Bits> ultrafilters;   // point -> ultrafilter as an element set
  std::vector<int> atoms;           // point -> the atom generating it
};

/// Points of Spec(B), computed three independent ways and matched: atoms,
/// ultrafilters among principal filters, and Boolean homomorphisms B -> 2.
/// (In a finite lattice every filter is principal, so the latter two scans
/// are complete.)
inline StoneSpec stone_spec(const BooleanAlgebra& b) {
  const int n = b.size();
  // route 1: atoms
  std::vector<int> atoms = b.atoms();
  std::vector<Bits> by_atoms;
  for (int a : atoms) {
    Bits f(n);
    for (int x = 0; x < n; ++x)
      if (b.leq(a, x)) f.set(x);
    by_atoms.push_back(f);
  }
  // route 2: ultrafilters = proper principal filters containing exactly one of
  // x, ~x for every x
  std::vector<Bits> by_uf;
  for (int g = 0; g < n; ++g) {
    if (g == b.bot()) continue;
    Bits f(n);
    for (int x = 0; x < n; ++x)
      if (b.leq(g, x)) f.set(x);
    bool ok = true;
    for (int x = 0; x < n && ok; ++x)
      if (f.test(x) == f.test(b.complement(x))) ok = false;
    if (ok) by_uf.push_back(f);
  }
  // route 3: Boolean homomorphisms B -> 2, scanned as x |-> [g <= x]
  std::vector<Bits> by_homs;
  for (int g = 0; g < n; ++g) {
    bool hom = b.leq(g, b.top()) && !b.leq(g, b.bot());
    for (int x = 0; x < n && hom; ++x) {
      const bool hx = b.leq(g, x);
      if ((b.leq(g, b.complement(x))) == hx) hom = false;
      for (int y = 0; y < n && hom; ++y) {
        const bool hy = b.leq(g, y);
        if (b.leq(g, b.meet(x, y)) != (hx && hy)) hom = false;
        if (b.leq(g, b.join(x, y)) != (hx || hy)) hom = false;
      }
    }
    if (hom) {
      Bits f(n);
      for (int x = 0; x < n; ++x)
        if (b.leq(g, x)) f.set(x);
      bool fresh = true;
      for (const Bits& seen : by_homs)
        if (seen == f) fresh = false;
      if (fresh) by_homs.push_back(f);
    }
  }
  auto sorted = [](std::vector<Bits> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(by_atoms) != sorted(by_uf) || sorted(by_atoms) != sorted(by_homs))
    throw verify_error("atom/ultrafilter/homomorphism point enumerations disagree");
  const int np = (int)by_atoms.size();
  if (np > 62) throw budget_error("Stone space too large");
  std::vector<std::pair<std::string, PointMask>> basics;
  for (int x = 0; x < n; ++x) {
    PointMask m = 0;
    for (int p = 0; p < np; ++p)
      if (by_atoms[p].test(x)) m |= PointMask{1} << p;
    basics.emplace_back("b_" + std::to_string(x), m);
  }
  return StoneSpec{FinTopSpace(np, basics), std::move(by_atoms), std::move(atoms)};
}

struct ClopAlgebra {
  BooleanAlgebra algebra;
  std::vector<PointMask> clopens;  // element -> point set, ascending
};

/// The algebra of clopen subsets of a finite space.
inline ClopAlgebra clop(const FinTopSpace& x) {
  std::vector<PointMask> opens = x.opens();
  auto is_open = [&](PointMask m) {
    return std::binary_search(opens.begin(), opens.end(), m);
  };
  const PointMask all = x.points() == 0 ? 0 : ((PointMask{1} << x.points()) - 1);
  std::vector<PointMask> clopens;
  for (PointMask o : opens)
    if (is_open(all & ~o)) clopens.push_back(o);
  std::sort(clopens.begin(), clopens.end());
  const int m = (int)clopens.size();
  auto idx = [&](PointMask s) {
    return (int)(std::lower_bound(clopens.begin(), clopens.end(), s) - clopens.begin());
  };
  BinTable meet = BinTable::filled(m), join = BinTable::filled(m), impl = BinTable::filled(m);
  for (int a = 0; a < m; ++a)
    for (int b2 = 0; b2 < m; ++b2) {
      meet.at(a, b2) = idx(clopens[a] & clopens[b2]);
      join.at(a, b2) = idx(clopens[a] | clopens[b2]);
      impl.at(a, b2) = idx((~clopens[a] & all) | clopens[b2]);
    }
  return ClopAlgebra{
      BooleanAlgebra(HeytingAlgebra(DistLattice(std::move(meet), std::move(join)), std::move(impl))),
      std::move(clopens)};
}

struct StoneRoundTrip {
  StoneSpec spec;
  ClopAlgebra clopens;
  std::vector<int> iso;       // b -> clopen index of b-hat
  bool iso_hom = false;
  bool iso_bijective = false;
  std::vector<int> embedding; // b -> element of the powerset algebra of points
  bool embedding_hom = false;
  bool embedding_injective = false;
  bool ok() const { return iso_hom && iso_bijective && embedding_hom && embedding_injective; }
};

/// B is recovered from its spectrum as the clopen algebra, via b |-> b-hat;
/// the same map into the full powerset algebra is the Stone embedding.
inline StoneRoundTrip stone_round_trip(const BooleanAlgebra& b) {
  StoneSpec spec = stone_spec(b);
  ClopAlgebra cl = clop(spec.space);
  const int n = b.size(), np = spec.space.points();
  std::vector<int> iso(n), emb(n);
  std::vector<PointMask> hat(n);
  for (int x = 0; x < n; ++x) {
    PointMask m = 0;
    for (int p = 0; p < np; ++p)
      if (spec.ultrafilters[p].test(x)) m |= PointMask{1} << p;
    hat[x] = m;
    auto it = std::lower_bound(cl.clopens.begin(), cl.clopens.end(), m);
    if (it == cl.clopens.end() || *it != m)
      throw verify_error("b-hat is not clopen in the spectrum");
    iso[x] = (int)(it - cl.clopens.begin());
    emb[x] = (int)m;
  }
  StoneRoundTrip out{std::move(spec), std::move(cl), std::move(iso), false, false,
                     std::move(emb), false, false};
  out.iso_hom = is_heyting_hom(b, out.clopens.algebra, out.iso);
  std::vector<char> hit(out.clopens.algebra.size(), 0);
  for (int v : out.iso) hit[v] = 1;
  out.iso_bijective = (int)out.iso.size() == out.clopens.algebra.size() &&
                      std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  BooleanAlgebra pw = powerset_algebra(np);
  out.embedding_hom = is_heyting_hom(b, pw, out.embedding);
  out.embedding_injective = true;
  for (int x = 0; x < n && out.embedding_injective; ++x)
    for (int y = x + 1; y < n; ++y)
      if (out.embedding[x] == out.embedding[y]) {
        out.embedding_injective = false;
        break;
      }
  if (!out.ok()) throw verify_error("Stone round trip failed");
  return out;
}

/// The contravariant action of a Boolean homomorphism on points: each point of
/// Spec(B') pulls back to a point of Spec(B).  Returns the point map, and
/// verifies h(b)-hat is the preimage of b-hat.
inline std::vector<int> spec_map(const BooleanAlgebra& b, const BooleanAlgebra& b2,
                                 const std::vector<int>& hom, const StoneSpec& sb,
                                 const StoneSpec& sb2) {
  if (!is_heyting_hom(b, b2, hom)) throw invariant_error("not a Boolean homomorphism");
  std::vector<int> pm(sb2.space.points(), -1);
  for (int p = 0; p < sb2.space.points(); ++p) {
    Bits pre(b.size());
    for (int x = 0; x < b.size(); ++x)
      if (sb2.ultrafilters[p].test(hom[x])) pre.set(x);
    for (std::size_t q = 0; q < sb.ultrafilters.size(); ++q)
      if (sb.ultrafilters[q] == pre) pm[p] = (int)q;
    if (pm[p] < 0) throw verify_error("preimage of an ultrafilter is not an ultrafilter");
  }
  for (int x = 0; x < b.size(); ++x)
    for (int p = 0; p < sb2.space.points(); ++p)
      if (sb2.ultrafilters[p].test(hom[x]) != sb.ultrafilters[pm[p]].test(x))
        throw verify_error("duality naturality fails");
  return pm;
}

}  // namespace dualis
