#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <numeric>
#include <set>

#include "dualis/util.hpp"

namespace dualis {

// ---------------------------------------------------------------------------
// Signatures, terms, formulas (single-sorted)
// ---------------------------------------------------------------------------

struct Signature {
  struct Sym {
    std::string name;
    int arity;
  };
  std::vector<Sym> rels;
  std::vector<Sym> funs;
  std::vector<std::string> consts;

  int rel_index(const std::string& n) const {
    for (std::size_t i = 0; i < rels.size(); ++i)
      if (rels[i].name == n) return (int)i;
    return -1;
  }
  int fun_index(const std::string& n) const {
    for (std::size_t i = 0; i < funs.size(); ++i)
      if (funs[i].name == n) return (int)i;
    return -1;
  }
  int const_index(const std::string& n) const {
    for (std::size_t i = 0; i < consts.size(); ++i)
      if (consts[i] == n) return (int)i;
    return -1;
  }
  void check_distinct() const {
    std::set<std::string> seen;
    for (const Sym& s : rels)
      if (!seen.insert(s.name).second) throw invariant_error("duplicate symbol " + s.name);
    for (const Sym& s : funs)
      if (!seen.insert(s.name).second) throw invariant_error("duplicate symbol " + s.name);
    for (const std::string& c : consts)
      if (!seen.insert(c).second) throw invariant_error("duplicate symbol " + c);
  }
};

struct Term {
  enum Kind { Var, Const, Fun, Param } kind = Var;
  int idx = -1;       // const/fun index, or the carrier element for Param
  std::string var;    // variable name when kind == Var
  std::vector<Term> args;
};

struct FOFormula;
using FOPtr = std::shared_ptr<const FOFormula>;

struct FOFormula {
  enum Kind { Top, Bot, Eq, Rel, And, Or, Not, Imp, Exists, Forall } kind;
  int sym = -1;             // relation index for Rel
  std::vector<Term> terms;  // Eq: two terms; Rel: the arguments
  std::string qvar;         // bound variable for quantifiers
  FOPtr a, b;
};

inline FOPtr fo_top() { return std::make_shared<FOFormula>(FOFormula{FOFormula::Top, -1, {}, "", nullptr, nullptr}); }
inline FOPtr fo_bot() { return std::make_shared<FOFormula>(FOFormula{FOFormula::Bot, -1, {}, "", nullptr, nullptr}); }
inline FOPtr fo_eq(Term l, Term r) {
  return std::make_shared<FOFormula>(FOFormula{FOFormula::Eq, -1, {std::move(l), std::move(r)}, "", nullptr, nullptr});
}
inline FOPtr fo_rel(int r, std::vector<Term> args) {
  return std::make_shared<FOFormula>(FOFormula{FOFormula::Rel, r, std::move(args), "", nullptr, nullptr});
}
inline FOPtr fo_and(FOPtr x, FOPtr y) { return std::make_shared<FOFormula>(FOFormula{FOFormula::And, -1, {}, "", std::move(x), std::move(y)}); }
inline FOPtr fo_or(FOPtr x, FOPtr y) { return std::make_shared<FOFormula>(FOFormula{FOFormula::Or, -1, {}, "", std::move(x), std::move(y)}); }
inline FOPtr fo_not(FOPtr x) { return std::make_shared<FOFormula>(FOFormula{FOFormula::Not, -1, {}, "", std::move(x), nullptr}); }
inline FOPtr fo_imp(FOPtr x, FOPtr y) { return std::make_shared<FOFormula>(FOFormula{FOFormula::Imp, -1, {}, "", std::move(x), std::move(y)}); }
inline FOPtr fo_exists(std::string v, FOPtr x) { return std::make_shared<FOFormula>(FOFormula{FOFormula::Exists, -1, {}, std::move(v), std::move(x), nullptr}); }
inline FOPtr fo_forall(std::string v, FOPtr x) { return std::make_shared<FOFormula>(FOFormula{FOFormula::Forall, -1, {}, std::move(v), std::move(x), nullptr}); }

inline void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Var) out.insert(t.var);
  for (const Term& a : t.args) term_vars(a, out);
}

inline void free_vars(const FOPtr& f, std::set<std::string>& out) {
  switch (f->kind) {
    case FOFormula::Top:
    case FOFormula::Bot: return;
    case FOFormula::Eq:
    case FOFormula::Rel:
      for (const Term& t : f->terms) term_vars(t, out);
      return;
    case FOFormula::And:
    case FOFormula::Or:
    case FOFormula::Imp:
      free_vars(f->a, out);
      free_vars(f->b, out);
      return;
    case FOFormula::Not: free_vars(f->a, out); return;
    case FOFormula::Exists:
    case FOFormula::Forall: {
      std::set<std::string> inner;
      free_vars(f->a, inner);
      inner.erase(f->qvar);
      out.insert(inner.begin(), inner.end());
      return;
    }
  }
}

inline std::vector<std::string> free_vars(const FOPtr& f) {
  std::set<std::string> s;
  free_vars(f, s);
  return std::vector<std::string>(s.begin(), s.end());
}

/// Coherent fragment: =, relations, top, bot, and, or, exists.
inline bool is_coherent(const FOPtr& f) {
  switch (f->kind) {
    case FOFormula::Top:
    case FOFormula::Bot:
    case FOFormula::Eq:
    case FOFormula::Rel: return true;
    case FOFormula::And:
    case FOFormula::Or: return is_coherent(f->a) && is_coherent(f->b);
    case FOFormula::Exists: return is_coherent(f->a);
    case FOFormula::Not:
    case FOFormula::Imp:
    case FOFormula::Forall: return false;
  }
  return false;
}

inline std::string print_term(const Term& t, const Signature& sig) {
  switch (t.kind) {
    case Term::Var: return t.var;
    case Term::Const: return sig.consts[t.idx];
    case Term::Param: return "#" + std::to_string(t.idx);
    case Term::Fun: {
      std::vector<std::string> parts;
      for (const Term& a : t.args) parts.push_back(print_term(a, sig));
      return sig.funs[t.idx].name + "(" + join(parts, ",") + ")";
    }
  }
  return "?";
}

inline std::string print_fo(const FOPtr& f, const Signature& sig) {
  switch (f->kind) {
    case FOFormula::Top: return "true";
    case FOFormula::Bot: return "false";
    case FOFormula::Eq: return print_term(f->terms[0], sig) + " = " + print_term(f->terms[1], sig);
    case FOFormula::Rel: {
      std::vector<std::string> parts;
      for (const Term& t : f->terms) parts.push_back(print_term(t, sig));
      return parts.empty() ? sig.rels[f->sym].name
                           : sig.rels[f->sym].name + "(" + join(parts, ",") + ")";
    }
    case FOFormula::And: return "(" + print_fo(f->a, sig) + " & " + print_fo(f->b, sig) + ")";
    case FOFormula::Or: return "(" + print_fo(f->a, sig) + " | " + print_fo(f->b, sig) + ")";
    case FOFormula::Not: return "~" + print_fo(f->a, sig);
    case FOFormula::Imp: return "(" + print_fo(f->a, sig) + " -> " + print_fo(f->b, sig) + ")";
    case FOFormula::Exists: return "(exists " + f->qvar + ". " + print_fo(f->a, sig) + ")";
    case FOFormula::Forall: return "(forall " + f->qvar + ". " + print_fo(f->a, sig) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace detail {

struct FOParser {
  std::string_view text;
  const Signature& sig;
  std::size_t pos = 0;
  int line = 1, col = 1;

  FOParser(std::string_view t, const Signature& s) : text(t), sig(s) {}

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
  bool peek(std::string_view tok) {
    skip_ws();
    return text.substr(pos, tok.size()) == tok;
  }
  std::string ident() {
    skip_ws();
    if (pos >= text.size() || !(std::isalpha((unsigned char)text[pos]) || text[pos] == '_'))
      fail("expected an identifier");
    std::size_t start = pos;
    while (pos < text.size() && (std::isalnum((unsigned char)text[pos]) || text[pos] == '_')) bump();
    return std::string(text.substr(start, pos - start));
  }

  FOPtr formula() {
    if (eat("exists")) {
      std::string v = ident();
      if (!eat(".")) fail("expected '.' after the bound variable");
      return fo_exists(std::move(v), formula());
    }
    if (eat("forall")) {
      std::string v = ident();
      if (!eat(".")) fail("expected '.' after the bound variable");
      return fo_forall(std::move(v), formula());
    }
    FOPtr lhs = disjunct();
    if (eat("->")) return fo_imp(std::move(lhs), formula());
    return lhs;
  }
  FOPtr disjunct() {
    FOPtr lhs = conjunct();
    while (eat("|")) lhs = fo_or(std::move(lhs), conjunct());
    return lhs;
  }
  FOPtr conjunct() {
    FOPtr lhs = unary();
    while (eat("&")) lhs = fo_and(std::move(lhs), unary());
    return lhs;
  }
  FOPtr unary() {
    if (eat("~")) return fo_not(unary());
    if (peek("exists") || peek("forall")) return formula();
    return atom();
  }
  Term term() {
    std::string name = ident();
    int fi = sig.fun_index(name);
    if (fi >= 0) {
      if (!eat("(")) fail("function " + name + " needs arguments");
      std::vector<Term> args;
      if (!eat(")")) {
        do args.push_back(term());
        while (eat(","));
        if (!eat(")")) fail("expected ')'");
      }
      if ((int)args.size() != sig.funs[fi].arity)
        fail("arity mismatch: function " + name + " expects " +
             std::to_string(sig.funs[fi].arity) + " arguments");
      return Term{Term::Fun, fi, "", std::move(args)};
    }
    int ci = sig.const_index(name);
    if (ci >= 0) return Term{Term::Const, ci, "", {}};
    return Term{Term::Var, -1, name, {}};
  }
  FOPtr atom() {
    skip_ws();
    if (eat("(")) {
      FOPtr f = formula();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    if (eat("true")) return fo_top();
    if (eat("false")) return fo_bot();
    // relation atom or equality
    std::size_t save_pos = pos;
    int save_line = line, save_col = col;
    std::string name = ident();
    int ri = sig.rel_index(name);
    if (ri >= 0) {
      std::vector<Term> args;
      if (eat("(")) {
        if (!eat(")")) {
          do args.push_back(term());
          while (eat(","));
          if (!eat(")")) fail("expected ')'");
        }
      }
      if ((int)args.size() != sig.rels[ri].arity)
        fail("arity mismatch: relation " + name + " expects " +
             std::to_string(sig.rels[ri].arity) + " arguments");
      return fo_rel(ri, std::move(args));
    }
    pos = save_pos;
    line = save_line;
    col = save_col;
    Term l = term();
    if (!eat("=")) fail("expected '=' after a term");
    Term r = term();
    return fo_eq(std::move(l), std::move(r));
  }

  FOPtr run() {
    FOPtr f = formula();
    skip_ws();
    if (pos != text.size()) fail("unexpected trailing input");
    return f;
  }
};

}  // namespace detail

inline FOPtr parse_fo(std::string_view text, const Signature& sig) {
  detail::FOParser p(text, sig);
  return p.run();
}

struct FOTheory {
  Signature sig;
  std::vector<FOPtr> axioms;
  bool coherent() const {
    for (const FOPtr& a : axioms)
      if (!is_coherent(a)) return false;
    return true;
  }
};

// ---------------------------------------------------------------------------
// Finite models and satisfaction
// ---------------------------------------------------------------------------

struct FinModel {
  int n = 0;
  std::vector<Bits> rels;              // per relation: mask over n^arity tuples
  std::vector<std::vector<int>> funs;  // per function: table over n^arity
  std::vector<int> consts;
};

inline int tuple_code(const std::vector<int>& t, int n) {
  int code = 0, mult = 1;
  for (int v : t) {
    code += v * mult;
    mult *= n;
  }
  return code;
}

inline int pow_int(int n, int k) {
  int r = 1;
  while (k-- > 0) r *= n;
  return r;
}

using Env = std::vector<std::pair<std::string, int>>;

inline int eval_term(const FinModel& m, const Signature& sig, const Term& t, const Env& env) {
  switch (t.kind) {
    case Term::Var:
      for (auto it = env.rbegin(); it != env.rend(); ++it)
        if (it->first == t.var) return it->second;
      throw invariant_error("unbound variable " + t.var);
    case Term::Const: return m.consts[t.idx];
    case Term::Param: return t.idx;
    case Term::Fun: {
      std::vector<int> args;
      for (const Term& a : t.args) args.push_back(eval_term(m, sig, a, env));
      return m.funs[t.idx][tuple_code(args, m.n)];
    }
  }
  throw verify_error("unreachable term kind");
}

/// Tarski semantics by structural recursion; quantifiers range over the carrier.
inline bool satisfies(const FinModel& m, const Signature& sig, const FOPtr& f, Env& env) {
  switch (f->kind) {
    case FOFormula::Top: return true;
    case FOFormula::Bot: return false;
    case FOFormula::Eq:
      return eval_term(m, sig, f->terms[0], env) == eval_term(m, sig, f->terms[1], env);
    case FOFormula::Rel: {
      std::vector<int> args;
      for (const Term& t : f->terms) args.push_back(eval_term(m, sig, t, env));
      return m.rels[f->sym].test(tuple_code(args, m.n));
    }
    case FOFormula::And: return satisfies(m, sig, f->a, env) && satisfies(m, sig, f->b, env);
    case FOFormula::Or: return satisfies(m, sig, f->a, env) || satisfies(m, sig, f->b, env);
    case FOFormula::Not: return !satisfies(m, sig, f->a, env);
    case FOFormula::Imp: return !satisfies(m, sig, f->a, env) || satisfies(m, sig, f->b, env);
    case FOFormula::Exists: {
      for (int v = 0; v < m.n; ++v) {
        env.emplace_back(f->qvar, v);
        bool ok = satisfies(m, sig, f->a, env);
        env.pop_back();
        if (ok) return true;
      }
      return false;
    }
    case FOFormula::Forall: {
      for (int v = 0; v < m.n; ++v) {
        env.emplace_back(f->qvar, v);
        bool ok = satisfies(m, sig, f->a, env);
        env.pop_back();
        if (!ok) return false;
      }
      return true;
    }
  }
  throw verify_error("unreachable formula kind");
}

inline bool satisfies(const FinModel& m, const Signature& sig, const FOPtr& f,
                      const Env& env = {}) {
  Env e = env;
  return satisfies(m, sig, f, e);
}

// ---------------------------------------------------------------------------
// Model enumeration and isomorphisms
// ---------------------------------------------------------------------------

inline std::vector<std::vector<int>> isomorphisms(const Signature& sig, const FinModel& a,
                                                  const FinModel& b) {
  std::vector<std::vector<int>> out;
  if (a.n != b.n) return out;
  if (a.n > 8) throw budget_error("isomorphism search limited to carriers of size 8");
  std::vector<int> perm(a.n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t r = 0; r < sig.rels.size() && ok; ++r) {
      const int k = sig.rels[r].arity, total = pow_int(a.n, k);
      for (int t = 0; t < total && ok; ++t) {
        int img = 0, mult = 1, rest = t;
        for (int i = 0; i < k; ++i) {
          img += perm[rest % a.n] * mult;
          rest /= a.n;
          mult *= a.n;
        }
        if (a.rels[r].test(t) != b.rels[r].test(img)) ok = false;
      }
    }
    for (std::size_t fn = 0; fn < sig.funs.size() && ok; ++fn) {
      const int k = sig.funs[fn].arity, total = pow_int(a.n, k);
      for (int t = 0; t < total && ok; ++t) {
        int img = 0, mult = 1, rest = t;
        for (int i = 0; i < k; ++i) {
          img += perm[rest % a.n] * mult;
          rest /= a.n;
          mult *= a.n;
        }
        if (perm[a.funs[fn][t]] != b.funs[fn][img]) ok = false;
      }
    }
    for (std::size_t c = 0; c < sig.consts.size() && ok; ++c)
      if (perm[a.consts[c]] != b.consts[c]) ok = false;
    if (ok) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

struct ModelList {
  std::vector<FinModel> models;
  std::vector<int> iso_rep;  // index of the representative of the iso class
  std::vector<char> is_rep;
};

/// All models of T with carrier size <= n_max, by exhausting interpretation
/// tables.  Throws budget_error (never truncates silently) when the raw count
/// of interpretations exceeds the budget.
inline ModelList enumerate_models(const FOTheory& t, int n_max,
                                  std::uint64_t budget = search_budget()) {
  if (n_max < 1) throw invariant_error("n_max must be at least 1");
  ModelList out;
  for (int n = 1; n <= n_max; ++n) {
    double count = 1;
    for (const auto& r : t.sig.rels) count *= std::pow(2.0, pow_int(n, r.arity));
    for (const auto& f : t.sig.funs) count *= std::pow((double)n, pow_int(n, f.arity));
    count *= std::pow((double)n, (double)t.sig.consts.size());
    if (count > (double)budget)
      throw budget_error("search-budget-exceeded: " + std::to_string((long long)count) +
                         " interpretations at carrier size " + std::to_string(n));
    // odometer over all interpretation tables
    std::vector<std::uint64_t> rel_masks(t.sig.rels.size(), 0);
    std::vector<std::vector<int>> fun_tabs;
    for (const auto& f : t.sig.funs) fun_tabs.emplace_back(pow_int(n, f.arity), 0);
    std::vector<int> con_vals(t.sig.consts.size(), 0);
    while (true) {
      FinModel m;
      m.n = n;
      for (std::size_t r = 0; r < t.sig.rels.size(); ++r) {
        const int total = pow_int(n, t.sig.rels[r].arity);
        Bits bits(total);
        for (int i = 0; i < total; ++i)
          if (rel_masks[r] >> i & 1) bits.set(i);
        m.rels.push_back(std::move(bits));
      }
      m.funs = fun_tabs;
      m.consts = con_vals;
      bool sat = true;
      for (const FOPtr& ax : t.axioms)
        if (!satisfies(m, t.sig, ax)) {
          sat = false;
          break;
        }
      if (sat) out.models.push_back(std::move(m));
      // advance
      bool carried = false;
      for (std::size_t r = 0; r < rel_masks.size() && !carried; ++r) {
        const int total = pow_int(n, t.sig.rels[r].arity);
        if (total > 62) throw budget_error("relation table too large to enumerate");
        if (++rel_masks[r] < (std::uint64_t{1} << total)) carried = true;
        else rel_masks[r] = 0;
      }
      for (std::size_t f = 0; f < fun_tabs.size() && !carried; ++f)
        for (std::size_t i = 0; i < fun_tabs[f].size() && !carried; ++i) {
          if (++fun_tabs[f][i] < n) carried = true;
          else fun_tabs[f][i] = 0;
        }
      for (std::size_t c = 0; c < con_vals.size() && !carried; ++c) {
        if (++con_vals[c] < n) carried = true;
        else con_vals[c] = 0;
      }
      if (!carried) break;
    }
  }
  out.iso_rep.assign(out.models.size(), -1);
  out.is_rep.assign(out.models.size(), 0);
  for (std::size_t i = 0; i < out.models.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (!out.is_rep[j]) continue;
      if (!isomorphisms(t.sig, out.models[i], out.models[j]).empty()) {
        out.iso_rep[i] = (int)j;
        break;
      }
    }
    if (out.iso_rep[i] < 0) {
      out.iso_rep[i] = (int)i;
      out.is_rep[i] = 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The groupoid spectrum: labelled models and label-compatible isomorphisms.
// A morphism (M,a) -> (N,b) is a model isomorphism i with b = i o a (same
// defined labels, transported values); this is the convention that makes the
// basic opens stable under morphisms.  Pass strict_labels=false to drop the
// equal-domain requirement and only demand agreement on commonly defined
// labels.
// ---------------------------------------------------------------------------

struct ModelGroupoid {
  FOTheory theory;
  std::vector<std::string> labels;
  std::vector<FinModel> models;

  struct Obj {
    int model;
    std::vector<int> label;  // per label: carrier element or -1 (undefined)
  };
  struct Mor {
    int src, dst;
    std::vector<int> bij;
  };
  std::vector<Obj> objects;
  std::vector<Mor> morphisms;

  int object_index(int model, const std::vector<int>& label) const {
    for (std::size_t i = 0; i < objects.size(); ++i)
      if (objects[i].model == model && objects[i].label == label) return (int)i;
    return -1;
  }
};

inline ModelGroupoid groupoid(const FOTheory& t, int n_max, const std::vector<std::string>& labels,
                              bool strict_labels = true, std::uint64_t budget = search_budget()) {
  ModelGroupoid g;
  g.theory = t;
  g.labels = labels;
  g.models = enumerate_models(t, n_max, budget).models;
  for (std::size_t mi = 0; mi < g.models.size(); ++mi) {
    const int n = g.models[mi].n;
    std::vector<int> lab(labels.size(), -1);
    while (true) {
      g.objects.push_back({(int)mi, lab});
      if (g.objects.size() > budget) throw budget_error("too many labelled models");
      std::size_t k = 0;
      for (; k < lab.size(); ++k) {
        if (++lab[k] < n) break;
        lab[k] = -1;
      }
      if (k == lab.size()) break;
    }
  }
  for (std::size_t mi = 0; mi < g.models.size(); ++mi)
    for (std::size_t mj = 0; mj < g.models.size(); ++mj) {
      for (const auto& bij : isomorphisms(t.sig, g.models[mi], g.models[mj])) {
        for (std::size_t oi = 0; oi < g.objects.size(); ++oi) {
          if (g.objects[oi].model != (int)mi) continue;
          if (strict_labels) {
            std::vector<int> target(labels.size(), -1);
            for (std::size_t k = 0; k < labels.size(); ++k)
              if (g.objects[oi].label[k] >= 0) target[k] = bij[g.objects[oi].label[k]];
            int oj = g.object_index((int)mj, target);
            if (oj < 0) throw verify_error("transported labelling missing");
            g.morphisms.push_back({(int)oi, oj, bij});
          } else {
            for (std::size_t oj = 0; oj < g.objects.size(); ++oj) {
              if (g.objects[oj].model != (int)mj) continue;
              bool compat = true;
              for (std::size_t k = 0; k < labels.size() && compat; ++k)
                if (g.objects[oi].label[k] >= 0 && g.objects[oj].label[k] >= 0 &&
                    bij[g.objects[oi].label[k]] != g.objects[oj].label[k])
                  compat = false;
              if (compat) g.morphisms.push_back({(int)oi, (int)oj, bij});
            }
          }
          if (g.morphisms.size() > budget) throw budget_error("too many groupoid morphisms");
        }
      }
    }
  return g;
}

/// Groupoid laws: identities present, closed under inverse and composition.
inline bool groupoid_laws_hold(const ModelGroupoid& g) {
  auto has = [&](int src, int dst, const std::vector<int>& bij) {
    for (const auto& m : g.morphisms)
      if (m.src == src && m.dst == dst && m.bij == bij) return true;
    return false;
  };
  for (std::size_t o = 0; o < g.objects.size(); ++o) {
    std::vector<int> id(g.models[g.objects[o].model].n);
    std::iota(id.begin(), id.end(), 0);
    if (!has((int)o, (int)o, id)) return false;
  }
  for (const auto& m : g.morphisms) {
    std::vector<int> inv(m.bij.size());
    for (std::size_t i = 0; i < m.bij.size(); ++i) inv[m.bij[i]] = (int)i;
    if (!has(m.dst, m.src, inv)) return false;
  }
  for (const auto& m1 : g.morphisms)
    for (const auto& m2 : g.morphisms) {
      if (m1.dst != m2.src) continue;
      std::vector<int> comp(m1.bij.size());
      for (std::size_t i = 0; i < m1.bij.size(); ++i) comp[i] = m2.bij[m1.bij[i]];
      if (!has(m1.src, m2.dst, comp)) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Basic opens V_{phi(x)} relative to a declared context of labels.
// ---------------------------------------------------------------------------

inline Bits basic_open(const ModelGroupoid& g, const FOPtr& phi,
                       const std::vector<std::string>& context) {
  for (const std::string& v : free_vars(phi))
    if (std::find(context.begin(), context.end(), v) == context.end())
      throw invariant_error("context-mismatch: free variable " + v + " not in the context");
  for (const std::string& v : context)
    if (std::find(g.labels.begin(), g.labels.end(), v) == g.labels.end())
      throw invariant_error("context-mismatch: " + v + " is not a groupoid label");
  Bits out((int)g.objects.size());
  for (std::size_t o = 0; o < g.objects.size(); ++o) {
    const auto& obj = g.objects[o];
    Env env;
    bool defined = true;
    for (const std::string& v : context) {
      const int k = (int)(std::find(g.labels.begin(), g.labels.end(), v) - g.labels.begin());
      if (obj.label[k] < 0) {
        defined = false;
        break;
      }
      env.emplace_back(v, obj.label[k]);
    }
    if (!defined) continue;
    if (satisfies(g.models[obj.model], g.theory.sig, phi, env)) out.set((int)o);
  }
  return out;
}

struct BasicOpenAlgebraReport {
  bool meets_ok, joins_ok, top_ok, bot_ok;
  bool ok() const { return meets_ok && joins_ok && top_ok && bot_ok; }
};

/// V_{phi&psi} = V_phi n V_psi, V_{phi|psi} = V_phi u V_psi, V_true = all
/// objects defined on the context, V_false = empty.
inline BasicOpenAlgebraReport basic_open_algebra_check(const ModelGroupoid& g, const FOPtr& phi,
                                                       const FOPtr& psi,
                                                       const std::vector<std::string>& context) {
  Bits vphi = basic_open(g, phi, context);
  Bits vpsi = basic_open(g, psi, context);
  Bits vand = basic_open(g, fo_and(phi, psi), context);
  Bits vor = basic_open(g, fo_or(phi, psi), context);
  Bits vtop = basic_open(g, fo_top(), context);
  Bits vbot = basic_open(g, fo_bot(), context);
  Bits all((int)g.objects.size());
  for (std::size_t o = 0; o < g.objects.size(); ++o) {
    bool defined = true;
    for (const std::string& v : context) {
      const int k = (int)(std::find(g.labels.begin(), g.labels.end(), v) - g.labels.begin());
      if (g.objects[o].label[k] < 0) defined = false;
    }
    if (defined) all.set((int)o);
  }
  return BasicOpenAlgebraReport{vand == (vphi & vpsi), vor == (vphi | vpsi), vtop == all,
                                vbot.none()};
}

/// Morphism stability: membership in V_phi is preserved along every morphism.
inline bool basic_open_stable(const ModelGroupoid& g, const Bits& v) {
  for (const auto& m : g.morphisms)
    if (v.test(m.src) && !v.test(m.dst)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Definable equivariant sheaves: per-model solution sets, mapped onto each
// other by every morphism.
// ---------------------------------------------------------------------------

struct DefinableSheaf {
  std::vector<Bits> solutions;  // per model, mask over n^k tuples
  int context_size;
  bool equivariant;
  long morphisms_checked;
};

inline DefinableSheaf definable_sheaf(const ModelGroupoid& g, const FOPtr& phi,
                                      const std::vector<std::string>& context) {
  for (const std::string& v : free_vars(phi))
    if (std::find(context.begin(), context.end(), v) == context.end())
      throw invariant_error("context-mismatch: free variable " + v + " not in the context");
  const int k = (int)context.size();
  DefinableSheaf out{{}, k, true, 0};
  for (const FinModel& m : g.models) {
    const int total = pow_int(m.n, k);
    Bits sol(total);
    for (int t = 0; t < total; ++t) {
      Env env;
      int rest = t;
      for (int i = 0; i < k; ++i) {
        env.emplace_back(context[i], rest % m.n);
        rest /= m.n;
      }
      if (satisfies(m, g.theory.sig, phi, env)) sol.set(t);
    }
    out.solutions.push_back(std::move(sol));
  }
  for (const auto& mor : g.morphisms) {
    const int msrc = g.objects[mor.src].model, mdst = g.objects[mor.dst].model;
    const FinModel& src = g.models[msrc];
    const int total = pow_int(src.n, k);
    for (int t = 0; t < total; ++t) {
      int img = 0, mult = 1, rest = t;
      for (int i = 0; i < k; ++i) {
        img += mor.bij[rest % src.n] * mult;
        rest /= src.n;
        mult *= src.n;
      }
      if (out.solutions[msrc].test(t) != out.solutions[mdst].test(img)) out.equivariant = false;
    }
    ++out.morphisms_checked;
  }
  return out;
}

}  // namespace dualis
