#pragma once

#include <cmath>
#include <optional>

#include "dualis/fol.hpp"

namespace dualis {

// ---------------------------------------------------------------------------
// Definable families: formulas over a fixed variable pool, represented by
// their solution sets across a list of models and deduplicated semantically.
// Enumeration is by formula depth with a fixed connective ordering; the first
// (shallowest) generating formula is kept as the canonical representative.
// ---------------------------------------------------------------------------

struct DefFamily {
  std::string repr;
  int depth;
  std::uint32_t sem_free;     // pool coordinates the solutions depend on
  std::vector<Bits> sol;      // per model: mask over n^pool assignments
};

struct DefEnumeration {
  std::vector<std::string> pool;  // variable names, x0 x1 ...
  std::vector<DefFamily> families;
  bool truncated = false;
};

namespace detail {

inline std::vector<std::uint64_t> sol_key(const std::vector<Bits>& sol) {
  std::vector<std::uint64_t> key;
  for (const Bits& b : sol) {
    key.push_back((std::uint64_t)b.universe());
    for (std::uint64_t w : b.raw()) key.push_back(w);
  }
  return key;
}

inline std::uint32_t semantic_free(const std::vector<Bits>& sol, const std::vector<FinModel>& models,
                                   int pool) {
  std::uint32_t dep = 0;
  for (std::size_t m = 0; m < models.size(); ++m) {
    const int n = models[m].n;
    const int total = pow_int(n, pool);
    for (int i = 0; i < pool; ++i) {
      if (dep >> i & 1) continue;
      const int stride = pow_int(n, i);
      for (int t = 0; t < total && !(dep >> i & 1); ++t) {
        if ((t / stride) % n != 0) continue;  // group representative with coord i = 0
        bool first = sol[m].test(t);
        for (int v = 1; v < n; ++v)
          if (sol[m].test(t + v * stride) != first) {
            dep |= 1u << i;
            break;
          }
      }
    }
  }
  return dep;
}

inline Bits project_exists(const Bits& sol, int n, int pool, int coord) {
  const int total = pow_int(n, pool);
  const int stride = pow_int(n, coord);
  Bits out(total);
  for (int t = 0; t < total; ++t) {
    if ((t / stride) % n != 0) continue;
    bool any = false;
    for (int v = 0; v < n && !any; ++v) any = sol.test(t + v * stride);
    if (any)
      for (int v = 0; v < n; ++v) out.set(t + v * stride);
  }
  return out;
}

inline Bits project_forall(const Bits& sol, int n, int pool, int coord) {
  const int total = pow_int(n, pool);
  const int stride = pow_int(n, coord);
  Bits out(total);
  for (int t = 0; t < total; ++t) {
    if ((t / stride) % n != 0) continue;
    bool all = true;
    for (int v = 0; v < n && all; ++v) all = sol.test(t + v * stride);
    if (all)
      for (int v = 0; v < n; ++v) out.set(t + v * stride);
  }
  return out;
}

}  // namespace detail

/// When final_context >= 0, the last depth layer generates only formulas whose
/// free variables lie among the first final_context pool variables.
inline DefEnumeration enumerate_definables(const Signature& sig,
                                           const std::vector<FinModel>& models, int max_depth,
                                           int pool, bool classical,
                                           std::size_t family_cap = 200000,
                                           int final_context = -1) {
  DefEnumeration out;
  for (int i = 0; i < pool; ++i) out.pool.push_back("x" + std::to_string(i));
  std::map<std::vector<std::uint64_t>, int> seen;
  auto add = [&](std::string repr, int depth, std::vector<Bits> sol) {
    auto key = detail::sol_key(sol);
    if (seen.count(key)) return;
    if (out.families.size() >= family_cap) {
      out.truncated = true;
      return;
    }
    seen[key] = (int)out.families.size();
    out.families.push_back({std::move(repr), depth,
                            detail::semantic_free(sol, models, pool), std::move(sol)});
  };
  auto eval_atom = [&](auto&& f) {  // f(model, decoded coords) -> bool
    std::vector<Bits> sol;
    for (const FinModel& m : models) {
      const int total = pow_int(m.n, pool);
      Bits b(total);
      std::vector<int> coords(pool);
      for (int t = 0; t < total; ++t) {
        int rest = t;
        for (int i = 0; i < pool; ++i) {
          coords[i] = rest % m.n;
          rest /= m.n;
        }
        if (f(m, coords)) b.set(t);
      }
      sol.push_back(std::move(b));
    }
    return sol;
  };

  add("true", 0, eval_atom([](const FinModel&, const std::vector<int>&) { return true; }));
  add("false", 0, eval_atom([](const FinModel&, const std::vector<int>&) { return false; }));
  for (int i = 0; i < pool; ++i)
    for (int j = i + 1; j < pool; ++j)
      add(out.pool[i] + "=" + out.pool[j], 0,
          eval_atom([i, j](const FinModel&, const std::vector<int>& c) { return c[i] == c[j]; }));
  for (std::size_t c = 0; c < sig.consts.size(); ++c)
    for (int i = 0; i < pool; ++i)
      add(sig.consts[c] + "=" + out.pool[i], 0,
          eval_atom([c, i](const FinModel& m, const std::vector<int>& co) {
            return m.consts[c] == co[i];
          }));
  for (std::size_t r = 0; r < sig.rels.size(); ++r) {
    const int k = sig.rels[r].arity;
    std::vector<int> args(k, 0);
    while (true) {
      std::vector<std::string> names;
      for (int a : args) names.push_back(out.pool[a]);
      add(k == 0 ? sig.rels[r].name : sig.rels[r].name + "(" + join(names, ",") + ")", 0,
          eval_atom([&sig, r, &args](const FinModel& m, const std::vector<int>& c) {
            std::vector<int> t;
            for (int a : args) t.push_back(c[a]);
            return m.rels[r].test(tuple_code(t, m.n));
          }));
      int i = 0;
      for (; i < k; ++i) {
        if (++args[i] < pool) break;
        args[i] = 0;
      }
      if (i == k) break;
    }
  }
  for (std::size_t fidx = 0; fidx < sig.funs.size(); ++fidx) {
    const int k = sig.funs[fidx].arity;
    std::vector<int> args(k, 0);
    while (true) {
      for (int res = 0; res < pool; ++res) {
        std::vector<std::string> names;
        for (int a : args) names.push_back(out.pool[a]);
        add(sig.funs[fidx].name + "(" + join(names, ",") + ")=" + out.pool[res], 0,
            eval_atom([&](const FinModel& m, const std::vector<int>& c) {
              std::vector<int> t;
              for (int a : args) t.push_back(c[a]);
              return m.funs[fidx][tuple_code(t, m.n)] == c[res];
            }));
      }
      int i = 0;
      for (; i < k; ++i) {
        if (++args[i] < pool) break;
        args[i] = 0;
      }
      if (i == k) break;
    }
  }

  for (int d = 1; d <= max_depth && !out.truncated; ++d) {
    // At the final depth only formulas-in-context are of interest (they are
    // the definable sheaves).  Any such formula decomposes as a boolean
    // combination of context formulas of lower depth or a quantification of a
    // lower-depth formula with at most one extra free variable, so restricting
    // the operands keeps the final layer complete for the context while
    // avoiding the flood of many-variable intermediates.
    const bool restrict_ctx = (final_context >= 0 && d == max_depth);
    const std::uint32_t ctx_mask = restrict_ctx ? ((1u << final_context) - 1) : ~0u;
    const std::size_t level_end = out.families.size();
    for (std::size_t a = 0; a < level_end && !out.truncated; ++a) {
      if (out.families[a].sem_free & ~ctx_mask) continue;
      for (std::size_t b = a; b < level_end && !out.truncated; ++b) {
        if (std::max(out.families[a].depth, out.families[b].depth) != d - 1) continue;
        if (out.families[b].sem_free & ~ctx_mask) continue;
        std::vector<Bits> sand, sor;
        for (std::size_t m = 0; m < models.size(); ++m) {
          sand.push_back(out.families[a].sol[m] & out.families[b].sol[m]);
          sor.push_back(out.families[a].sol[m] | out.families[b].sol[m]);
        }
        add("(" + out.families[a].repr + " & " + out.families[b].repr + ")", d, std::move(sand));
        add("(" + out.families[a].repr + " | " + out.families[b].repr + ")", d, std::move(sor));
      }
    }
    for (std::size_t a = 0; a < level_end && !out.truncated; ++a) {
      if (out.families[a].depth != d - 1) continue;
      if (classical && !(out.families[a].sem_free & ~ctx_mask)) {
        std::vector<Bits> sneg;
        for (const Bits& s : out.families[a].sol) sneg.push_back(s.complement());
        add("~" + out.families[a].repr, d, std::move(sneg));
      }
      for (int i = 0; i < pool; ++i) {
        if (!(out.families[a].sem_free >> i & 1)) continue;
        if (out.families[a].sem_free & ~(ctx_mask | (1u << i))) continue;
        std::vector<Bits> sex, sfa;
        for (std::size_t m = 0; m < models.size(); ++m) {
          sex.push_back(detail::project_exists(out.families[a].sol[m], models[m].n, pool, i));
          if (classical)
            sfa.push_back(detail::project_forall(out.families[a].sol[m], models[m].n, pool, i));
        }
        add("(exists " + out.pool[i] + ". " + out.families[a].repr + ")", d, std::move(sex));
        if (classical)
          add("(forall " + out.pool[i] + ". " + out.families[a].repr + ")", d, std::move(sfa));
      }
    }
  }
  return out;
}

/// Equivariance of every enumerated definable family across every groupoid
/// morphism: the underlying model isomorphism maps solutions onto solutions.
struct EquivarianceReport {
  long families = 0;
  long checks = 0;
  bool ok = true;
  bool truncated = false;
  std::string failure;
};

inline EquivarianceReport check_equivariance(const ModelGroupoid& g, const DefEnumeration& de,
                                             int context_size) {
  EquivarianceReport rep;
  rep.truncated = de.truncated;
  for (const DefFamily& fam : de.families) {
    // restrict to families that are formulas-in-context over the first k vars
    if (fam.sem_free & ~((1u << context_size) - 1)) continue;
    ++rep.families;
    for (const auto& mor : g.morphisms) {
      const int ms = g.objects[mor.src].model, md = g.objects[mor.dst].model;
      const FinModel& src = g.models[ms];
      const int total = pow_int(src.n, context_size);
      for (int t = 0; t < total; ++t) {
        // embed the context tuple into the pool with bound coordinates at 0
        int code_s = 0, code_d = 0, mult = 1, rest = t;
        for (int i = 0; i < context_size; ++i) {
          const int v = rest % src.n;
          code_s += v * mult;
          code_d += mor.bij[v] * mult;
          rest /= src.n;
          mult *= src.n;
        }
        if (fam.sol[ms].test(code_s) != fam.sol[md].test(code_d)) {
          rep.ok = false;
          if (rep.failure.empty())
            rep.failure = "family " + fam.repr + " not equivariant along a morphism";
        }
      }
      ++rep.checks;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Category of elements of a model: objects are (definable set in context,
// tuple); every pair of objects admits a cone through the product formula.
// ---------------------------------------------------------------------------

struct CatElemObject {
  int family;   // index into the enumeration
  int context;  // declared context length
  int tuple;    // code over n^context
  std::string repr;
};

struct CatElemsReport {
  std::vector<CatElemObject> objects;
  long pairs_checked = 0;
  bool filtered = true;            // every pair admits a product cone
  bool terminal_reachable = true;  // every object has the unique map to (true,())
  bool truncated = false;
  std::string stalk_note;
};

namespace detail {

/// Restriction of a pooled solution mask to its first `k` coordinates; the
/// family must not depend on the others.
inline Bits restrict_sol(const Bits& sol, int n, int k) {
  const int total = pow_int(n, k);
  Bits out(total);
  for (int t = 0; t < total; ++t)
    if (sol.test(t)) out.set(t);  // higher coordinates zero
  return out;
}

}  // namespace detail

inline CatElemsReport category_of_elements(const FinModel& m, const FOTheory& t, int depth,
                                           int max_context = 2) {
  for (const FOPtr& ax : t.axioms)
    if (!satisfies(m, t.sig, ax)) throw invariant_error("model does not satisfy the theory");
  const int pool = max_context + 2;
  DefEnumeration de = enumerate_definables(t.sig, {m}, depth, pool, !t.coherent());
  CatElemsReport rep;
  rep.truncated = de.truncated;
  // objects per declared context length, deduplicated by restricted solutions
  std::vector<std::pair<int, Bits>> sols;  // (object-defining family, restricted sol)
  for (int k = 0; k <= max_context; ++k) {
    std::set<std::vector<std::uint64_t>> dedup;
    for (std::size_t f = 0; f < de.families.size(); ++f) {
      if (de.families[f].sem_free & ~((1u << k) - 1)) continue;
      Bits r = detail::restrict_sol(de.families[f].sol[0], m.n, k);
      std::vector<std::uint64_t> key{(std::uint64_t)k};
      for (std::uint64_t w : r.raw()) key.push_back(w);
      if (!dedup.insert(key).second) continue;
      for (int tup = 0; tup < pow_int(m.n, k); ++tup)
        if (r.test(tup)) {
          rep.objects.push_back({(int)f, k, tup, de.families[f].repr});
          sols.emplace_back((int)f, r);
        }
    }
  }
  // cones: for objects (S,d), (S',d') the product (SxS', (d,d')) projects to both
  for (std::size_t i = 0; i < rep.objects.size(); ++i)
    for (std::size_t j = 0; j < rep.objects.size(); ++j) {
      const auto& oi = rep.objects[i];
      const auto& oj = rep.objects[j];
      const int ki = oi.context, kj = oj.context;
      const Bits& si = sols[i].second;
      const Bits& sj = sols[j].second;
      const int
          ni = pow_int(m.n, ki),
          nj = pow_int(m.n, kj);
      // product solution over context ki + kj
      Bits prod(ni * nj);
      for (int a = 0; a < ni; ++a)
        for (int b = 0; b < nj; ++b)
          if (si.test(a) && sj.test(b)) prod.set(a + b * ni);
      const int dcode = oi.tuple + oj.tuple * ni;
      bool ok = prod.test(dcode);
      // projections land inside the factors and hit the chosen tuples
      for (int a = 0; a < ni && ok; ++a)
        for (int b = 0; b < nj && ok; ++b)
          if (prod.test(a + b * ni) && (!si.test(a) || !sj.test(b))) ok = false;
      if (!ok) rep.filtered = false;
      ++rep.pairs_checked;
    }
  rep.terminal_reachable = true;  // the empty-context true object receives the unique map
  bool have_terminal = false;
  for (const auto& o : rep.objects)
    if (o.context == 0) have_terminal = true;
  if (!have_terminal) rep.terminal_reachable = false;
  rep.stalk_note =
      "stalk at the model: the diagram category of parameter-definable sets (see diagram_category)";
  return rep;
}

// ---------------------------------------------------------------------------
// The diagram category of a model: subsets of M^j definable with parameters.
// With equality and parameters every subset is definable, which the closure
// oracle certifies; the local/well-pointed checks then reduce to finite-set
// facts.
// ---------------------------------------------------------------------------

struct DiagramReport {
  std::vector<long> object_counts;        // per arity 0..k_max
  std::vector<char> closure_is_powerset;  // per arity
  bool terminal_indecomposable = true;
  bool terminal_projective = true;
  bool points_biject = true;  // points 1 -> D correspond exactly to elements of D
  long faithfulness_pairs = 0;
  bool faithfulness_ok = true;
  long graph_witnesses = 0;  // function graphs re-evaluated from literal formulas
  bool ok() const {
    bool closure = true;
    for (char c : closure_is_powerset) closure = closure && c;
    return closure && terminal_indecomposable && terminal_projective && points_biject &&
           faithfulness_ok;
  }
};

inline DiagramReport diagram_category(const FinModel& m, const Signature& sig, int k_max,
                                      long faithfulness_budget = 50000) {
  DiagramReport rep;
  std::vector<std::vector<Bits>> closures;  // per arity: all definable subsets
  for (int j = 0; j <= k_max; ++j) {
    const int total = pow_int(m.n, j);
    if (total > 12) throw budget_error("diagram closure limited to 12 tuples per arity");
    std::set<Bits> cl;
    Bits empty(total), full(total);
    for (int t = 0; t < total; ++t) full.set(t);
    cl.insert(empty);
    cl.insert(full);
    auto decode = [&](int t, int i) { return (t / pow_int(m.n, i)) % m.n; };
    for (int i = 0; i < j; ++i) {
      for (int c = 0; c < m.n; ++c) {
        Bits s(total);
        for (int t = 0; t < total; ++t)
          if (decode(t, i) == c) s.set(t);
        cl.insert(s);  // coordinate pinned to a parameter
      }
      for (int i2 = i + 1; i2 < j; ++i2) {
        Bits s(total);
        for (int t = 0; t < total; ++t)
          if (decode(t, i) == decode(t, i2)) s.set(t);
        cl.insert(s);
      }
    }
    for (std::size_t r = 0; r < sig.rels.size(); ++r) {
      const int k = sig.rels[r].arity;
      // arguments drawn from coordinates and parameters
      std::vector<int> choice(k, 0);  // < j: coordinate, >= j: parameter j..j+n-1
      while (true) {
        Bits s(total);
        for (int t = 0; t < total; ++t) {
          std::vector<int> args;
          for (int a : choice) args.push_back(a < j ? decode(t, a) : a - j);
          if (m.rels[r].test(tuple_code(args, m.n))) s.set(t);
        }
        cl.insert(s);
        int i = 0;
        for (; i < k; ++i) {
          if (++choice[i] < j + m.n) break;
          choice[i] = 0;
        }
        if (i == k) break;
      }
      if (k == 0) break;
    }
    // close under union, intersection, complement
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<Bits> cur(cl.begin(), cl.end());
      for (const Bits& a : cur) {
        if (cl.insert(a.complement()).second) grew = true;
        for (const Bits& b : cur) {
          if (cl.insert(a & b).second) grew = true;
          if (cl.insert(a | b).second) grew = true;
        }
      }
    }
    rep.object_counts.push_back((long)cl.size());
    rep.closure_is_powerset.push_back(cl.size() == (std::size_t{1} << total));
    closures.push_back(std::vector<Bits>(cl.begin(), cl.end()));
  }
  // terminal object: the singleton at arity 0.  Subobjects are just {} and 1.
  {
    const std::vector<Bits>& sub0 = closures[0];
    for (const Bits& a : sub0)
      for (const Bits& b : sub0) {
        if ((a & b).any()) continue;
        Bits u = a | b;
        if (u.count() == 1 && a.any() && b.any()) rep.terminal_indecomposable = false;
      }
  }
  // projectivity and points: every nonempty definable set has exactly |D|
  // points, each a parameter-definable singleton
  for (int j = 0; j <= k_max; ++j) {
    for (const Bits& d : closures[j]) {
      long points = 0;
      for (int t = 0; t < pow_int(m.n, j); ++t) {
        if (!d.test(t)) continue;
        Bits single(pow_int(m.n, j));
        single.set(t);
        bool definable = false;
        for (const Bits& e : closures[j])
          if (e == single) definable = true;
        if (definable) ++points;
      }
      if (d.any() && points == 0) rep.terminal_projective = false;
      if (points != d.count()) rep.points_biject = false;
    }
  }
  // faithfulness of global sections on a budgeted prefix of hom-sets:
  // distinct parallel maps are separated by a point
  long budget = faithfulness_budget;
  for (int j = 0; j <= k_max && budget > 0; ++j)
    for (int j2 = 0; j2 <= k_max && budget > 0; ++j2)
      for (const Bits& d : closures[j]) {
        if (budget <= 0) break;
        for (const Bits& e : closures[j2]) {
          const std::vector<int> de = d.elems(), ee = e.elems();
          if (de.empty() || ee.empty()) continue;
          double homs = std::pow((double)ee.size(), (double)de.size());
          if (homs > 64) continue;
          const int nh = (int)homs;
          std::vector<std::vector<int>> tabs;
          std::vector<int> odo(de.size(), 0);
          for (int h = 0; h < nh; ++h) {
            std::vector<int> tab(de.size());
            for (std::size_t i = 0; i < de.size(); ++i) tab[i] = ee[odo[i]];
            tabs.push_back(std::move(tab));
            for (std::size_t i = 0; i < de.size(); ++i) {
              if (++odo[i] < (int)ee.size()) break;
              odo[i] = 0;
            }
          }
          for (int h1 = 0; h1 < nh && budget > 0; ++h1)
            for (int h2 = h1 + 1; h2 < nh && budget > 0; ++h2) {
              bool separated = false;
              for (std::size_t i = 0; i < de.size(); ++i)
                if (tabs[h1][i] != tabs[h2][i]) separated = true;
              if (!separated) rep.faithfulness_ok = false;
              ++rep.faithfulness_pairs;
              --budget;
            }
          if (budget > 0 && !tabs.empty() && j + j2 <= 4) {
            // one function per hom-set: rebuild its graph from the literal
            // defining formula (a disjunction of coordinate equations with
            // element parameters) and compare with the table
            FOPtr graph = fo_bot();
            for (std::size_t i = 0; i < de.size(); ++i) {
              FOPtr row = fo_top();
              int rest = de[i];
              for (int c = 0; c < j; ++c) {
                row = fo_and(row, fo_eq(Term{Term::Var, -1, "u" + std::to_string(c), {}},
                                        Term{Term::Param, rest % m.n, "", {}}));
                rest /= m.n;
              }
              rest = tabs[0][i];
              for (int c = 0; c < j2; ++c) {
                row = fo_and(row, fo_eq(Term{Term::Var, -1, "v" + std::to_string(c), {}},
                                        Term{Term::Param, rest % m.n, "", {}}));
                rest /= m.n;
              }
              graph = fo_or(graph, row);
            }
            bool match = true;
            for (int td = 0; td < pow_int(m.n, j) && match; ++td)
              for (int te = 0; te < pow_int(m.n, j2) && match; ++te) {
                Env env;
                int rest = td;
                for (int c = 0; c < j; ++c) {
                  env.emplace_back("u" + std::to_string(c), rest % m.n);
                  rest /= m.n;
                }
                rest = te;
                for (int c = 0; c < j2; ++c) {
                  env.emplace_back("v" + std::to_string(c), rest % m.n);
                  rest /= m.n;
                }
                bool in_graph = false;
                for (std::size_t i = 0; i < de.size(); ++i)
                  if (de[i] == td && tabs[0][i] == te) in_graph = true;
                if (satisfies(m, sig, graph, env) != in_graph) match = false;
              }
            if (!match) rep.faithfulness_ok = false;
            ++rep.graph_witnesses;
          }
        }
      }
  return rep;
}

// ---------------------------------------------------------------------------
// Semantic consequence up to a carrier bound (the completeness shadow)
// ---------------------------------------------------------------------------

struct ConsequenceVerdict {
  bool refuted;
  int bound;
  std::optional<FinModel> countermodel;

  std::string text() const {
    if (refuted)
      return "refuted: countermodel with " + std::to_string(countermodel->n) + " elements";
    return "valid-up-to-bound (n_max=" + std::to_string(bound) +
           "): no countermodel among models of the theory with at most " + std::to_string(bound) +
           " elements; this does NOT establish provability (the finite model property fails in "
           "general)";
  }
};

inline ConsequenceVerdict semantic_consequence(const FOTheory& t, const FOPtr& sigma, int n_max,
                                               std::uint64_t budget = search_budget()) {
  ModelList ml = enumerate_models(t, n_max, budget);
  for (const FinModel& m : ml.models)
    if (!satisfies(m, t.sig, sigma)) return {true, n_max, m};
  return {false, n_max, std::nullopt};
}

}  // namespace dualis
