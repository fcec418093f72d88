#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dualis/corpus.hpp"
#include "dualis/fol_categories.hpp"

using namespace dualis;

namespace {

Signature unary_sig() {
  Signature s;
  s.rels.push_back({"R", 1});
  return s;
}

FOTheory unary_theory() {
  FOTheory t;
  t.sig = unary_sig();
  return t;
}

}  // namespace

TEST_CASE("first-order parser") {
  Signature s;
  s.rels.push_back({"R", 2});
  s.rels.push_back({"S", 1});
  SECTION("coherent fragment detection") {
    REQUIRE(is_coherent(parse_fo("exists x. R(x,x)", s)));
    REQUIRE_FALSE(is_coherent(parse_fo("forall x. R(x,x) -> S(x)", s)));
  }
  SECTION("arity mismatches are rejected with a position") {
    REQUIRE_THROWS_AS(parse_fo("R(x)", s), syntax_error);
    REQUIRE_THROWS_AS(parse_fo("S(x,y)", s), syntax_error);
    REQUIRE_THROWS_WITH(parse_fo("R(x)", s), Catch::Matchers::ContainsSubstring("arity mismatch"));
  }
  SECTION("quantifier bodies extend to the right") {
    FOPtr f = parse_fo("forall x. R(x,x) -> S(x)", s);
    REQUIRE(f->kind == FOFormula::Forall);
    REQUIRE(f->a->kind == FOFormula::Imp);
  }
  SECTION("free variables") {
    REQUIRE(free_vars(parse_fo("exists y. R(x,y)", s)) == std::vector<std::string>{"x"});
    REQUIRE(free_vars(parse_fo("S(x) & exists x. S(x)", s)) == std::vector<std::string>{"x"});
  }
  SECTION("nullary relations parse with or without parentheses") {
    Signature s0;
    s0.rels.push_back({"P", 0});
    REQUIRE(parse_fo("P", s0)->kind == FOFormula::Rel);
    REQUIRE(parse_fo("P()", s0)->kind == FOFormula::Rel);
  }
  SECTION("function terms with arity checking") {
    Signature sf;
    sf.funs.push_back({"s", 1});
    REQUIRE(parse_fo("s(x) = y", sf)->kind == FOFormula::Eq);
    REQUIRE_THROWS_AS(parse_fo("s(x,y) = x", sf), syntax_error);
    REQUIRE_THROWS_AS(parse_fo("s = x", sf), syntax_error);
  }
}

TEST_CASE("satisfaction") {
  SECTION("truth and a binary witness") {
    FinModel m;
    m.n = 2;
    Signature s;
    s.rels.push_back({"R", 2});
    m.rels.push_back(Bits::of(4, {tuple_code({0, 1}, 2)}));
    REQUIRE(satisfies(m, s, fo_top()));
    REQUIRE(satisfies(m, s, parse_fo("exists x. exists y. R(x,y)", s)));
    REQUIRE_FALSE(satisfies(m, s, parse_fo("exists x. R(x,x)", s)));
  }
  SECTION("a cyclic successor of order three") {
    Signature s;
    s.funs.push_back({"s", 1});
    FinModel m;
    m.n = 3;
    m.funs.push_back({1, 2, 0});
    REQUIRE(satisfies(m, s, parse_fo("forall x. s(s(s(x))) = x", s)));
    REQUIRE(satisfies(m, s, parse_fo("forall x. ~ s(x) = x", s)));
  }
  SECTION("unbound variables error out") {
    Signature s;
    s.rels.push_back({"R", 1});
    FinModel m;
    m.n = 1;
    m.rels.push_back(Bits::of(1, {0}));
    REQUIRE_THROWS_AS(satisfies(m, s, parse_fo("R(x)", s)), invariant_error);
  }
  SECTION("an inner quantifier shadows the outer binding") {
    Signature s;
    s.rels.push_back({"R", 1});
    FinModel m;
    m.n = 2;
    m.rels.push_back(Bits::of(2, {0}));  // R = {0}
    REQUIRE(satisfies(m, s, parse_fo("exists x. R(x) & exists x. ~R(x)", s)));
    REQUIRE_FALSE(satisfies(m, s, parse_fo("exists x. R(x) & ~R(x)", s)));
  }
}

TEST_CASE("model enumeration") {
  SECTION("one unary relation on a singleton carrier: two models") {
    ModelList ml = enumerate_models(unary_theory(), 1);
    REQUIRE(ml.models.size() == 2);
  }
  SECTION("both R and its complement inhabited forces size two") {
    FOTheory t = unary_theory();
    t.axioms.push_back(parse_fo("exists x. R(x)", t.sig));
    t.axioms.push_back(parse_fo("exists x. ~R(x)", t.sig));
    ModelList ml = enumerate_models(t, 2);
    REQUIRE(ml.models.size() == 2);
    int reps = 0;
    for (char c : ml.is_rep)
      if (c) ++reps;
    REQUIRE(reps == 1);
  }
  SECTION("a false axiom has no models") {
    FOTheory t = unary_theory();
    t.axioms.push_back(fo_bot());
    REQUIRE(enumerate_models(t, 2).models.empty());
  }
  SECTION("the budget is enforced, never silently truncated") {
    FOTheory t;
    t.sig.rels.push_back({"E", 2});
    REQUIRE_THROWS_AS(enumerate_models(t, 3, 10), budget_error);
  }
}

TEST_CASE("isomorphisms") {
  Signature empty_sig;
  FinModel a, b;
  a.n = b.n = 3;
  REQUIRE(isomorphisms(empty_sig, a, b).size() == 6);
  SECTION("a single R-element pins the bijections down") {
    Signature s = unary_sig();
    FinModel m, n;
    m.n = n.n = 2;
    m.rels.push_back(Bits::of(2, {0}));
    n.rels.push_back(Bits::of(2, {0}));
    REQUIRE(isomorphisms(s, m, n).size() == 1);
  }
  SECTION("different carrier sizes have no isomorphisms") {
    FinModel c;
    c.n = 2;
    REQUIRE(isomorphisms(empty_sig, a, c).empty());
  }
}

TEST_CASE("groupoid construction") {
  SECTION("the empty signature on one point with no labels") {
    ModelGroupoid g = groupoid(FOTheory{}, 1, {});
    REQUIRE(g.objects.size() == 1);
    REQUIRE(g.morphisms.size() == 1);
    REQUIRE(groupoid_laws_hold(g));
  }
  SECTION("unary relation with one label at size one") {
    ModelGroupoid g = groupoid(unary_theory(), 1, {"x0"});
    REQUIRE(g.objects.size() == 4);  // two models, two labellings each
    FOPtr rx = parse_fo("R(x0)", g.theory.sig);
    Bits v = basic_open(g, rx, {"x0"});
    REQUIRE(v.count() == 1);  // only the R-full model with the label defined
    const auto& obj = g.objects[v.elems()[0]];
    REQUIRE(g.models[obj.model].rels[0].test(obj.label[0]));
    REQUIRE(basic_open(g, fo_bot(), {}).none());
  }
  SECTION("label-compatible morphisms preserve basic opens") {
    ModelGroupoid g = groupoid(unary_theory(), 3, {"x0", "x1"});
    REQUIRE(groupoid_laws_hold(g));
    FOPtr rx = parse_fo("R(x0)", g.theory.sig);
    REQUIRE(basic_open_stable(g, basic_open(g, rx, {"x0"})));
    REQUIRE(basic_open_stable(g, basic_open(g, rx, {"x0", "x1"})));
  }
  SECTION("the loose-label alternative breaks stability and composition") {
    ModelGroupoid g = groupoid(unary_theory(), 2, {"x0"}, /*strict_labels=*/false);
    FOPtr rx = parse_fo("R(x0)", g.theory.sig);
    REQUIRE_FALSE(basic_open_stable(g, basic_open(g, rx, {"x0"})));
    // composing through an unlabelled object can land outside the morphism set
    REQUIRE_FALSE(groupoid_laws_hold(g));
  }
  SECTION("context mismatches are rejected") {
    ModelGroupoid g = groupoid(unary_theory(), 1, {"x0"});
    REQUIRE_THROWS_AS(basic_open(g, parse_fo("R(x1)", g.theory.sig), {"x0"}), invariant_error);
    REQUIRE_THROWS_AS(basic_open(g, parse_fo("R(x0)", g.theory.sig), {"z"}), invariant_error);
  }
}

TEST_CASE("basic open algebra") {
  ModelGroupoid g = groupoid(unary_theory(), 2, {"x0", "x1"});
  FOPtr phi = parse_fo("R(x0)", g.theory.sig);
  FOPtr psi = parse_fo("x0 = x1", g.theory.sig);
  SECTION("identities hold") {
    REQUIRE(basic_open_algebra_check(g, phi, phi, {"x0", "x1"}).ok());
    REQUIRE(basic_open_algebra_check(g, phi, psi, {"x0", "x1"}).ok());
  }
  SECTION("a formula and its negation cover everything") {
    Bits v = basic_open(g, fo_or(phi, fo_not(phi)), {"x0", "x1"});
    Bits top = basic_open(g, fo_top(), {"x0", "x1"});
    REQUIRE(v == top);
  }
}

TEST_CASE("definable sheaves") {
  ModelGroupoid g = groupoid(unary_theory(), 2, {"x0"});
  SECTION("x0 = x0 is the full carrier everywhere") {
    DefinableSheaf ds = definable_sheaf(g, parse_fo("x0 = x0", g.theory.sig), {"x0"});
    REQUIRE(ds.equivariant);
    for (std::size_t m = 0; m < g.models.size(); ++m)
      REQUIRE(ds.solutions[m].count() == g.models[m].n);
  }
  SECTION("R(x0) is the relation, mapped correctly by every isomorphism") {
    DefinableSheaf ds = definable_sheaf(g, parse_fo("R(x0)", g.theory.sig), {"x0"});
    REQUIRE(ds.equivariant);
    for (std::size_t m = 0; m < g.models.size(); ++m)
      REQUIRE(ds.solutions[m] == g.models[m].rels[0]);
  }
  SECTION("false is empty everywhere") {
    DefinableSheaf ds = definable_sheaf(g, fo_bot(), {"x0"});
    REQUIRE(ds.equivariant);
    for (const Bits& s : ds.solutions) REQUIRE(s.none());
  }
}

TEST_CASE("definable family enumeration") {
  FOTheory t = unary_theory();
  ModelList ml = enumerate_models(t, 2);
  DefEnumeration de = enumerate_definables(t.sig, ml.models, 2, 3, true);
  REQUIRE_FALSE(de.truncated);
  SECTION("representatives reparse to the same solutions") {
    for (std::size_t i = 0; i < std::min<std::size_t>(de.families.size(), 40); ++i) {
      const DefFamily& fam = de.families[i];
      if (fam.sem_free & ~1u) continue;  // semantically a single-variable family
      FOPtr f = parse_fo(fam.repr, t.sig);
      for (std::size_t m = 0; m < ml.models.size(); ++m) {
        for (int v = 0; v < ml.models[m].n; ++v) {
          // representatives may mention other pool variables syntactically;
          // semantic independence makes any binding of those equivalent
          Env env{{"x0", v}, {"x1", 0}, {"x2", 0}};
          REQUIRE(satisfies(ml.models[m], t.sig, f, env) == fam.sol[m].test(v));
        }
      }
    }
  }
}

TEST_CASE("category of elements") {
  FinModel m;
  m.n = 2;
  m.rels.push_back(Bits::of(2, {1}));
  FOTheory t = unary_theory();
  CatElemsReport ce = category_of_elements(m, t, 1);
  SECTION("objects include the full carrier with both tuples and R with its witness") {
    bool full0 = false, full1 = false, r1 = false;
    for (const auto& o : ce.objects) {
      if (o.context == 1 && o.tuple == 0) full0 = true;
      if (o.context == 1 && o.tuple == 1) full1 = true;
      if (o.context == 1 && o.tuple == 1 && o.repr.find("R") != std::string::npos) r1 = true;
    }
    REQUIRE(full0);
    REQUIRE(full1);
    REQUIRE(r1);
  }
  SECTION("filteredness and reachability of the terminal cone") {
    REQUIRE(ce.filtered);
    REQUIRE(ce.terminal_reachable);
    REQUIRE(ce.pairs_checked == (long)ce.objects.size() * (long)ce.objects.size());
  }
  SECTION("a model violating the theory is rejected") {
    FOTheory t2 = unary_theory();
    t2.axioms.push_back(parse_fo("forall x. R(x)", t2.sig));
    REQUIRE_THROWS_AS(category_of_elements(m, t2, 1), invariant_error);
  }
}

TEST_CASE("diagram categories") {
  SECTION("a one-element model passes all three checks") {
    FinModel m;
    m.n = 1;
    m.rels.push_back(Bits::of(1, {}));
    DiagramReport r = diagram_category(m, unary_sig(), 2);
    REQUIRE(r.ok());
  }
  SECTION("with parameters the definable subsets are the full powersets") {
    FinModel m;
    m.n = 2;
    DiagramReport r = diagram_category(m, Signature{}, 2);
    REQUIRE(r.object_counts == std::vector<long>{2, 4, 16});
    for (char c : r.closure_is_powerset) REQUIRE(c == 1);
    REQUIRE(r.terminal_indecomposable);
    REQUIRE(r.terminal_projective);
    REQUIRE(r.points_biject);
    REQUIRE(r.faithfulness_ok);
    REQUIRE(r.faithfulness_pairs > 0);
    REQUIRE(r.graph_witnesses > 0);
  }
  SECTION("counts match 2^(n^j) for a three-element model") {
    FinModel m;
    m.n = 3;
    DiagramReport r = diagram_category(m, Signature{}, 2);
    REQUIRE(r.object_counts == std::vector<long>{2, 8, 512});
  }
}

TEST_CASE("semantic consequence") {
  FOTheory empty;
  SECTION("reflexivity is valid up to any bound") {
    ConsequenceVerdict v = semantic_consequence(empty, parse_fo("forall x. x = x", empty.sig), 3);
    REQUIRE_FALSE(v.refuted);
    REQUIRE(v.text().find("valid-up-to-bound") != std::string::npos);
    REQUIRE(v.text().find("does NOT establish provability") != std::string::npos);
  }
  SECTION("a two-element sentence is refuted by the singleton model") {
    ConsequenceVerdict v =
        semantic_consequence(empty, parse_fo("exists x. exists y. ~ x = y", empty.sig), 1);
    REQUIRE(v.refuted);
    REQUIRE(v.countermodel->n == 1);
  }
  SECTION("every finite linear order has a least element; the bound is explicit") {
    FOTheory lin;
    for (const auto& e : corpus::fo_corpus())
      if (e.name == "linear-orders") lin = e.theory;
    ConsequenceVerdict v =
        semantic_consequence(lin, parse_fo("exists x. forall y. Le(x,y)", lin.sig), 3);
    REQUIRE_FALSE(v.refuted);
    REQUIRE(v.text().find("n_max=3") != std::string::npos);
  }
  SECTION("the propositional encoding agrees with truth tables") {
    FOTheory enc;
    enc.sig.rels = {{"P", 0}, {"Q", 0}, {"R", 0}};
    std::vector<std::string> vars{"P", "Q", "R"};
    std::mt19937_64 rng(3);
    for (int i = 0; i < 40; ++i) {
      PropPtr f = corpus::random_prop(rng, 3, 3);
      bool taut = true;
      for (std::uint32_t v = 0; v < 8; ++v)
        if (!eval_prop(f, v)) taut = false;
      ConsequenceVerdict cv = semantic_consequence(enc, parse_fo(print_prop(f, vars), enc.sig), 1);
      REQUIRE(cv.refuted == !taut);
    }
  }
}

TEST_CASE("equivariance over the corpus groupoids at low depth") {
  for (const auto& entry : corpus::fo_corpus()) {
    ModelGroupoid g = groupoid(entry.theory, 2, {"x0", "x1"});
    DefEnumeration de = enumerate_definables(entry.theory.sig, g.models, 2, 4, true, 100000, 2);
    REQUIRE_FALSE(de.truncated);
    EquivarianceReport er = check_equivariance(g, de, 2);
    REQUIRE(er.ok);
    REQUIRE(er.families > 0);
  }
}
