#pragma once

#include <chrono>
#include <random>

#include "dualis/fol_categories.hpp"
#include "dualis/io.hpp"

namespace dualis {
namespace corpus {

// ---------------------------------------------------------------------------
// corpora
// ---------------------------------------------------------------------------

inline FinCommRing f4() {
  BinTable add = BinTable::filled(4), mul = BinTable::filled(4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) add.at(a, b) = a ^ b;
  const int m[4][4] = {{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) mul.at(a, b) = m[a][b];
  return FinCommRing(std::move(add), std::move(mul), 0, 1);
}

/// Z/4[x]/(x^2) as a 16-element table: element 4a+b stands for a + b x.
inline FinCommRing z4_dual_numbers() {
  BinTable add = BinTable::filled(16), mul = BinTable::filled(16);
  for (int p = 0; p < 16; ++p)
    for (int q = 0; q < 16; ++q) {
      const int a = p / 4, b = p % 4, c = q / 4, d = q % 4;
      add.at(p, q) = ((a + c) % 4) * 4 + (b + d) % 4;
      mul.at(p, q) = ((a * c) % 4) * 4 + (a * d + b * c) % 4;
    }
  return FinCommRing(std::move(add), std::move(mul), 0, 4 * 1);
}

inline std::vector<std::pair<std::string, FinCommRing>> ring_corpus() {
  std::vector<std::pair<std::string, FinCommRing>> out;
  for (int n = 2; n <= 30; ++n) out.emplace_back("Z/" + std::to_string(n), zmod(n));
  out.emplace_back("F_4", f4());
  out.emplace_back("Z/4[x]/(x^2)", z4_dual_numbers());
  std::vector<std::pair<std::string, FinCommRing>> small;
  for (int n = 2; n <= 6; ++n) small.emplace_back("Z/" + std::to_string(n), zmod(n));
  small.emplace_back("F_4", f4());
  for (std::size_t i = 0; i < small.size(); ++i)
    for (std::size_t j = i; j < small.size(); ++j)
      out.emplace_back(small[i].first + " x " + small[j].first,
                       product_ring(small[i].second, small[j].second));
  return out;
}

/// All posets on at most `max_n` elements, up to isomorphism.
inline std::vector<FinPoset> poset_corpus(int max_n = 4) {
  std::vector<FinPoset> out;
  for (int n = 1; n <= max_n; ++n) {
    std::vector<std::vector<char>> seen;
    std::vector<int> perm(n);
    const int pairs = n * n;
    for (std::uint32_t mask = 0; mask < (1u << pairs); ++mask) {
      std::vector<char> leq(pairs, 0);
      bool refl = true;
      for (int i = 0; i < pairs; ++i) leq[i] = mask >> i & 1;
      for (int i = 0; i < n; ++i)
        if (!leq[i * n + i]) refl = false;
      if (!refl) continue;
      bool anti = true, trans = true;
      for (int i = 0; i < n && anti; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && leq[i * n + j] && leq[j * n + i]) {
            anti = false;
            break;
          }
      for (int i = 0; i < n && trans; ++i)
        for (int j = 0; j < n && trans; ++j)
          for (int k = 0; k < n; ++k)
            if (leq[i * n + j] && leq[j * n + k] && !leq[i * n + k]) {
              trans = false;
              break;
            }
      if (!anti || !trans) continue;
      // canonical up to relabelling?
      std::iota(perm.begin(), perm.end(), 0);
      bool fresh = true;
      do {
        std::vector<char> img(pairs, 0);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (leq[i * n + j]) img[perm[i] * n + perm[j]] = 1;
        for (const auto& s : seen)
          if (s == img) {
            fresh = false;
            break;
          }
      } while (fresh && std::next_permutation(perm.begin(), perm.end()));
      if (!fresh) continue;
      seen.push_back(leq);
      std::vector<std::pair<int, int>> rel;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && leq[i * n + j]) rel.emplace_back(i, j);
      out.push_back(FinPoset(n, rel));
    }
  }
  return out;
}

inline Lattice m3() {
  // 0 < a,b,c < 1 with pairwise meets 0 and joins 1
  return parse_lattice_text("lattice 5\nleq 0 1\nleq 0 2\nleq 0 3\nleq 1 4\nleq 2 4\nleq 3 4\n");
}

inline Lattice n5() {
  // 0 < a < c < 1 and 0 < b < 1 incomparable to a, c
  return parse_lattice_text("lattice 5\nleq 0 1\nleq 1 3\nleq 3 4\nleq 0 2\nleq 2 4\n");
}

/// Fixed axiom pool for the Stone corpus, over variables p q r.
inline std::vector<std::string> stone_axiom_pool() {
  return {"p", "~p", "p -> q", "p | q", "p & q", "q -> r", "~(p & r)", "p | q | r"};
}

struct FOCorpusEntry {
  std::string name;
  FOTheory theory;
};

inline std::vector<FOCorpusEntry> fo_corpus() {
  std::vector<FOCorpusEntry> out;
  {
    out.push_back({"pure-sets", FOTheory{}});
  }
  {
    FOTheory t;
    t.sig.rels.push_back({"R", 1});
    out.push_back({"one-unary", std::move(t)});
  }
  {
    FOTheory t;
    t.sig.rels.push_back({"E", 2});
    t.axioms.push_back(parse_fo("forall x. ~E(x,x)", t.sig));
    t.axioms.push_back(parse_fo("forall x. forall y. E(x,y) -> E(y,x)", t.sig));
    out.push_back({"graphs", std::move(t)});
  }
  {
    FOTheory t;
    t.sig.rels.push_back({"Le", 2});
    t.axioms.push_back(parse_fo("forall x. Le(x,x)", t.sig));
    t.axioms.push_back(parse_fo("forall x. forall y. Le(x,y) & Le(y,x) -> x = y", t.sig));
    t.axioms.push_back(parse_fo("forall x. forall y. forall z. Le(x,y) & Le(y,z) -> Le(x,z)", t.sig));
    t.axioms.push_back(parse_fo("forall x. forall y. Le(x,y) | Le(y,x)", t.sig));
    out.push_back({"linear-orders", std::move(t)});
  }
  {
    FOTheory t;
    t.sig.funs.push_back({"s", 1});
    t.axioms.push_back(parse_fo("forall x. s(s(s(x))) = x", t.sig));
    t.axioms.push_back(parse_fo("forall x. ~ s(x) = x", t.sig));
    out.push_back({"z3-successor", std::move(t)});
  }
  return out;
}

/// Seeded random propositional formulas over the given variables.
inline PropPtr random_prop(std::mt19937_64& rng, int nvars, int depth) {
  std::uniform_int_distribution<int> kind(0, depth <= 0 ? 1 : 5);
  switch (kind(rng)) {
    case 0:
    case 1: {
      std::uniform_int_distribution<int> v(0, nvars + 1);
      const int x = v(rng);
      if (x == nvars) return ptop();
      if (x == nvars + 1) return pbot();
      return pvar(x);
    }
    case 2: return pnot(random_prop(rng, nvars, depth - 1));
    case 3: return pand(random_prop(rng, nvars, depth - 1), random_prop(rng, nvars, depth - 1));
    case 4: return por(random_prop(rng, nvars, depth - 1), random_prop(rng, nvars, depth - 1));
    default: return pimp(random_prop(rng, nvars, depth - 1), random_prop(rng, nvars, depth - 1));
  }
}

// ---------------------------------------------------------------------------
// acceptance criteria
// ---------------------------------------------------------------------------

struct CriterionResult {
  int index;
  std::string name;
  bool pass;
  std::string detail;
  long ms;
};

namespace detail_time {
inline long ms_since(std::chrono::steady_clock::time_point start) {
  return (long)std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - start)
      .count();
}
}  // namespace detail_time

/// Criterion 1: ring sheaf representation over the full ring corpus.
inline CriterionResult criterion_rings() {
  auto start = std::chrono::steady_clock::now();
  long rings = 0, stalks = 0;
  try {
    for (const auto& [name, r] : ring_corpus()) {
      RingRepReport rep = verify_representation(r);
      for (const auto& s : rep.stalks)
        if (!s.local || !s.matches_minimal_open || !s.matches_colimit)
          throw verify_error(name + ": stalk check failed");
      if (!rep.iso || !rep.embedding_injective || !rep.sections_embed)
        throw verify_error(name + ": certificate missing");
      ++rings;
      stalks += (long)rep.stalks.size();
    }
  } catch (const std::exception& e) {
    return {1, "ring sheaf representation", false, e.what(),
            detail_time::ms_since(start)};
  }
  return {1, "ring sheaf representation", true,
          std::to_string(rings) + " rings verified, " + std::to_string(stalks) +
              " local stalks, exact Gamma isomorphisms and injective embeddings",
          detail_time::ms_since(start)};
}

/// Criterion 2: lattice sheaf representation over all posets on <= 4 elements,
/// with M3 and N5 as negative controls.
inline CriterionResult criterion_lattices() {
  auto start = std::chrono::steady_clock::now();
  long lattices = 0;
  try {
    for (const FinPoset& p : poset_corpus(4)) {
      DistLattice l = downset_lattice(p).lattice;
      verify_lattice_representation(l);
      ++lattices;
    }
    auto w3 = check_distributive(m3());
    auto w5 = check_distributive(n5());
    if (!w3 || !w5)
      return {2, "lattice sheaf representation", false,
              "negative control failed: M3/N5 accepted as distributive",
              detail_time::ms_since(start)};
    return {2, "lattice sheaf representation", true,
            std::to_string(lattices) +
                " downset lattices verified (stalks sublocal, Gamma iso, embeddings, slice "
                "equalizers, opens iso); M3 witness (" +
                std::to_string((*w3)[0]) + "," + std::to_string((*w3)[1]) + "," +
                std::to_string((*w3)[2]) + "), N5 rejected",
            detail_time::ms_since(start)};
  } catch (const std::exception& e) {
    return {2, "lattice sheaf representation", false, e.what(), detail_time::ms_since(start)};
  }
}

/// Criterion 3: Stone duality for Lindenbaum algebras of pool theories and for
/// powerset algebras up to 2^4.
inline CriterionResult criterion_stone() {
  auto start = std::chrono::steady_clock::now();
  long algebras = 0, inconsistent = 0;
  try {
    for (int k = 1; k <= 4; ++k) {
      stone_round_trip(powerset_algebra(k));
      ++algebras;
    }
    const std::vector<std::string> pool = stone_axiom_pool();
    std::vector<std::vector<int>> picks{{}};
    for (std::size_t i = 0; i < pool.size(); ++i) picks.push_back({(int)i});
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = i + 1; j < pool.size(); ++j) picks.push_back({(int)i, (int)j});
    for (const auto& pick : picks) {
      PropTheory t;
      t.vars = {"p", "q", "r"};
      for (int i : pick) t.axioms.push_back(parse_prop(pool[i], t.vars));
      try {
        Lindenbaum lt = lindenbaum(t);
        stone_round_trip(lt.algebra);
        ++algebras;
      } catch (const invariant_error&) {
        ++inconsistent;  // inconsistent theories are rejected, as specified
      }
    }
  } catch (const std::exception& e) {
    return {3, "Stone duality", false, e.what(), detail_time::ms_since(start)};
  }
  return {3, "Stone duality", true,
          std::to_string(algebras) +
              " algebras: B isomorphic to Clop(Spec(B)), Stone embedding injective, "
              "atom/ultrafilter/homomorphism points agree; " +
              std::to_string(inconsistent) + " inconsistent theories rejected",
          detail_time::ms_since(start)};
}

/// Criterion 4: groupoid spectrum properties for the five-theory corpus.
inline CriterionResult criterion_groupoid() {
  auto start = std::chrono::steady_clock::now();
  std::string detail;
  try {
    for (const FOCorpusEntry& entry : fo_corpus()) {
      const std::vector<std::string> labels{"x0", "x1"};
      ModelGroupoid g = groupoid(entry.theory, 3, labels);
      if (!groupoid_laws_hold(g)) throw verify_error(entry.name + ": groupoid laws fail");
      // Boolean-pretopos setting: enumerate over the full classical connectives
      DefEnumeration de =
          enumerate_definables(entry.theory.sig, g.models, 3, 4, /*classical=*/true, 400000, 2);
      if (de.truncated) throw budget_error(entry.name + ": definable enumeration truncated");
      EquivarianceReport er = check_equivariance(g, de, 2);
      if (!er.ok) throw verify_error(entry.name + ": " + er.failure);
      // basic-open algebra identities and morphism stability over the
      // depth-<=1 context formulas
      std::vector<FOPtr> ctx_formulas;
      for (const DefFamily& f : de.families) {
        if (f.depth > 1 || (f.sem_free & ~3u)) continue;
        FOPtr parsed = parse_fo(f.repr, entry.theory.sig);
        // canonical representatives may mention a pool variable they do not
        // depend on; keep the sample inside the declared context
        bool in_context = true;
        for (const std::string& v : free_vars(parsed))
          if (std::find(labels.begin(), labels.end(), v) == labels.end()) in_context = false;
        if (!in_context) continue;
        ctx_formulas.push_back(std::move(parsed));
        if (ctx_formulas.size() >= 10) break;
      }
      for (std::size_t i = 0; i < ctx_formulas.size(); ++i) {
        if (!basic_open_stable(g, basic_open(g, ctx_formulas[i], labels)))
          throw verify_error(entry.name + ": basic open not stable under morphisms");
        for (std::size_t j = i; j < ctx_formulas.size(); ++j)
          if (!basic_open_algebra_check(g, ctx_formulas[i], ctx_formulas[j], labels).ok())
            throw verify_error(entry.name + ": basic-open algebra identity fails");
      }
      // filteredness of the category of elements, per representative model
      ModelList ml = enumerate_models(entry.theory, 3);
      for (std::size_t m = 0; m < ml.models.size(); ++m) {
        if (!ml.is_rep[m]) continue;
        CatElemsReport ce = category_of_elements(ml.models[m], entry.theory, 1);
        if (!ce.filtered || !ce.terminal_reachable)
          throw verify_error(entry.name + ": category of elements not filtered");
      }
      // diagram-category checks for every enumerated model
      for (const FinModel& m : ml.models) {
        DiagramReport dr = diagram_category(m, entry.theory.sig, 2);
        if (!dr.ok()) throw verify_error(entry.name + ": diagram category checks fail");
      }
      detail += (detail.empty() ? "" : "; ") + entry.name + ":" +
                std::to_string(er.families) + " sheaves";
    }
  } catch (const std::exception& e) {
    return {4, "groupoid spectrum", false, e.what(), detail_time::ms_since(start)};
  }
  return {4, "groupoid spectrum", true,
          "equivariance of all depth-3 definable sheaves, basic-open identities, morphism "
          "stability, filtered categories of elements, local+well-pointed diagram categories (" +
              detail + ")",
          detail_time::ms_since(start)};
}

/// Criterion 5: completeness shadow.  Refutation at bound 1, and agreement of
/// the propositional encoding with truth tables on randomized formulas.
inline CriterionResult criterion_completeness(std::uint64_t seed = 20240501) {
  auto start = std::chrono::steady_clock::now();
  try {
    FOTheory empty;
    ConsequenceVerdict v =
        semantic_consequence(empty, parse_fo("exists x. exists y. ~ x = y", empty.sig), 1);
    if (!v.refuted)
      return {5, "completeness shadow", false, "two-element sentence not refuted at bound 1",
              detail_time::ms_since(start)};
    // propositional encoding: nullary relations P Q R
    FOTheory prop_enc;
    prop_enc.sig.rels = {{"P", 0}, {"Q", 0}, {"R", 0}};
    const std::vector<std::string> vars{"P", "Q", "R"};
    std::mt19937_64 rng(seed);
    long agreed = 0;
    for (int trial = 0; trial < 100; ++trial) {
      PropPtr f = random_prop(rng, 3, 4);
      bool tautology = true;
      for (std::uint32_t val = 0; val < 8; ++val)
        if (!eval_prop(f, val)) tautology = false;
      FOPtr enc = parse_fo(print_prop(f, vars), prop_enc.sig);
      ConsequenceVerdict cv = semantic_consequence(prop_enc, enc, 1);
      if (cv.refuted == tautology)
        return {5, "completeness shadow", false,
                "propositional encoding disagrees with truth tables on " + print_prop(f, vars),
                detail_time::ms_since(start)};
      ++agreed;
    }
    std::string nonclaim = ConsequenceVerdict{false, 1, std::nullopt}.text();
    return {5, "completeness shadow", true,
            "bound-1 refutation found; " + std::to_string(agreed) +
                " randomized formulas agree with truth tables; " + nonclaim,
            detail_time::ms_since(start)};
  } catch (const std::exception& e) {
    return {5, "completeness shadow", false, e.what(), detail_time::ms_since(start)};
  }
}

/// Criterion 6: cross-module stalk oracle over every corpus sheaf.
inline CriterionResult criterion_stalks() {
  auto start = std::chrono::steady_clock::now();
  long points = 0;
  try {
    for (const auto& [name, r] : ring_corpus()) {
      RingSheaf rs = structure_sheaf(r);
      for (int p = 0; p < rs.spectrum.space.points(); ++p) {
        std::vector<int> s;
        for (int a = 0; a < r.size(); ++a)
          if (!rs.spectrum.primes[p].test(a)) s.push_back(a);
        Localization direct = localize(r, s);
        std::vector<int> h = universal_restriction(r, rs.locs[rs.spectrum.space.minimal_open(p)],
                                                   direct);
        std::vector<char> hit(direct.result.size(), 0);
        for (int v : h) hit[v] = 1;
        bool bij = std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; }) &&
                   (int)h.size() == direct.result.size();
        if (!bij || !colimit_stalk(rs.sheaf, p).matches_minimal)
          throw verify_error(name + ": stalk oracle mismatch at point " + std::to_string(p));
        ++points;
      }
    }
    for (const FinPoset& p : poset_corpus(4)) {
      DistLattice l = downset_lattice(p).lattice;
      SubSpectrum s = sspec(l);
      for (int pt = 0; pt < s.space.points(); ++pt) {
        Filter f{s.points[pt].complement()};
        LatticeQuotient qt = quotient_by_filter(l, f);
        const SliceLattice& sl = s.slices[s.space.minimal_open(pt)];
        bool bij = (int)sl.elems.size() == qt.lattice.size();
        if (bij) {
          std::vector<int> m((int)sl.elems.size());
          std::vector<char> hit(qt.lattice.size(), 0);
          for (std::size_t e = 0; e < sl.elems.size(); ++e) {
            m[e] = qt.hom.map[sl.elems[e]];
            if (hit[m[e]]) bij = false;
            hit[m[e]] = 1;
          }
          bij = bij && is_lattice_hom(sl.lattice, qt.lattice, m);
        }
        if (!bij || !colimit_stalk(s.sheaf, pt).matches_minimal)
          throw verify_error("lattice stalk oracle mismatch");
        ++points;
      }
    }
  } catch (const std::exception& e) {
    return {6, "cross-module stalk oracle", false, e.what(), detail_time::ms_since(start)};
  }
  return {6, "cross-module stalk oracle", true,
          std::to_string(points) +
              " stalks: minimal-open section, filtered colimit, and direct construction "
              "(localization / filter quotient) agree exactly",
          detail_time::ms_since(start)};
}

inline std::vector<CriterionResult> run_all(std::uint64_t seed = 20240501) {
  return {criterion_rings(),       criterion_lattices(),    criterion_stone(),
          criterion_groupoid(),    criterion_completeness(seed), criterion_stalks()};
}

}  // namespace corpus
}  // namespace dualis
