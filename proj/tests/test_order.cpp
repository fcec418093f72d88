#include <catch2/catch_amalgamated.hpp>

#include "dualis/io.hpp"
#include "dualis/order.hpp"

using namespace dualis;

namespace {

Lattice diamond_m3() {
  return parse_lattice_text("lattice 5\nleq 0 1\nleq 0 2\nleq 0 3\nleq 1 4\nleq 2 4\nleq 3 4\n");
}
Lattice pentagon_n5() {
  return parse_lattice_text("lattice 5\nleq 0 1\nleq 1 3\nleq 3 4\nleq 0 2\nleq 2 4\n");
}

// independent oracle: in a finite lattice every filter is the upset of its
// least element, and the upset of x is prime iff x is join-prime and not bot
std::vector<Bits> prime_filters_by_join_primes(const Lattice& l) {
  std::vector<Bits> out;
  for (int x = 0; x < l.size(); ++x) {
    if (x == l.bot()) continue;
    bool join_prime = true;
    for (int a = 0; a < l.size() && join_prime; ++a)
      for (int b = 0; b < l.size(); ++b)
        if (l.leq(x, l.join(a, b)) && !l.leq(x, a) && !l.leq(x, b)) {
          join_prime = false;
          break;
        }
    if (!join_prime) continue;
    Bits f(l.size());
    for (int y = 0; y < l.size(); ++y)
      if (l.leq(x, y)) f.set(y);
    out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Bits> all_filters(const Lattice& l) {
  std::vector<Bits> out;
  for (int x = 0; x < l.size(); ++x) {
    Bits f(l.size());
    for (int y = 0; y < l.size(); ++y)
      if (l.leq(x, y)) f.set(y);
    out.push_back(f);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

TEST_CASE("poset construction rejects cycles") {
  REQUIRE_NOTHROW(FinPoset(3, {{0, 1}, {1, 2}}));
  REQUIRE_THROWS_AS(FinPoset(2, {{0, 1}, {1, 0}}), invariant_error);
}

TEST_CASE("lattice construction validates the axioms") {
  REQUIRE_NOTHROW(chain_lattice(4));
  // the 2-antichain has no joins at all
  std::vector<char> leq = {1, 0, 0, 1};
  REQUIRE_THROWS_AS(Lattice::from_leq(2, leq), invariant_error);
  // the degenerate lattice is rejected
  REQUIRE_THROWS_AS(chain_lattice(1), invariant_error);
  // inconsistent meet/join tables
  BinTable meet = BinTable::filled(2), join = BinTable::filled(2);
  meet.at(0, 0) = 0; meet.at(0, 1) = 0; meet.at(1, 0) = 0; meet.at(1, 1) = 1;
  join.at(0, 0) = 0; join.at(0, 1) = 0; join.at(1, 0) = 0; join.at(1, 1) = 1;
  REQUIRE_THROWS_AS(Lattice(meet, join), invariant_error);
}

TEST_CASE("check_distributive") {
  REQUIRE_FALSE(check_distributive(chain_lattice(3)).has_value());
  auto w3 = check_distributive(diamond_m3());
  REQUIRE(w3.has_value());
  REQUIRE(*w3 == std::array<int, 3>{1, 2, 3});
  REQUIRE(check_distributive(pentagon_n5()).has_value());
  REQUIRE_THROWS_AS(DistLattice(diamond_m3()), invariant_error);
}

TEST_CASE("prime filter enumeration matches the join-prime oracle") {
  SECTION("two-element lattice") {
    auto pf = prime_filters(chain_lattice(2));
    REQUIRE(pf.size() == 1);
    REQUIRE(pf[0].members.elems() == std::vector<int>{1});
  }
  SECTION("three-chain") {
    auto pf = prime_filters(chain_lattice(3));
    REQUIRE(pf.size() == 2);
    std::vector<std::vector<int>> got;
    for (const auto& f : pf) got.push_back(f.members.elems());
    std::sort(got.begin(), got.end());
    REQUIRE(got == std::vector<std::vector<int>>{{1, 2}, {2}});
  }
  SECTION("oracle comparison on downset lattices of small posets") {
    for (const FinPoset& p : std::vector<FinPoset>{FinPoset(2, {}), FinPoset(3, {{0, 1}}),
                                                   FinPoset(3, {{0, 1}, {0, 2}})}) {
      DistLattice l = downset_lattice(p).lattice;
      std::vector<Bits> got;
      for (const auto& f : prime_filters(l)) {
        REQUIRE(is_prime_filter(l, f.members));
        got.push_back(f.members);
      }
      std::sort(got.begin(), got.end());
      REQUIRE(got == prime_filters_by_join_primes(l));
    }
  }
  SECTION("the 2x2 Boolean algebra has the two principal ultrafilters") {
    DistLattice ba = downset_lattice(FinPoset(2, {})).lattice;
    auto pf = prime_filters(ba);
    REQUIRE(pf.size() == 2);
    for (const auto& f : pf) {
      int least = -1;
      for (int x : f.members.elems()) {
        if (least < 0) least = x;
        else least = ba.meet(least, x);
      }
      // generated by an atom
      bool is_atom = least != ba.bot();
      for (int y = 0; y < ba.size(); ++y)
        if (y != ba.bot() && y != least && ba.leq(y, least)) is_atom = false;
      REQUIRE(is_atom);
    }
  }
}

TEST_CASE("filter quotients") {
  DistLattice c3 = chain_lattice(3);
  SECTION("quotient by the trivial filter is the identity congruence") {
    Filter top = make_filter(c3, {2});
    LatticeQuotient q = quotient_by_filter(c3, top);
    REQUIRE(q.lattice.size() == 3);
    REQUIRE(is_lattice_hom(c3, q.lattice, q.hom.map));
  }
  SECTION("three-chain modulo the upset of a gives the two-chain") {
    LatticeQuotient q = quotient_by_filter(c3, make_filter(c3, {1, 2}));
    REQUIRE(q.lattice.size() == 2);
    REQUIRE(q.hom.map[1] == q.hom.map[2]);
    REQUIRE(q.hom.map[0] != q.hom.map[1]);
  }
  SECTION("Boolean 2x2 modulo a principal ultrafilter gives 2") {
    DistLattice ba = downset_lattice(FinPoset(2, {})).lattice;
    auto pf = prime_filters(ba);
    LatticeQuotient q = quotient_by_filter(ba, pf[0]);
    REQUIRE(q.lattice.size() == 2);
  }
  SECTION("improper filters are rejected") {
    Bits whole(3);
    for (int i = 0; i < 3; ++i) whole.set(i);
    REQUIRE_THROWS_AS(quotient_by_filter(c3, Filter{whole}), invariant_error);
  }
  SECTION("Heyting quotients preserve implication through the hom") {
    for (const FinPoset& p :
         std::vector<FinPoset>{FinPoset(2, {}), FinPoset(3, {{0, 1}})}) {
      HeytingAlgebra h = heyting_from_lattice(downset_lattice(p).lattice);
      for (const Filter& f : prime_filters(h)) {
        HeytingQuotient q = quotient_by_filter(h, f);
        REQUIRE(is_heyting_hom(h, q.algebra, q.hom.map));
        // surjective
        std::vector<char> hit(q.algebra.size(), 0);
        for (int v : q.hom.map) hit[v] = 1;
        for (char c : hit) REQUIRE(c == 1);
      }
    }
  }
  SECTION("the exists-r congruence agrees with the Heyting biconditional form") {
    for (const FinPoset& p :
         std::vector<FinPoset>{FinPoset(3, {{0, 1}}), FinPoset(3, {{0, 1}, {0, 2}})}) {
      DistLattice l = downset_lattice(p).lattice;
      HeytingAlgebra h = heyting_from_lattice(l);
      for (const Bits& fm : all_filters(l)) {
        if (fm.test(l.bot())) continue;
        Filter f{fm};
        LatticeQuotient q = quotient_by_filter(l, f);
        for (int x = 0; x < l.size(); ++x)
          for (int y = 0; y < l.size(); ++y) {
            const bool heyting_rel = fm.test(h.meet(h.impl(x, y), h.impl(y, x)));
            REQUIRE((q.hom.map[x] == q.hom.map[y]) == heyting_rel);
          }
      }
    }
  }
  SECTION("iterated quotients agree with the quotient by the join filter") {
    for (const FinPoset& p :
         std::vector<FinPoset>{FinPoset(3, {}), FinPoset(3, {{0, 1}, {0, 2}})}) {
      DistLattice l = downset_lattice(p).lattice;
      if (l.size() > 8) continue;
      std::vector<Bits> filters = all_filters(l);
      for (const Bits& f1 : filters)
        for (const Bits& f2 : filters) {
          if (!f1.subset_of(f2) || f2.test(l.bot())) continue;
          LatticeQuotient q1 = quotient_by_filter(l, Filter{f1});
          // image of f2 in the quotient
          Bits f2img(q1.lattice.size());
          for (int x : f2.elems()) f2img.set(q1.hom.map[x]);
          LatticeQuotient q2 = quotient_by_filter(q1.lattice, Filter{f2img});
          LatticeQuotient direct = quotient_by_filter(l, Filter{f2});
          REQUIRE(q2.lattice.size() == direct.lattice.size());
          for (int x = 0; x < l.size(); ++x)
            for (int y = 0; y < l.size(); ++y)
              REQUIRE((q2.hom.map[q1.hom.map[x]] == q2.hom.map[q1.hom.map[y]]) ==
                      (direct.hom.map[x] == direct.hom.map[y]));
        }
    }
  }
}

TEST_CASE("sublocality") {
  REQUIRE(is_sublocal(chain_lattice(2)));
  REQUIRE(is_sublocal(chain_lattice(5)));
  DistLattice ba = downset_lattice(FinPoset(2, {})).lattice;
  auto v = sublocal_violation(ba);
  REQUIRE(v.has_value());
  REQUIRE(ba.join(v->first, v->second) == ba.top());
  SECTION("quotients by prime filters are sublocal") {
    for (const FinPoset& p : std::vector<FinPoset>{FinPoset(2, {}), FinPoset(3, {{0, 1}}),
                                                   FinPoset(4, {{0, 2}, {1, 2}})}) {
      DistLattice l = downset_lattice(p).lattice;
      for (const Filter& f : prime_filters(l))
        REQUIRE(is_sublocal(quotient_by_filter(l, f).lattice));
    }
  }
}

TEST_CASE("downset lattices") {
  REQUIRE_THROWS_AS(downset_lattice(FinPoset(0, {})), invariant_error);
  REQUIRE(downset_lattice(FinPoset(1, {})).lattice.size() == 2);
  SECTION("two-antichain gives the 2x2 Boolean algebra") {
    DownsetLattice d = downset_lattice(FinPoset(2, {}));
    REQUIRE(d.lattice.size() == 4);
    REQUIRE(find_lattice_iso(d.lattice, powerset_algebra(2)).has_value());
  }
  SECTION("two-chain gives the three-chain") {
    DownsetLattice d = downset_lattice(FinPoset(2, {{0, 1}}));
    REQUIRE(d.lattice.size() == 3);
    REQUIRE(find_lattice_iso(d.lattice, chain_lattice(3)).has_value());
  }
}

TEST_CASE("heyting implication from a finite distributive lattice") {
  SECTION("two-element algebra") {
    HeytingAlgebra h = heyting_from_lattice(chain_lattice(2));
    REQUIRE(h.impl(1, 0) == 0);
    REQUIRE(h.impl(0, 0) == 1);
  }
  SECTION("three-chain") {
    HeytingAlgebra h = heyting_from_lattice(chain_lattice(3));
    REQUIRE(h.impl(2, 1) == 1);
    REQUIRE(h.impl(1, 0) == 0);
    REQUIRE(h.impl(0, 1) == 2);
  }
  SECTION("on a Boolean algebra implication is complement-join") {
    BooleanAlgebra b = powerset_algebra(2);
    for (int x = 0; x < b.size(); ++x)
      for (int y = 0; y < b.size(); ++y)
        REQUIRE(b.impl(x, y) == b.join(b.complement(x), y));
  }
  SECTION("residuation holds on every downset lattice of posets up to size 4") {
    for (int seed_n = 1; seed_n <= 3; ++seed_n) {
      DistLattice l = downset_lattice(FinPoset(seed_n, {})).lattice;
      if (l.size() > 20) continue;
      HeytingAlgebra h = heyting_from_lattice(l);
      for (int x = 0; x < h.size(); ++x)
        for (int y = 0; y < h.size(); ++y)
          for (int z = 0; z < h.size(); ++z)
            REQUIRE(h.leq(z, h.impl(x, y)) == h.leq(h.meet(z, x), y));
    }
  }
}

TEST_CASE("Birkhoff embedding into the powerset of the prime filters") {
  for (const FinPoset& p : std::vector<FinPoset>{FinPoset(2, {}), FinPoset(3, {{0, 1}}),
                                                 FinPoset(4, {{0, 1}, {2, 3}})}) {
    DistLattice l = downset_lattice(p).lattice;
    std::vector<Filter> pf = prime_filters(l);
    // x |-> { F : x in F } as a mask over the prime filters
    std::vector<std::uint32_t> emb(l.size(), 0);
    for (int x = 0; x < l.size(); ++x)
      for (std::size_t i = 0; i < pf.size(); ++i)
        if (pf[i].members.test(x)) emb[x] |= 1u << i;
    for (int x = 0; x < l.size(); ++x)
      for (int y = 0; y < l.size(); ++y) {
        if (x != y) REQUIRE(emb[x] != emb[y]);
        REQUIRE(emb[l.meet(x, y)] == (emb[x] & emb[y]));
        REQUIRE(emb[l.join(x, y)] == (emb[x] | emb[y]));
      }
  }
}

TEST_CASE("lattice file parsing") {
  REQUIRE(parse_lattice_text("lattice 2\nleq 0 1\n").size() == 2);
  REQUIRE(parse_lattice_text("lattice 2\ntable meet\n0 0\n0 1\ntable join\n0 1\n1 1\n").size() == 2);
  REQUIRE(parse_lattice_text("downsets-of-poset 2\nleq 0 1\n").size() == 3);
  REQUIRE_THROWS_AS(parse_lattice_text("lattice 2\nleq 0 1\ntable meet\n0 0\n0 1\ntable join\n0 1\n1 1\n"),
                    syntax_error);
  REQUIRE_THROWS_AS(parse_lattice_text("lattice 2\nbogus\n"), syntax_error);
}

TEST_CASE("boolean algebra structure") {
  REQUIRE_THROWS_AS(BooleanAlgebra(heyting_from_lattice(chain_lattice(3))), invariant_error);
  BooleanAlgebra b = powerset_algebra(3);
  REQUIRE(b.atoms().size() == 3);
}
