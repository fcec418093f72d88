#include <catch2/catch_amalgamated.hpp>

#include "dualis/corpus.hpp"
#include "dualis/ring_spec.hpp"

using namespace dualis;

namespace {

// independent oracle: enumerate all subsets and filter by the ideal axioms
std::vector<Bits> ideals_by_subset_scan(const FinCommRing& r) {
  std::vector<Bits> out;
  REQUIRE(r.size() <= 12);
  for (std::uint32_t mask = 0; mask < (1u << r.size()); ++mask) {
    Bits b(r.size());
    for (int i = 0; i < r.size(); ++i)
      if (mask >> i & 1) b.set(i);
    if (is_ideal(r, b)) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("ring construction validates the axioms with witnesses") {
  REQUIRE_NOTHROW(zmod(6));
  BinTable add = BinTable::filled(2), mul = BinTable::filled(2);
  add.at(0, 1) = 1; add.at(1, 0) = 1;
  mul.at(1, 1) = 1;
  REQUIRE_NOTHROW(FinCommRing(add, mul, 0, 1));  // this is Z/2
  mul.at(0, 0) = 1;  // breaks distributivity and more
  REQUIRE_THROWS_WITH(FinCommRing(add, mul, 0, 1), Catch::Matchers::ContainsSubstring("not a ring"));
  REQUIRE_THROWS_AS(zmod(1), invariant_error);
}

TEST_CASE("locality of small rings") {
  REQUIRE(is_local(zmod(4)));
  REQUIRE_FALSE(is_local(zmod(6)));
  REQUIRE(is_local(zmod(5)));
  REQUIRE(is_local(corpus::f4()));
  REQUIRE(is_local(corpus::z4_dual_numbers()));
  REQUIRE_FALSE(is_local(product_ring(zmod(2), zmod(2))));
}

TEST_CASE("ideal enumeration by closure-BFS matches the subset-scan oracle") {
  SECTION("fields have exactly the two trivial ideals") {
    REQUIRE(ideals(zmod(5)).size() == 2);
    REQUIRE(ideals(corpus::f4()).size() == 2);
  }
  SECTION("Z/6 has four ideals") {
    auto got = ideals(zmod(6));
    REQUIRE(got.size() == 4);
    std::vector<Bits> bits;
    for (const auto& i : got) bits.push_back(i.members);
    std::sort(bits.begin(), bits.end());
    REQUIRE(bits == ideals_by_subset_scan(zmod(6)));
  }
  SECTION("Z/12 has six ideals, one per divisor") {
    auto got = ideals(zmod(12));
    REQUIRE(got.size() == 6);
    std::vector<Bits> bits;
    for (const auto& i : got) bits.push_back(i.members);
    std::sort(bits.begin(), bits.end());
    REQUIRE(bits == ideals_by_subset_scan(zmod(12)));
  }
}

TEST_CASE("prime and maximal spectra") {
  SECTION("Z/6 has the discrete two-point spectrum") {
    RingSpectrum s = prime_spectrum(zmod(6));
    REQUIRE(s.space.points() == 2);
    std::vector<std::vector<int>> primes;
    for (const Bits& p : s.primes) primes.push_back(p.elems());
    std::sort(primes.begin(), primes.end());
    REQUIRE(primes == std::vector<std::vector<int>>{{0, 2, 4}, {0, 3}});
    // discrete: every singleton is open
    REQUIRE(s.space.find_basic(0b01) >= 0);
    REQUIRE(s.space.find_basic(0b10) >= 0);
  }
  SECTION("a field has the one-point spectrum at (0)") {
    RingSpectrum s = prime_spectrum(zmod(7));
    REQUIRE(s.space.points() == 1);
    REQUIRE(s.primes[0].elems() == std::vector<int>{0});
  }
  SECTION("(0) is not prime in Z/4") {
    RingSpectrum s = prime_spectrum(zmod(4));
    REQUIRE(s.space.points() == 1);
    REQUIRE(s.primes[0].elems() == std::vector<int>{0, 2});
  }
  SECTION("max spectrum of Z/12") {
    RingSpectrum s = max_spectrum(zmod(12));
    REQUIRE(s.space.points() == 2);
  }
  SECTION("max spectrum of a local ring is the whole prime spectrum") {
    REQUIRE(max_spectrum(zmod(4)).space.points() == prime_spectrum(zmod(4)).space.points());
  }
}

TEST_CASE("localization") {
  FinCommRing z6 = zmod(6);
  SECTION("localizing at the units changes nothing") {
    Localization l = localize(z6, z6.units());
    REQUIRE(l.result.size() == 6);
    std::vector<char> hit(6, 0);
    for (int v : l.canonical) hit[v] = 1;
    for (char c : hit) REQUIRE(c == 1);
  }
  SECTION("Z/6 localized at powers of 2") {
    Localization l = localize(z6, multiplicative_closure(z6, {2}));
    REQUIRE(l.denominators == std::vector<int>{1, 2, 4});
    REQUIRE(l.result.size() == 3);
    REQUIRE(find_ring_iso(l.result, zmod(3)).has_value());
  }
  SECTION("Z/6 localized at the complement of (2)") {
    Localization l = localize(z6, {1, 3, 5});
    REQUIRE(l.result.size() == 2);
    REQUIRE(find_ring_iso(l.result, zmod(2)).has_value());
  }
  SECTION("input validation") {
    REQUIRE_THROWS_AS(localize(z6, {1, 2}), invariant_error);     // not closed
    REQUIRE_THROWS_AS(localize(z6, {3, 5}), invariant_error);     // missing 1... {3,5}: 3*5=15=3, 3*3=3, 5*5=1 -> needs 1
    REQUIRE_THROWS_AS(localize(z6, {0, 1}), invariant_error);     // contains 0
  }
  SECTION("the canonical map is an isomorphism exactly when S has only units") {
    for (int gen = 1; gen < 12; ++gen) {
      FinCommRing r = zmod(12);
      std::vector<int> s = multiplicative_closure(r, {gen});
      if (std::find(s.begin(), s.end(), 0) != s.end()) continue;
      Localization l = localize(r, s);
      bool units_only = true;
      for (int x : s) units_only = units_only && r.is_unit(x);
      std::vector<char> hit(l.result.size(), 0);
      for (int v : l.canonical) hit[v] = 1;
      bool bijective = l.result.size() == r.size() &&
                       std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
      REQUIRE(bijective == units_only);
    }
  }
}

TEST_CASE("structure sheaf sections") {
  SECTION("a field carries the constant sheaf on one point") {
    RingSheaf rs = structure_sheaf(zmod(5));
    REQUIRE(rs.spectrum.space.points() == 1);
    int top = rs.spectrum.space.find_basic(0b1);
    REQUIRE(alg_size(rs.sheaf.section(top)) == 5);
  }
  SECTION("Z/6 sections: R(B_2) = Z/3, R(B_3) = Z/2, R(B_1) = Z/6") {
    RingSheaf rs = structure_sheaf(zmod(6));
    auto section_at = [&](int f) -> const FinCommRing& {
      PointMask m = 0;
      for (int p = 0; p < rs.spectrum.space.points(); ++p)
        if (!rs.spectrum.primes[p].test(f)) m |= PointMask{1} << p;
      return std::get<FinCommRing>(rs.sheaf.section(rs.spectrum.space.find_basic(m)));
    };
    REQUIRE(find_ring_iso(section_at(2), zmod(3)).has_value());
    REQUIRE(find_ring_iso(section_at(3), zmod(2)).has_value());
    REQUIRE(find_ring_iso(section_at(1), zmod(6)).has_value());
  }
  SECTION("Z/12 sections: R(B_2) = Z/3 and R(B_3) = Z/4") {
    RingSheaf rs = structure_sheaf(zmod(12));
    auto section_at = [&](int f) -> const FinCommRing& {
      PointMask m = 0;
      for (int p = 0; p < rs.spectrum.space.points(); ++p)
        if (!rs.spectrum.primes[p].test(f)) m |= PointMask{1} << p;
      return std::get<FinCommRing>(rs.sheaf.section(rs.spectrum.space.find_basic(m)));
    };
    REQUIRE(find_ring_iso(section_at(2), zmod(3)).has_value());
    REQUIRE(find_ring_iso(section_at(3), zmod(4)).has_value());
  }
  SECTION("the structure sheaf passes the sheaf condition") {
    REQUIRE(structure_sheaf(zmod(30)).sheaf_check.ok);
  }
}

TEST_CASE("verify_representation certificates") {
  SECTION("fields are their own single stalk") {
    RingRepReport rep = verify_representation(zmod(3));
    REQUIRE(rep.stalks.size() == 1);
    REQUIRE(rep.gamma_size == 3);
    REQUIRE(rep.iso.has_value());
  }
  SECTION("Z/12 decomposes into Z/4 and Z/3") {
    RingRepReport rep = verify_representation(zmod(12));
    std::vector<int> sizes;
    for (const auto& s : rep.stalks) sizes.push_back(s.stalk_size);
    std::sort(sizes.begin(), sizes.end());
    REQUIRE(sizes == std::vector<int>{3, 4});
    REQUIRE(rep.gamma_size == 12);
    REQUIRE(rep.iso.has_value());
    REQUIRE(rep.embedding_injective);
    for (const auto& s : rep.stalks) {
      REQUIRE(s.local);
      REQUIRE(s.matches_minimal_open);
      REQUIRE(s.matches_colimit);
    }
  }
  SECTION("Z/2 x Z/2 has two stalks of order two") {
    RingRepReport rep = verify_representation(product_ring(zmod(2), zmod(2)));
    REQUIRE(rep.stalks.size() == 2);
    for (const auto& s : rep.stalks) REQUIRE(s.stalk_size == 2);
    REQUIRE(rep.gamma_size == 4);
  }
  SECTION("the CRT oracle: Gamma of Z/6 is isomorphic to Z/2 x Z/3") {
    RingSheaf rs = structure_sheaf(zmod(6));
    GlobalSections g = global_sections(rs.sheaf, false);
    REQUIRE(find_ring_iso(std::get<FinCommRing>(g.algebra),
                          product_ring(zmod(2), zmod(3)))
                .has_value());
  }
  SECTION("the stalk of the Z/6 sheaf at the point (2) is the two-element ring") {
    RingSheaf rs = structure_sheaf(zmod(6));
    for (int p = 0; p < rs.spectrum.space.points(); ++p) {
      Stalk st = stalk_at(rs.sheaf, p);
      const bool at_two = rs.spectrum.primes[p].test(2);
      REQUIRE(alg_size(st.algebra) == (at_two ? 2 : 3));
    }
  }
  SECTION("Gamma agrees with the section over the whole space, which is basic") {
    RingSheaf rs = structure_sheaf(zmod(10));
    GlobalSections g = global_sections(rs.sheaf, false);
    const PointMask all = (PointMask{1} << rs.spectrum.space.points()) - 1;
    const int whole = rs.spectrum.space.find_basic(all);
    REQUIRE(whole >= 0);
    REQUIRE(find_ring_iso(std::get<FinCommRing>(g.algebra),
                          std::get<FinCommRing>(rs.sheaf.section(whole)))
                .has_value());
  }
}

TEST_CASE("iso search sanity") {
  REQUIRE(find_ring_iso(zmod(6), product_ring(zmod(2), zmod(3))).has_value());
  REQUIRE_FALSE(find_ring_iso(zmod(4), product_ring(zmod(2), zmod(2))).has_value());
  REQUIRE_FALSE(find_ring_iso(corpus::f4(), zmod(4)).has_value());
  auto iso = find_ring_iso(zmod(6), zmod(6));
  REQUIRE(iso.has_value());
  REQUIRE(is_ring_hom(zmod(6), zmod(6), *iso));
}
