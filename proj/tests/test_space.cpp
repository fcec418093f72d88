#include <catch2/catch_amalgamated.hpp>

#include "dualis/space.hpp"

using namespace dualis;

namespace {

AlgObj two() { return AlgObj{chain_lattice(2)}; }

FinTopSpace discrete2() {
  return FinTopSpace(2, {{"U0", 0b01}, {"U1", 0b10}, {"X", 0b11}});
}

FinTopSpace sierpinski() {
  // points: 0 = open point, 1 = closed point
  return FinTopSpace(2, {{"U", 0b01}, {"X", 0b11}});
}

std::vector<int> id_map(int n) { return StructPresheaf::identity_map(n); }

/// Constant presheaf with value L on every basic open (identity restrictions).
StructPresheaf constant_presheaf(const FinTopSpace& x, const AlgObj& value) {
  std::vector<std::optional<AlgObj>> sections(x.basic_count());
  std::map<std::pair<int, int>, std::vector<int>> res;
  for (int i = 0; i < x.basic_count(); ++i) {
    if (x.basic(i) == 0) continue;
    sections[i] = value;
    for (int j = 0; j < x.basic_count(); ++j)
      if (i != j && x.basic(j) != 0 && (x.basic(j) & ~x.basic(i)) == 0)
        res[{i, j}] = id_map(alg_size(value));
  }
  return StructPresheaf(x, std::move(sections), std::move(res));
}

}  // namespace

TEST_CASE("space invariants") {
  REQUIRE_THROWS_AS(FinTopSpace(2, {{"U", 0b01}}), invariant_error);  // misses a point
  // {0,1} and {1,2} intersect in {1}, which is not a union of basics
  REQUIRE_THROWS_AS(FinTopSpace(3, {{"A", 0b011}, {"B", 0b110}}), invariant_error);
  REQUIRE_NOTHROW(FinTopSpace(3, {{"A", 0b011}, {"B", 0b110}, {"C", 0b010}}));
}

TEST_CASE("minimal open neighborhoods") {
  FinTopSpace d2 = discrete2();
  REQUIRE(d2.basic(d2.minimal_open(0)) == 0b01);
  REQUIRE(d2.basic(d2.minimal_open(1)) == 0b10);
  FinTopSpace s = sierpinski();
  REQUIRE(s.basic(s.minimal_open(0)) == 0b01);
  REQUIRE(s.basic(s.minimal_open(1)) == 0b11);  // the closed point needs the whole space
  SECTION("the minimal open is contained in every basic neighborhood") {
    for (const FinTopSpace& x : {d2, s}) {
      for (int p = 0; p < x.points(); ++p) {
        PointMask m = x.basic(x.minimal_open(p));
        for (int i = 0; i < x.basic_count(); ++i)
          if (x.basic(i) >> p & 1) REQUIRE((m & ~x.basic(i)) == 0);
      }
    }
  }
}

TEST_CASE("open set enumeration") {
  REQUIRE(discrete2().opens().size() == 4);
  REQUIRE(sierpinski().opens().size() == 3);
}

TEST_CASE("sheaf condition on the discrete two-point space") {
  SECTION("the constant presheaf is not a sheaf: gluing gives the product") {
    StructPresheaf f = constant_presheaf(discrete2(), two());
    SheafCheck c = check_sheaf(f);
    REQUIRE_FALSE(c.ok);
    REQUIRE(c.witness.find("does not glue") != std::string::npos);
  }
  SECTION("assigning the product over the whole space fixes it") {
    FinTopSpace x = discrete2();
    DistLattice prod = downset_lattice(FinPoset(2, {})).lattice;  // 2 x 2
    // elements of prod are downset masks 0,1,2,3; projections are the bits
    std::vector<std::optional<AlgObj>> sections(3);
    int u0 = x.find_basic(0b01), u1 = x.find_basic(0b10), w = x.find_basic(0b11);
    sections[u0] = two();
    sections[u1] = two();
    sections[w] = AlgObj{prod};
    std::map<std::pair<int, int>, std::vector<int>> res;
    res[{w, u0}] = {0, 1, 0, 1};
    res[{w, u1}] = {0, 0, 1, 1};
    StructPresheaf f(x, std::move(sections), std::move(res));
    SheafCheck c = check_sheaf(f);
    REQUIRE(c.ok);
    REQUIRE(c.covers_checked >= 3);
    SECTION("global sections recover the product") {
      GlobalSections g = global_sections(f);
      REQUIRE(alg_size(g.algebra) == 4);
      SECTION("and embed into the product of the stalks") {
        SubdirectEmbedding e = sections_into_stalks(f, g);
        REQUIRE(e.injective);
        REQUIRE(e.hom);
        REQUIRE(alg_size(e.target.product) == 4);
      }
    }
  }
}

TEST_CASE("every presheaf on the Sierpinski space is a sheaf") {
  StructPresheaf f = constant_presheaf(sierpinski(), two());
  REQUIRE(check_sheaf(f).ok);
  SECTION("a non-homomorphic restriction is rejected at construction") {
    FinTopSpace x = sierpinski();
    std::vector<std::optional<AlgObj>> sections(2);
    sections[0] = two();
    sections[1] = two();
    std::map<std::pair<int, int>, std::vector<int>> res;
    res[{1, 0}] = {0, 0};  // collapses top, not a lattice hom
    REQUIRE_THROWS_AS(StructPresheaf(x, std::move(sections), std::move(res)), invariant_error);
  }
}

TEST_CASE("stalks") {
  SECTION("constant sheaf on a one-point space") {
    FinTopSpace pt(1, {{"X", 0b1}});
    StructPresheaf f = constant_presheaf(pt, two());
    Stalk s = stalk_at(f, 0);
    REQUIRE(alg_size(s.algebra) == 2);
    ColimitStalk c = colimit_stalk(f, 0);
    REQUIRE(c.matches_minimal);
    GlobalSections g = global_sections(f);
    REQUIRE(alg_size(g.algebra) == 2);
    SubdirectEmbedding e = sections_into_stalks(f, g);
    REQUIRE(e.injective);
    REQUIRE(e.map.size() == 2);
  }
  SECTION("stalks on the Sierpinski space pick the minimal-open section") {
    StructPresheaf f = constant_presheaf(sierpinski(), two());
    REQUIRE(stalk_at(f, 0).basic == f.space().minimal_open(0));
    REQUIRE(colimit_stalk(f, 0).matches_minimal);
    REQUIRE(colimit_stalk(f, 1).matches_minimal);
    SECTION("cocone maps commute with restrictions") {
      Stalk s = stalk_at(f, 0);
      REQUIRE(s.cocone.size() == 2);  // both basics contain the open point
    }
  }
}

TEST_CASE("functoriality violations are caught") {
  FinTopSpace x(2, {{"U", 0b01}, {"V", 0b10}, {"X", 0b11}});
  DistLattice prod = downset_lattice(FinPoset(2, {})).lattice;
  std::vector<std::optional<AlgObj>> sections(3);
  sections[x.find_basic(0b01)] = two();
  sections[x.find_basic(0b10)] = two();
  sections[x.find_basic(0b11)] = AlgObj{prod};
  std::map<std::pair<int, int>, std::vector<int>> res;
  // missing one restriction entirely
  res[{x.find_basic(0b11), x.find_basic(0b01)}] = {0, 1, 0, 1};
  REQUIRE_THROWS_AS(StructPresheaf(x, std::move(sections), std::move(res)), invariant_error);
}
