#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>

#include "dualis/order.hpp"
#include "dualis/ring.hpp"
#include "dualis/util.hpp"

namespace dualis {

using PointMask = std::uint64_t;

// ---------------------------------------------------------------------------
// Algebra objects carried by structure sheaves: a tagged union of finite
// commutative rings and finite distributive lattices.  Both kinds expose two
// binary operations and two constants, which is all the sheaf machinery needs;
// homomorphisms preserve exactly these.
// ---------------------------------------------------------------------------

using AlgObj = std::variant<FinCommRing, DistLattice>;

struct AlgView {
  int n;
  const BinTable* op1;  // add / meet
  const BinTable* op2;  // mul / join
  int c0;               // zero / bot
  int c1;               // one / top
};

inline AlgView alg_view(const AlgObj& a) {
  if (const auto* r = std::get_if<FinCommRing>(&a))
    return {r->size(), &r->add_table(), &r->mul_table(), r->zero(), r->one()};
  const auto& l = std::get<DistLattice>(a);
  return {l.size(), &l.meet_table(), &l.join_table(), l.bot(), l.top()};
}

inline int alg_size(const AlgObj& a) { return alg_view(a).n; }
inline bool alg_same_kind(const AlgObj& a, const AlgObj& b) { return a.index() == b.index(); }
inline std::string alg_kind_name(const AlgObj& a) {
  return std::holds_alternative<FinCommRing>(a) ? "ring" : "lattice";
}

inline bool is_alg_hom(const AlgObj& src, const AlgObj& dst, const std::vector<int>& m) {
  if (!alg_same_kind(src, dst)) return false;
  if (std::holds_alternative<FinCommRing>(src))
    return is_ring_hom(std::get<FinCommRing>(src), std::get<FinCommRing>(dst), m);
  return is_lattice_hom(std::get<DistLattice>(src), std::get<DistLattice>(dst), m);
}

inline std::optional<std::vector<int>> find_alg_iso(const AlgObj& a, const AlgObj& b) {
  if (!alg_same_kind(a, b)) return std::nullopt;
  if (std::holds_alternative<FinCommRing>(a))
    return find_ring_iso(std::get<FinCommRing>(a), std::get<FinCommRing>(b));
  return find_lattice_iso(std::get<DistLattice>(a), std::get<DistLattice>(b));
}

/// Builds an algebra of the same kind as `sample` from raw tables, running the
/// full axiom checks of that kind.
inline AlgObj make_alg_like(const AlgObj& sample, BinTable op1, BinTable op2, int c0, int c1) {
  if (std::holds_alternative<FinCommRing>(sample))
    return FinCommRing(std::move(op1), std::move(op2), c0, c1);
  DistLattice l(std::move(op1), std::move(op2));
  if (l.bot() != c0 || l.top() != c1)
    throw verify_error("constructed lattice has unexpected bounds");
  return l;
}

// ---------------------------------------------------------------------------
// FinTopSpace: finite space presented by a basis.  Basic opens are deduplicated
// by point set, keeping the first key.  The basis must cover the space and be
// closed under intersection up to unions of basics.
// ---------------------------------------------------------------------------

class FinTopSpace {
 public:
  FinTopSpace(int npoints, const std::vector<std::pair<std::string, PointMask>>& basics)
      : npoints_(npoints) {
    if (npoints < 0 || npoints > 62) throw invariant_error("spaces limited to 62 points");
    const PointMask all = npoints == 0 ? 0 : ((PointMask{1} << npoints) - 1);
    for (const auto& [key, mask] : basics) {
      if (mask & ~all) throw invariant_error("basic open mentions a missing point");
      if (find_basic(mask) < 0) {
        keys_.push_back(key);
        basis_.push_back(mask);
      }
    }
    PointMask covered = 0;
    for (PointMask b : basis_) covered |= b;
    if (covered != all) throw invariant_error("basis does not cover the space");
    for (std::size_t i = 0; i < basis_.size(); ++i)
      for (std::size_t j = i; j < basis_.size(); ++j) {
        const PointMask inter = basis_[i] & basis_[j];
        PointMask u = 0;
        for (PointMask b : basis_)
          if ((b & ~inter) == 0) u |= b;
        if (u != inter)
          throw invariant_error("intersection of basics " + keys_[i] + " and " + keys_[j] +
                                " is not a union of basics");
      }
  }

  int points() const { return npoints_; }
  int basic_count() const { return (int)basis_.size(); }
  PointMask basic(int i) const { return basis_[i]; }
  const std::string& key(int i) const { return keys_[i]; }

  int find_basic(PointMask m) const {
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] == m) return (int)i;
    return -1;
  }

  /// Index of the minimal basic open containing p; it is the intersection of
  /// all basic opens containing p, which for a valid basis is itself basic.
  int minimal_open(int p) const {
    PointMask m = npoints_ == 0 ? 0 : ((PointMask{1} << npoints_) - 1);
    for (PointMask b : basis_)
      if (b >> p & 1) m &= b;
    int i = find_basic(m);
    if (i < 0) throw verify_error("minimal open neighborhood is not basic");
    return i;
  }

  /// The full open-set lattice: all unions of basic opens (including the empty union).
  std::vector<PointMask> opens() const {
    if (npoints_ > 20) throw budget_error("open-set enumeration limited to 20 points");
    std::vector<PointMask> out{0};
    for (PointMask b : basis_) {
      std::size_t sz = out.size();
      for (std::size_t i = 0; i < sz; ++i) {
        PointMask u = out[i] | b;
        bool fresh = true;
        for (PointMask o : out)
          if (o == u) {
            fresh = false;
            break;
          }
        if (fresh) out.push_back(u);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int npoints_;
  std::vector<std::string> keys_;
  std::vector<PointMask> basis_;
};

// ---------------------------------------------------------------------------
// StructPresheaf: basis-indexed presheaf of algebras.  Sections exist for all
// nonempty basics; the empty basic (when present) carries none, since the
// would-be section there is the degenerate one-element algebra.
// ---------------------------------------------------------------------------

class StructPresheaf {
 public:
  StructPresheaf(FinTopSpace space, std::vector<std::optional<AlgObj>> sections,
                 std::map<std::pair<int, int>, std::vector<int>> res)
      : space_(std::move(space)), sections_(std::move(sections)), res_(std::move(res)) {
    const int nb = space_.basic_count();
    if ((int)sections_.size() != nb) throw invariant_error("one section per basic open required");
    const AlgObj* sample = nullptr;
    for (int i = 0; i < nb; ++i) {
      if (space_.basic(i) == 0) {
        if (sections_[i]) throw invariant_error("no section allowed over the empty basic open");
        continue;
      }
      if (!sections_[i]) throw invariant_error("missing section over " + space_.key(i));
      if (sample && !alg_same_kind(*sample, *sections_[i]))
        throw invariant_error("sections mix algebra kinds");
      if (!sample) sample = &*sections_[i];
    }
    for (int i = 0; i < nb; ++i) {
      if (space_.basic(i) == 0) continue;
      res_[{i, i}] = identity_map(alg_size(*sections_[i]));
      for (int j = 0; j < nb; ++j) {
        if (i == j || space_.basic(j) == 0) continue;
        if ((space_.basic(j) & ~space_.basic(i)) != 0) continue;  // j not inside i
        auto it = res_.find({i, j});
        if (it == res_.end())
          throw invariant_error("missing restriction " + space_.key(i) + " -> " + space_.key(j));
        if (!is_alg_hom(*sections_[i], *sections_[j], it->second))
          throw invariant_error("restriction " + space_.key(i) + " -> " + space_.key(j) +
                                " is not a homomorphism");
      }
    }
    // functoriality along nested basics
    for (const auto& [ij, mij] : res_) {
      auto [i, j] = ij;
      for (const auto& [jk, mjk] : res_) {
        if (jk.first != j) continue;
        const int k = jk.second;
        const auto& mik = res_.at({i, k});
        for (int e = 0; e < (int)mij.size(); ++e)
          if (mjk[mij[e]] != mik[e])
            throw invariant_error("restrictions do not compose: " + space_.key(i) + " -> " +
                                  space_.key(j) + " -> " + space_.key(k));
      }
    }
  }

  const FinTopSpace& space() const { return space_; }
  const AlgObj& section(int basic) const { return *sections_[basic]; }
  bool has_section(int basic) const { return sections_[basic].has_value(); }
  const std::vector<int>& restriction(int from, int to) const { return res_.at({from, to}); }

  static std::vector<int> identity_map(int n) {
    std::vector<int> id(n);
    for (int i = 0; i < n; ++i) id[i] = i;
    return id;
  }

 private:
  FinTopSpace space_;
  std::vector<std::optional<AlgObj>> sections_;
  std::map<std::pair<int, int>, std::vector<int>> res_;
};

// ---------------------------------------------------------------------------
// Sheaf condition
// ---------------------------------------------------------------------------

struct SheafCheck {
  bool ok = true;
  long covers_checked = 0;
  std::string witness;  // first failing cover, when not ok
};

namespace detail {

/// Sections over U-as-covered: compatible families over the given cover.
/// Families agree on every nonempty basic inside each pairwise intersection.
inline std::vector<std::vector<int>> compatible_families(const StructPresheaf& f,
                                                         const std::vector<int>& cover,
                                                         std::uint64_t budget) {
  const FinTopSpace& x = f.space();
  std::vector<std::vector<int>> fams{{}};
  for (std::size_t t = 0; t < cover.size(); ++t) {
    std::vector<std::vector<int>> next;
    const int vt = cover[t];
    for (const auto& fam : fams)
      for (int e = 0; e < alg_size(f.section(vt)); ++e) {
        bool ok = true;
        for (std::size_t s = 0; s < t && ok; ++s) {
          const int vs = cover[s];
          const PointMask inter = x.basic(vs) & x.basic(vt);
          for (int z = 0; z < x.basic_count() && ok; ++z) {
            if (x.basic(z) == 0 || (x.basic(z) & ~inter) != 0) continue;
            if (f.restriction(vs, z)[fam[s]] != f.restriction(vt, z)[e]) ok = false;
          }
        }
        if (!ok) continue;
        next.push_back(fam);
        next.back().push_back(e);
        if (next.size() > budget) throw budget_error("compatible-family enumeration exceeded budget");
      }
    fams = std::move(next);
  }
  return fams;
}

}  // namespace detail

/// Equalizer condition over every finite basic cover of every basic open:
/// a family of sections agreeing on pairwise intersections glues to a unique
/// section.  Checking antichain covers suffices: adding a basic V contained in
/// a cover member W forces the section over V by compatibility, so redundant
/// covers follow from their maximal members.
inline SheafCheck check_sheaf(const StructPresheaf& f) {
  const FinTopSpace& x = f.space();
  SheafCheck out;
  const std::uint64_t budget = search_budget();
  for (int u = 0; u < x.basic_count(); ++u) {
    if (x.basic(u) == 0) continue;
    std::vector<int> cands;
    for (int v = 0; v < x.basic_count(); ++v)
      if (x.basic(v) != 0 && (x.basic(v) & ~x.basic(u)) == 0) cands.push_back(v);
    const int k = (int)cands.size();
    if (k > 24) throw budget_error("cover enumeration limited to 24 basics below an open");
    for (std::uint32_t sel = 1; sel < (1u << k); ++sel) {
      std::vector<int> cover;
      PointMask un = 0;
      for (int i = 0; i < k; ++i)
        if (sel >> i & 1) {
          cover.push_back(cands[i]);
          un |= x.basic(cands[i]);
        }
      if (un != x.basic(u)) continue;
      bool antichain = true;
      for (std::size_t i = 0; i < cover.size() && antichain; ++i)
        for (std::size_t j = 0; j < cover.size(); ++j)
          if (i != j && (x.basic(cover[i]) & ~x.basic(cover[j])) == 0) {
            antichain = false;
            break;
          }
      if (!antichain) continue;
      ++out.covers_checked;
      auto fams = detail::compatible_families(f, cover, budget);
      // glue: the canonical map F(U) -> families must be a bijection
      const int nu = alg_size(f.section(u));
      std::vector<int> hit(fams.size(), -1);
      bool ok = (int)fams.size() >= nu;
      for (int e = 0; e < nu && ok; ++e) {
        std::vector<int> img(cover.size());
        for (std::size_t t = 0; t < cover.size(); ++t) img[t] = f.restriction(u, cover[t])[e];
        auto it = std::find(fams.begin(), fams.end(), img);
        if (it == fams.end()) {
          out.witness = "restriction of a section over " + x.key(u) + " is not compatible";
          ok = false;
        } else {
          int idx = (int)(it - fams.begin());
          if (hit[idx] >= 0) {
            out.witness = "sections " + std::to_string(hit[idx]) + " and " + std::to_string(e) +
                          " over " + x.key(u) + " agree on the cover (separation fails)";
            ok = false;
          }
          hit[idx] = e;
        }
      }
      if (ok && (int)fams.size() != nu) {
        out.witness = "a compatible family over " + x.key(u) + " does not glue";
        ok = false;
      }
      if (!ok) {
        std::vector<std::string> ks;
        for (int v : cover) ks.push_back(x.key(v));
        out.witness += " [cover " + join(ks, " ") + "]";
        out.ok = false;
        return out;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stalks
// ---------------------------------------------------------------------------

struct Stalk {
  int point;
  int basic;       // index of the minimal basic open around the point
  AlgObj algebra;  // the section there
  std::map<int, std::vector<int>> cocone;  // basic neighborhood -> map into the stalk
};

inline Stalk stalk_at(const StructPresheaf& f, int p) {
  const FinTopSpace& x = f.space();
  const int u = x.minimal_open(p);
  Stalk st{p, u, f.section(u), {}};
  for (int v = 0; v < x.basic_count(); ++v) {
    if (!(x.basic(v) >> p & 1)) continue;
    st.cocone[v] = f.restriction(v, u);
  }
  // cocone compatibility: maps commute with restrictions between neighborhoods
  for (const auto& [v, mv] : st.cocone)
    for (const auto& [w, mw] : st.cocone) {
      if ((x.basic(w) & ~x.basic(v)) != 0) continue;
      const auto& r = f.restriction(v, w);
      for (int e = 0; e < (int)mv.size(); ++e)
        if (mw[r[e]] != mv[e]) throw verify_error("stalk cocone does not commute");
    }
  return st;
}

/// Explicit filtered-colimit stalk: disjoint union of sections over basic
/// neighborhoods of p, modulo agreement on a smaller neighborhood.  Kept as an
/// independent oracle for stalk_at.
struct ColimitStalk {
  AlgObj algebra;
  std::vector<int> canonical;  // F(minimal_open(p)) -> colimit classes
  bool matches_minimal;        // canonical map is a bijective homomorphism
};

inline ColimitStalk colimit_stalk(const StructPresheaf& f, int p) {
  const FinTopSpace& x = f.space();
  std::vector<std::pair<int, int>> nodes;  // (basic index, element)
  for (int v = 0; v < x.basic_count(); ++v)
    if (x.basic(v) >> p & 1)
      for (int e = 0; e < alg_size(f.section(v)); ++e) nodes.emplace_back(v, e);
  auto common = [&](int v, int w) {  // some basic around p inside both
    for (int z = 0; z < x.basic_count(); ++z)
      if ((x.basic(z) >> p & 1) && (x.basic(z) & ~(x.basic(v) & x.basic(w))) == 0) return z;
    throw verify_error("no common basic neighborhood");
  };
  auto related = [&](const std::pair<int, int>& a, const std::pair<int, int>& b) {
    for (int z = 0; z < x.basic_count(); ++z) {
      if (!(x.basic(z) >> p & 1)) continue;
      if ((x.basic(z) & ~(x.basic(a.first) & x.basic(b.first))) != 0) continue;
      if (f.restriction(a.first, z)[a.second] == f.restriction(b.first, z)[b.second]) return true;
    }
    return false;
  };
  std::vector<int> cls(nodes.size(), -1);
  std::vector<int> reps;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t c = 0; c < reps.size(); ++c)
      if (related(nodes[i], nodes[reps[c]])) {
        cls[i] = (int)c;
        break;
      }
    if (cls[i] < 0) {
      cls[i] = (int)reps.size();
      reps.push_back((int)i);
    }
  }
  const int m = (int)reps.size();
  auto node_index = [&](int v, int e) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].first == v && nodes[i].second == e) return (int)i;
    throw verify_error("missing colimit node");
  };
  BinTable op1 = BinTable::filled(m), op2 = BinTable::filled(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      auto [v, e] = nodes[reps[a]];
      auto [w, g] = nodes[reps[b]];
      const int z = common(v, w);
      const AlgView av = alg_view(f.section(z));
      const int ez = f.restriction(v, z)[e], gz = f.restriction(w, z)[g];
      op1.at(a, b) = cls[node_index(z, (*av.op1)(ez, gz))];
      op2.at(a, b) = cls[node_index(z, (*av.op2)(ez, gz))];
    }
  const int u = x.minimal_open(p);
  const AlgView uv = alg_view(f.section(u));
  ColimitStalk out{make_alg_like(f.section(u), std::move(op1), std::move(op2),
                                 cls[node_index(u, uv.c0)], cls[node_index(u, uv.c1)]),
                   {}, true};
  out.canonical.resize(uv.n);
  for (int e = 0; e < uv.n; ++e) out.canonical[e] = cls[node_index(u, e)];
  std::vector<char> hit(m, 0);
  for (int v : out.canonical) hit[v] = 1;
  out.matches_minimal = is_alg_hom(f.section(u), out.algebra, out.canonical) &&
                        (int)out.canonical.size() == m &&
                        std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
  return out;
}

// ---------------------------------------------------------------------------
// Global sections
// ---------------------------------------------------------------------------

struct GlobalSections {
  AlgObj algebra;                          // the equalizer, as an algebra
  std::vector<int> cover;                  // basic indices of the canonical cover
  std::vector<std::vector<int>> families;  // element -> compatible family over the cover
};

/// Sections over the whole space: the equalizer of the product of sections
/// over the maximal basics along restrictions to pairwise intersections.
inline GlobalSections global_sections(const StructPresheaf& f, bool require_sheaf = true) {
  if (require_sheaf) {
    SheafCheck c = check_sheaf(f);
    if (!c.ok) throw invariant_error("presheaf is not a sheaf: " + c.witness);
  }
  const FinTopSpace& x = f.space();
  std::vector<int> cover;
  for (int v = 0; v < x.basic_count(); ++v) {
    if (x.basic(v) == 0) continue;
    bool maximal = true;
    for (int w = 0; w < x.basic_count(); ++w)
      if (w != v && x.basic(w) != x.basic(v) && (x.basic(v) & ~x.basic(w)) == 0) {
        maximal = false;
        break;
      }
    if (maximal) cover.push_back(v);
  }
  auto fams = detail::compatible_families(f, cover, search_budget());
  std::sort(fams.begin(), fams.end());
  const int m = (int)fams.size();
  auto fam_index = [&](const std::vector<int>& fam) {
    auto it = std::lower_bound(fams.begin(), fams.end(), fam);
    if (it == fams.end() || *it != fam) throw verify_error("componentwise image is not compatible");
    return (int)(it - fams.begin());
  };
  BinTable op1 = BinTable::filled(m), op2 = BinTable::filled(m);
  std::vector<int> f0(cover.size()), f1(cover.size());
  for (std::size_t t = 0; t < cover.size(); ++t) {
    const AlgView av = alg_view(f.section(cover[t]));
    f0[t] = av.c0;
    f1[t] = av.c1;
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      std::vector<int> r1(cover.size()), r2(cover.size());
      for (std::size_t t = 0; t < cover.size(); ++t) {
        const AlgView av = alg_view(f.section(cover[t]));
        r1[t] = (*av.op1)(fams[a][t], fams[b][t]);
        r2[t] = (*av.op2)(fams[a][t], fams[b][t]);
      }
      op1.at(a, b) = fam_index(r1);
      op2.at(a, b) = fam_index(r2);
    }
  const AlgObj& sample = f.section(cover[0]);
  GlobalSections out{make_alg_like(sample, std::move(op1), std::move(op2), fam_index(f0), fam_index(f1)),
                     cover, fams};
  return out;
}

// ---------------------------------------------------------------------------
// Global sections into the product of stalks
// ---------------------------------------------------------------------------

struct StalkProduct {
  AlgObj product;
  std::vector<AlgObj> stalks;       // per point
  std::vector<int> radix;           // stalk sizes, for decoding tuples
};

inline StalkProduct stalk_product(const StructPresheaf& f) {
  const FinTopSpace& x = f.space();
  std::vector<AlgObj> stalks;
  std::vector<int> radix;
  std::uint64_t total = 1;
  for (int p = 0; p < x.points(); ++p) {
    stalks.push_back(stalk_at(f, p).algebra);
    radix.push_back(alg_size(stalks.back()));
    total *= radix.back();
    if (total > 200000) throw budget_error("stalk product too large");
  }
  const int m = (int)total;
  BinTable op1 = BinTable::filled(m), op2 = BinTable::filled(m);
  auto comp = [&](int code, int t) {
    for (int i = 0; i < t; ++i) code /= radix[i];
    return code % radix[t];
  };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      int v1 = 0, v2 = 0, mult = 1;
      for (std::size_t t = 0; t < radix.size(); ++t) {
        const AlgView av = alg_view(stalks[t]);
        v1 += (*av.op1)(comp(a, (int)t), comp(b, (int)t)) * mult;
        v2 += (*av.op2)(comp(a, (int)t), comp(b, (int)t)) * mult;
        mult *= radix[t];
      }
      op1.at(a, b) = v1;
      op2.at(a, b) = v2;
    }
  int c0 = 0, c1 = 0, mult = 1;
  for (std::size_t t = 0; t < radix.size(); ++t) {
    const AlgView av = alg_view(stalks[t]);
    c0 += av.c0 * mult;
    c1 += av.c1 * mult;
    mult *= radix[t];
  }
  AlgObj product = make_alg_like(stalks[0], std::move(op1), std::move(op2), c0, c1);
  return StalkProduct{std::move(product), std::move(stalks), std::move(radix)};
}

struct SubdirectEmbedding {
  StalkProduct target;
  std::vector<int> map;  // global section -> tuple code in the product
  bool injective;
  bool hom;
};

/// The canonical map from global sections into the product of all stalks.
inline SubdirectEmbedding sections_into_stalks(const StructPresheaf& f, const GlobalSections& g) {
  const FinTopSpace& x = f.space();
  SubdirectEmbedding out{stalk_product(f), {}, true, true};
  for (const auto& fam : g.families) {
    int code = 0, mult = 1;
    for (int p = 0; p < x.points(); ++p) {
      const int u = x.minimal_open(p);
      int val = -1;
      for (std::size_t t = 0; t < g.cover.size(); ++t) {
        if (!(x.basic(g.cover[t]) >> p & 1)) continue;
        int v = f.restriction(g.cover[t], u)[fam[t]];
        if (val < 0)
          val = v;
        else if (val != v)
          throw verify_error("family restricts inconsistently to a stalk");
      }
      if (val < 0) throw verify_error("cover misses a point");
      code += val * mult;
      mult *= out.target.radix[p];
    }
    out.map.push_back(code);
  }
  for (std::size_t i = 0; i < out.map.size() && out.injective; ++i)
    for (std::size_t j = i + 1; j < out.map.size(); ++j)
      if (out.map[i] == out.map[j]) {
        out.injective = false;
        break;
      }
  out.hom = is_alg_hom(g.algebra, out.target.product, out.map);
  return out;
}

}  // namespace dualis
