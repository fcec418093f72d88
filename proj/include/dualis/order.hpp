#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <utility>

#include "dualis/util.hpp"

namespace dualis {

// ---------------------------------------------------------------------------
// FinPoset
// ---------------------------------------------------------------------------

class FinPoset {
 public:
  /// Builds a poset on {0..n-1} from `leq` pairs (a,b) meaning a <= b.
  /// The reflexive-transitive closure is taken; antisymmetry is then required.
  FinPoset(int n, const std::vector<std::pair<int, int>>& pairs) : n_(n), leq_(n * n, 0) {
    if (n < 0) throw invariant_error("poset size must be nonnegative");
    for (int i = 0; i < n_; ++i) leq_[i * n_ + i] = 1;
    for (auto [a, b] : pairs) {
      if (a < 0 || a >= n_ || b < 0 || b >= n_) throw invariant_error("poset relation out of range");
      leq_[a * n_ + b] = 1;
    }
    // Warshall closure.
    for (int k = 0; k < n_; ++k)
      for (int i = 0; i < n_; ++i)
        if (leq_[i * n_ + k])
          for (int j = 0; j < n_; ++j)
            if (leq_[k * n_ + j]) leq_[i * n_ + j] = 1;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j)
        if (leq_[i * n_ + j] && leq_[j * n_ + i])
          throw invariant_error("poset relation is not antisymmetric: " + std::to_string(i) +
                                " and " + std::to_string(j));
  }

  int size() const { return n_; }
  bool leq(int a, int b) const { return leq_[a * n_ + b]; }

 private:
  int n_;
  std::vector<char> leq_;
};

// ---------------------------------------------------------------------------
// Lattice: finite lattice stored as explicit meet/join tables.
// The order is derived (x <= y iff x^y = x) and cross-checked against join.
// The degenerate one-element lattice (bot = top) is rejected.
// ---------------------------------------------------------------------------

class Lattice {
 public:
  Lattice(BinTable meet, BinTable join) : meet_(std::move(meet)), join_(std::move(join)) {
    validate();
  }

  /// Builds a lattice from an order relation; meets and joins must exist.
  static Lattice from_leq(int n, const std::vector<char>& leq) {
    auto le = [&](int a, int b) { return leq[a * n + b] != 0; };
    BinTable meet = BinTable::filled(n), join = BinTable::filled(n);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int glb = -1, lub = -1;
        for (int z = 0; z < n; ++z) {
          if (le(z, x) && le(z, y) && (glb < 0 || le(glb, z))) glb = z;
          if (le(x, z) && le(y, z) && (lub < 0 || le(z, lub))) lub = z;
        }
        if (glb < 0 || lub < 0)
          throw invariant_error("not a lattice: elements " + std::to_string(x) + "," +
                                std::to_string(y) + " have no " + (glb < 0 ? "meet" : "join"));
        // The candidates above are maximal/minimal among bounds; confirm they dominate.
        for (int z = 0; z < n; ++z) {
          if (le(z, x) && le(z, y) && !le(z, glb))
            throw invariant_error("not a lattice: elements " + std::to_string(x) + "," +
                                  std::to_string(y) + " have no meet");
          if (le(x, z) && le(y, z) && !le(lub, z))
            throw invariant_error("not a lattice: elements " + std::to_string(x) + "," +
                                  std::to_string(y) + " have no join");
        }
        meet.at(x, y) = glb;
        join.at(x, y) = lub;
      }
    return Lattice(std::move(meet), std::move(join));
  }

  int size() const { return meet_.n(); }
  int meet(int x, int y) const { return meet_(x, y); }
  int join(int x, int y) const { return join_(x, y); }
  bool leq(int x, int y) const { return meet_(x, y) == x; }
  int bot() const { return bot_; }
  int top() const { return top_; }

  const BinTable& meet_table() const { return meet_; }
  const BinTable& join_table() const { return join_; }

  friend bool operator==(const Lattice& a, const Lattice& b) {
    return a.meet_ == b.meet_ && a.join_ == b.join_;
  }

 private:
  void validate() {
    const int n = meet_.n();
    if (n == 0 || join_.n() != n) throw invariant_error("meet/join tables disagree on size");
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (meet_(x, y) < 0 || meet_(x, y) >= n || join_(x, y) < 0 || join_(x, y) >= n)
          throw invariant_error("operation table entry out of range");
    for (int x = 0; x < n; ++x) {
      if (meet_(x, x) != x || join_(x, x) != x) throw invariant_error("operation not idempotent");
      for (int y = 0; y < n; ++y) {
        if (meet_(x, y) != meet_(y, x) || join_(x, y) != join_(y, x))
          throw invariant_error("operation not commutative");
        // absorption ties the two tables together
        if (meet_(x, join_(x, y)) != x || join_(x, meet_(x, y)) != x)
          throw invariant_error("absorption fails at (" + std::to_string(x) + "," +
                                std::to_string(y) + ")");
        // cross-check the two derived orders
        if ((meet_(x, y) == x) != (join_(x, y) == y))
          throw invariant_error("meet/join tables induce different orders at (" +
                                std::to_string(x) + "," + std::to_string(y) + ")");
        for (int z = 0; z < n; ++z) {
          if (meet_(meet_(x, y), z) != meet_(x, meet_(y, z)) ||
              join_(join_(x, y), z) != join_(x, join_(y, z)))
            throw invariant_error("operation not associative");
        }
      }
    }
    bot_ = 0;
    top_ = 0;
    for (int x = 0; x < n; ++x) {
      bot_ = meet_(bot_, x);
      top_ = join_(top_, x);
    }
    for (int x = 0; x < n; ++x)
      if (meet_(bot_, x) != bot_ || join_(top_, x) != top_)
        throw invariant_error("no least/greatest element");
    if (bot_ == top_) throw invariant_error("degenerate lattice: bot = top");
  }

  BinTable meet_, join_;
  int bot_ = -1, top_ = -1;
};

/// Returns a violating triple (x,y,z) with x^(yvz) != (x^y)v(x^z), or nullopt
/// when the lattice is distributive.
inline std::optional<std::array<int, 3>> check_distributive(const Lattice& l) {
  const int n = l.size();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)))
          return std::array<int, 3>{x, y, z};
  return std::nullopt;
}

class DistLattice : public Lattice {
 public:
  explicit DistLattice(Lattice l) : Lattice(std::move(l)) {
    if (auto w = check_distributive(*this))
      throw invariant_error("lattice is not distributive; witness (" + std::to_string((*w)[0]) +
                            "," + std::to_string((*w)[1]) + "," + std::to_string((*w)[2]) + ")");
  }
  DistLattice(BinTable meet, BinTable join) : DistLattice(Lattice(std::move(meet), std::move(join))) {}
};

// ---------------------------------------------------------------------------
// Heyting and Boolean algebras
// ---------------------------------------------------------------------------

class HeytingAlgebra : public DistLattice {
 public:
  HeytingAlgebra(DistLattice l, BinTable impl) : DistLattice(std::move(l)), impl_(std::move(impl)) {
    const int n = size();
    if (impl_.n() != n) throw invariant_error("implication table has wrong size");
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y)
        if (impl_(x, y) < 0 || impl_(x, y) >= n)
          throw invariant_error("implication table entry out of range");
    // residuation: z <= x->y iff z^x <= y
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        const int i = impl_(x, y);
        for (int z = 0; z < n; ++z)
          if (leq(z, i) != leq(meet(z, x), y))
            throw invariant_error("residuation fails at (" + std::to_string(x) + "," +
                                  std::to_string(y) + "," + std::to_string(z) + ")");
      }
  }

  int impl(int x, int y) const { return impl_(x, y); }
  int neg(int x) const { return impl_(x, bot()); }
  const BinTable& impl_table() const { return impl_; }

 private:
  BinTable impl_;
};

/// Finite distributive lattices carry a unique Heyting structure:
/// x->y is the join of { z : z^x <= y }.
inline HeytingAlgebra heyting_from_lattice(const DistLattice& l) {
  const int n = l.size();
  BinTable impl = BinTable::filled(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int j = l.bot();
      for (int z = 0; z < n; ++z)
        if (l.leq(l.meet(z, x), y)) j = l.join(j, z);
      impl.at(x, y) = j;
    }
  return HeytingAlgebra(l, std::move(impl));
}

class BooleanAlgebra : public HeytingAlgebra {
 public:
  explicit BooleanAlgebra(HeytingAlgebra h) : HeytingAlgebra(std::move(h)) {
    for (int x = 0; x < size(); ++x)
      if (join(x, neg(x)) != top())
        throw invariant_error("excluded middle fails at element " + std::to_string(x));
  }

  int complement(int x) const { return neg(x); }

  /// Minimal nonzero elements.
  std::vector<int> atoms() const {
    std::vector<int> r;
    for (int a = 0; a < size(); ++a) {
      if (a == bot()) continue;
      bool minimal = true;
      for (int b = 0; b < size(); ++b)
        if (b != bot() && b != a && leq(b, a)) {
          minimal = false;
          break;
        }
      if (minimal) r.push_back(a);
    }
    return r;
  }
};

/// Powerset algebra on nbits generators; element i is the subset with mask i.
inline BooleanAlgebra powerset_algebra(int nbits) {
  if (nbits < 1 || nbits > 10) throw budget_error("powerset algebra size out of supported range");
  const int n = 1 << nbits;
  BinTable meet = BinTable::filled(n), join = BinTable::filled(n), impl = BinTable::filled(n);
  const int full = n - 1;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      meet.at(x, y) = x & y;
      join.at(x, y) = x | y;
      impl.at(x, y) = (~x | y) & full;
    }
  return BooleanAlgebra(HeytingAlgebra(DistLattice(std::move(meet), std::move(join)), std::move(impl)));
}

/// The n-element chain 0 < 1 < ... < n-1.
inline DistLattice chain_lattice(int n) {
  BinTable meet = BinTable::filled(n), join = BinTable::filled(n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      meet.at(x, y) = std::min(x, y);
      join.at(x, y) = std::max(x, y);
    }
  return DistLattice(std::move(meet), std::move(join));
}

// ---------------------------------------------------------------------------
// Filters and ideals
// ---------------------------------------------------------------------------

struct Filter {
  Bits members;
};
struct Ideal {
  Bits members;
};

inline bool is_filter(const Lattice& l, const Bits& f) {
  if (f.universe() != l.size() || f.none()) return false;
  auto in = [&](int x) { return f.test(x); };
  for (int x = 0; x < l.size(); ++x) {
    if (!in(x)) continue;
    for (int y = 0; y < l.size(); ++y) {
      if (l.leq(x, y) && !in(y)) return false;
      if (in(y) && !in(l.meet(x, y))) return false;
    }
  }
  return true;
}

inline bool is_prime_filter(const Lattice& l, const Bits& f) {
  if (!is_filter(l, f)) return false;
  if (!f.test(l.top()) || f.test(l.bot())) return false;
  for (int x = 0; x < l.size(); ++x)
    for (int y = 0; y < l.size(); ++y)
      if (f.test(l.join(x, y)) && !f.test(x) && !f.test(y)) return false;
  return true;
}

inline bool is_ideal(const Lattice& l, const Bits& i) {
  if (i.universe() != l.size() || i.none()) return false;
  for (int x = 0; x < l.size(); ++x) {
    if (!i.test(x)) continue;
    for (int y = 0; y < l.size(); ++y) {
      if (l.leq(y, x) && !i.test(y)) return false;
      if (i.test(y) && !i.test(l.join(x, y))) return false;
    }
  }
  return true;
}

inline bool is_prime_ideal(const Lattice& l, const Bits& i) {
  if (!is_ideal(l, i)) return false;
  if (!i.test(l.bot()) || i.test(l.top())) return false;
  for (int x = 0; x < l.size(); ++x)
    for (int y = 0; y < l.size(); ++y)
      if (i.test(l.meet(x, y)) && !i.test(x) && !i.test(y)) return false;
  return true;
}

inline Filter make_filter(const Lattice& l, const std::vector<int>& elems) {
  Bits b = Bits::of(l.size(), elems);
  if (!is_filter(l, b)) throw invariant_error("not a filter");
  return Filter{b};
}

/// Complete, duplicate-free enumeration of prime filters, by filtering all
/// upward-closed meet-closed subsets.  Feasible to |L| of about 20.
inline std::vector<Filter> prime_filters(const Lattice& l) {
  const int n = l.size();
  if (n > 24) throw budget_error("prime-filter enumeration limited to lattices with <= 24 elements");
  std::vector<std::uint32_t> up(n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (l.leq(x, y)) up[x] |= 1u << y;
  std::vector<Filter> out;
  const std::uint32_t all = (n == 32) ? ~0u : ((1u << n) - 1);
  for (std::uint32_t s = 1; s <= all; ++s) {
    // upward closed?
    std::uint32_t closure = 0;
    for (int x = 0; x < n; ++x)
      if (s >> x & 1) closure |= up[x];
    if (closure != s) continue;
    // meet closed, proper, and prime?
    bool ok = s >> l.top() & 1 && !(s >> l.bot() & 1);
    for (int x = 0; ok && x < n; ++x)
      if (s >> x & 1)
        for (int y = x; y < n; ++y)
          if ((s >> y & 1) && !(s >> l.meet(x, y) & 1)) {
            ok = false;
            break;
          }
    for (int x = 0; ok && x < n; ++x)
      for (int y = x; y < n; ++y)
        if ((s >> l.join(x, y) & 1) && !(s >> x & 1) && !(s >> y & 1)) {
          ok = false;
          break;
        }
    if (!ok) continue;
    Bits b(n);
    for (int x = 0; x < n; ++x)
      if (s >> x & 1) b.set(x);
    out.push_back(Filter{b});
  }
  return out;
}

inline std::vector<Ideal> prime_ideals(const Lattice& l) {
  std::vector<Ideal> out;
  for (const Filter& f : prime_filters(l)) out.push_back(Ideal{f.members.complement()});
  // complements of prime filters are exactly the prime ideals; keep that honest
  for (const Ideal& i : out)
    if (!is_prime_ideal(l, i.members)) throw verify_error("complement of a prime filter is not a prime ideal");
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphisms
// ---------------------------------------------------------------------------

struct LatticeHom {
  std::vector<int> map;  // source element -> target element
};

inline bool is_lattice_hom(const Lattice& src, const Lattice& dst, const std::vector<int>& m) {
  if ((int)m.size() != src.size()) return false;
  for (int x : m)
    if (x < 0 || x >= dst.size()) return false;
  if (m[src.bot()] != dst.bot() || m[src.top()] != dst.top()) return false;
  for (int x = 0; x < src.size(); ++x)
    for (int y = 0; y < src.size(); ++y)
      if (m[src.meet(x, y)] != dst.meet(m[x], m[y]) || m[src.join(x, y)] != dst.join(m[x], m[y]))
        return false;
  return true;
}

inline bool is_heyting_hom(const HeytingAlgebra& src, const HeytingAlgebra& dst,
                           const std::vector<int>& m) {
  if (!is_lattice_hom(src, dst, m)) return false;
  for (int x = 0; x < src.size(); ++x)
    for (int y = 0; y < src.size(); ++y)
      if (m[src.impl(x, y)] != dst.impl(m[x], m[y])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Filter quotients
// ---------------------------------------------------------------------------

struct LatticeQuotient {
  DistLattice lattice;
  LatticeHom hom;  // surjective; class of each source element
};

struct HeytingQuotient {
  HeytingAlgebra algebra;
  LatticeHom hom;
};

/// Quotient under the congruence x ~ y iff some r in F has x^r = y^r.
/// F must be a proper filter (bot not in F); otherwise the quotient degenerates.
inline LatticeQuotient quotient_by_filter(const DistLattice& l, const Filter& f) {
  const int n = l.size();
  if (!is_filter(l, f.members)) throw invariant_error("not a filter");
  if (f.members.test(l.bot()))
    throw invariant_error("filter contains bot; quotient would be degenerate");
  const std::vector<int> fe = f.members.elems();
  auto related = [&](int x, int y) {
    for (int r : fe)
      if (l.meet(x, r) == l.meet(y, r)) return true;
    return false;
  };
  std::vector<int> cls(n, -1);
  std::vector<int> reps;
  for (int x = 0; x < n; ++x) {
    for (std::size_t c = 0; c < reps.size(); ++c)
      if (related(x, reps[c])) {
        cls[x] = (int)c;
        break;
      }
    if (cls[x] < 0) {
      cls[x] = (int)reps.size();
      reps.push_back(x);
    }
  }
  const int m = (int)reps.size();
  BinTable meet = BinTable::filled(m), join = BinTable::filled(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      meet.at(a, b) = cls[l.meet(reps[a], reps[b])];
      join.at(a, b) = cls[l.join(reps[a], reps[b])];
    }
  // well-definedness on all representatives, not just the chosen ones
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      if (cls[l.meet(x, y)] != meet(cls[x], cls[y]) || cls[l.join(x, y)] != join(cls[x], cls[y]))
        throw verify_error("filter congruence is not compatible with the operations");
    }
  LatticeQuotient q{DistLattice(std::move(meet), std::move(join)), LatticeHom{cls}};
  if (!is_lattice_hom(l, q.lattice, q.hom.map)) throw verify_error("quotient map is not a lattice hom");
  return q;
}

inline HeytingQuotient quotient_by_filter(const HeytingAlgebra& h, const Filter& f) {
  LatticeQuotient q = quotient_by_filter(static_cast<const DistLattice&>(h), f);
  const std::vector<int>& cls = q.hom.map;
  const int m = q.lattice.size();
  std::vector<int> rep(m, -1);
  for (int x = h.size() - 1; x >= 0; --x) rep[cls[x]] = x;
  BinTable impl = BinTable::filled(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) impl.at(a, b) = cls[h.impl(rep[a], rep[b])];
  for (int x = 0; x < h.size(); ++x)
    for (int y = 0; y < h.size(); ++y)
      if (cls[h.impl(x, y)] != impl(cls[x], cls[y]))
        throw verify_error("filter congruence is not compatible with implication");
  HeytingQuotient out{HeytingAlgebra(q.lattice, std::move(impl)), q.hom};
  if (!is_heyting_hom(h, out.algebra, out.hom.map))
    throw verify_error("quotient map is not a Heyting hom");
  return out;
}

// ---------------------------------------------------------------------------
// Sublocality: bot != top and top is join-prime.
// ---------------------------------------------------------------------------

inline std::optional<std::pair<int, int>> sublocal_violation(const Lattice& l) {
  for (int x = 0; x < l.size(); ++x)
    for (int y = x; y < l.size(); ++y)
      if (l.join(x, y) == l.top() && x != l.top() && y != l.top()) return std::make_pair(x, y);
  return std::nullopt;
}

inline bool is_sublocal(const Lattice& l) { return !sublocal_violation(l).has_value(); }

// ---------------------------------------------------------------------------
// Downset lattices (Birkhoff)
// ---------------------------------------------------------------------------

struct DownsetLattice {
  DistLattice lattice;
  std::vector<std::uint32_t> downsets;  // element index -> downset mask over the poset
};

// ---------------------------------------------------------------------------
// Lattice isomorphism search (backtracking with order-theoretic pruning)
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::array<int, 4>> lattice_profile(const Lattice& l) {
  std::vector<std::array<int, 4>> p(l.size());
  for (int x = 0; x < l.size(); ++x) {
    int down = 0, up = 0, covers = 0;
    for (int y = 0; y < l.size(); ++y) {
      if (l.leq(y, x)) ++down;
      if (l.leq(x, y)) ++up;
    }
    // join-irreducibility: x has exactly one lower cover
    for (int y = 0; y < l.size(); ++y) {
      if (y == x || !l.leq(y, x)) continue;
      bool cover = true;
      for (int z = 0; z < l.size(); ++z)
        if (z != x && z != y && l.leq(y, z) && l.leq(z, x)) {
          cover = false;
          break;
        }
      if (cover) ++covers;
    }
    p[x] = {down, up, covers == 1 ? 1 : 0, 0};
  }
  return p;
}

inline bool lattice_close_map(const Lattice& a, const Lattice& b, std::vector<int>& img) {
  bool grew = true;
  while (grew) {
    grew = false;
    for (int x = 0; x < a.size(); ++x) {
      if (img[x] < 0) continue;
      for (int y = 0; y < a.size(); ++y) {
        if (img[y] < 0) continue;
        for (int ops = 0; ops < 2; ++ops) {
          int src = ops ? a.join(x, y) : a.meet(x, y);
          int dst = ops ? b.join(img[x], img[y]) : b.meet(img[x], img[y]);
          if (img[src] < 0) {
            img[src] = dst;
            grew = true;
          } else if (img[src] != dst) {
            return false;
          }
        }
      }
    }
  }
  return true;
}

inline bool lattice_iso_search(const Lattice& a, const Lattice& b,
                               const std::vector<std::array<int, 4>>& pa,
                               const std::vector<std::array<int, 4>>& pb, std::vector<int>& img) {
  int next = -1;
  for (int x = 0; x < a.size(); ++x)
    if (img[x] < 0) {
      next = x;
      break;
    }
  if (next < 0) {
    std::vector<char> hit(b.size(), 0);
    for (int v : img) {
      if (hit[v]) return false;
      hit[v] = 1;
    }
    return is_lattice_hom(a, b, img);
  }
  std::vector<char> used(b.size(), 0);
  for (int v : img)
    if (v >= 0) used[v] = 1;
  for (int cand = 0; cand < b.size(); ++cand) {
    if (used[cand] || pa[next] != pb[cand]) continue;
    std::vector<int> trial = img;
    trial[next] = cand;
    if (lattice_close_map(a, b, trial) && lattice_iso_search(a, b, pa, pb, trial)) {
      img = trial;
      return true;
    }
  }
  return false;
}

}  // namespace detail

inline std::optional<std::vector<int>> find_lattice_iso(const Lattice& a, const Lattice& b) {
  if (a.size() != b.size()) return std::nullopt;
  auto pa = detail::lattice_profile(a), pb = detail::lattice_profile(b);
  {
    auto sa = pa, sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  std::vector<int> img(a.size(), -1);
  img[a.bot()] = b.bot();
  img[a.top()] = b.top();
  if (!detail::lattice_close_map(a, b, img)) return std::nullopt;
  if (detail::lattice_iso_search(a, b, pa, pb, img)) return img;
  return std::nullopt;
}

/// The lattice of downward-closed subsets of P, ordered by inclusion.
inline DownsetLattice downset_lattice(const FinPoset& p) {
  const int n = p.size();
  if (n > 20) throw budget_error("downset enumeration limited to posets with <= 20 elements");
  std::vector<std::uint32_t> down(n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (p.leq(y, x)) down[x] |= 1u << y;
  std::vector<std::uint32_t> sets;
  const std::uint32_t all = (n == 0) ? 0 : ((1u << n) - 1);
  for (std::uint32_t s = 0;; ++s) {
    std::uint32_t closure = 0;
    for (int x = 0; x < n; ++x)
      if (s >> x & 1) closure |= down[x];
    if (closure == s) sets.push_back(s);
    if (s == all) break;
  }
  std::sort(sets.begin(), sets.end());
  const int m = (int)sets.size();
  auto index_of = [&](std::uint32_t s) {
    return (int)(std::lower_bound(sets.begin(), sets.end(), s) - sets.begin());
  };
  BinTable meet = BinTable::filled(m), join = BinTable::filled(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      meet.at(a, b) = index_of(sets[a] & sets[b]);
      join.at(a, b) = index_of(sets[a] | sets[b]);
    }
  return DownsetLattice{DistLattice(std::move(meet), std::move(join)), std::move(sets)};
}

}  // namespace dualis
