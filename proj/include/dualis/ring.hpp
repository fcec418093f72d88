#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "dualis/util.hpp"

namespace dualis {

// ---------------------------------------------------------------------------
// FinCommRing: finite commutative unital ring given by operation tables.
// ---------------------------------------------------------------------------

class FinCommRing {
 public:
  FinCommRing(BinTable add, BinTable mul, int zero, int one)
      : add_(std::move(add)), mul_(std::move(mul)), zero_(zero), one_(one) {
    validate();
  }

  int size() const { return add_.n(); }
  int add(int a, int b) const { return add_(a, b); }
  int mul(int a, int b) const { return mul_(a, b); }
  int neg(int a) const { return neg_[a]; }
  int sub(int a, int b) const { return add_(a, neg_[b]); }
  int zero() const { return zero_; }
  int one() const { return one_; }

  bool is_unit(int a) const { return unit_[a]; }
  std::vector<int> units() const {
    std::vector<int> r;
    for (int a = 0; a < size(); ++a)
      if (unit_[a]) r.push_back(a);
    return r;
  }
  /// Inverse of a unit; -1 for non-units.
  int inverse(int a) const { return inv_[a]; }

  const BinTable& add_table() const { return add_; }
  const BinTable& mul_table() const { return mul_; }

  friend bool operator==(const FinCommRing& x, const FinCommRing& y) {
    return x.add_ == y.add_ && x.mul_ == y.mul_ && x.zero_ == y.zero_ && x.one_ == y.one_;
  }

 private:
  void validate() {
    const int n = add_.n();
    if (n == 0 || mul_.n() != n) throw invariant_error("not a ring: table sizes disagree");
    if (zero_ < 0 || zero_ >= n || one_ < 0 || one_ >= n)
      throw invariant_error("not a ring: zero/one out of range");
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (add_(a, b) < 0 || add_(a, b) >= n || mul_(a, b) < 0 || mul_(a, b) >= n)
          throw invariant_error("not a ring: operation table entry out of range");
    if (zero_ == one_) throw invariant_error("not a ring: 0 = 1");
    auto wit = [](const char* what, int a, int b, int c = -1) {
      std::string s = std::string("not a ring: ") + what + "; witness (" + std::to_string(a) +
                      "," + std::to_string(b);
      if (c >= 0) s += "," + std::to_string(c);
      return invariant_error(s + ")");
    };
    neg_.assign(n, -1);
    for (int a = 0; a < n; ++a) {
      if (add_(a, zero_) != a) throw wit("additive identity fails", a, zero_);
      if (mul_(a, one_) != a) throw wit("multiplicative identity fails", a, one_);
      for (int b = 0; b < n; ++b) {
        if (add_(a, b) != add_(b, a)) throw wit("addition not commutative", a, b);
        if (mul_(a, b) != mul_(b, a)) throw wit("multiplication not commutative", a, b);
        if (add_(a, b) == zero_) neg_[a] = b;
        for (int c = 0; c < n; ++c) {
          if (add_(add_(a, b), c) != add_(a, add_(b, c)))
            throw wit("addition not associative", a, b, c);
          if (mul_(mul_(a, b), c) != mul_(a, mul_(b, c)))
            throw wit("multiplication not associative", a, b, c);
          if (mul_(a, add_(b, c)) != add_(mul_(a, b), mul_(a, c)))
            throw wit("distributivity fails", a, b, c);
        }
      }
    }
    for (int a = 0; a < n; ++a)
      if (neg_[a] < 0) throw invariant_error("not a ring: element " + std::to_string(a) +
                                             " has no additive inverse");
    unit_.assign(n, 0);
    inv_.assign(n, -1);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (mul_(a, b) == one_) {
          unit_[a] = 1;
          inv_[a] = b;
        }
  }

  BinTable add_, mul_;
  int zero_, one_;
  std::vector<int> neg_;
  std::vector<char> unit_;
  std::vector<int> inv_;
};

/// Z/n with the usual tables.
inline FinCommRing zmod(int n) {
  if (n < 2) throw invariant_error("zmod requires n >= 2");
  BinTable add = BinTable::filled(n), mul = BinTable::filled(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      add.at(a, b) = (a + b) % n;
      mul.at(a, b) = (a * b) % n;
    }
  return FinCommRing(std::move(add), std::move(mul), 0, 1);
}

/// Componentwise product; element encoding is a*|B| + b.
inline FinCommRing product_ring(const FinCommRing& x, const FinCommRing& y) {
  const int n = x.size() * y.size(), m = y.size();
  BinTable add = BinTable::filled(n), mul = BinTable::filled(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      add.at(a, b) = x.add(a / m, b / m) * m + y.add(a % m, b % m);
      mul.at(a, b) = x.mul(a / m, b / m) * m + y.mul(a % m, b % m);
    }
  return FinCommRing(std::move(add), std::move(mul), x.zero() * m + y.zero(),
                     x.one() * m + y.one());
}

inline bool is_ring_hom(const FinCommRing& src, const FinCommRing& dst, const std::vector<int>& h) {
  if ((int)h.size() != src.size()) return false;
  if (h[src.zero()] != dst.zero() || h[src.one()] != dst.one()) return false;
  for (int a = 0; a < src.size(); ++a)
    for (int b = 0; b < src.size(); ++b)
      if (h[src.add(a, b)] != dst.add(h[a], h[b]) || h[src.mul(a, b)] != dst.mul(h[a], h[b]))
        return false;
  return true;
}

// ---------------------------------------------------------------------------
// Ideals
// ---------------------------------------------------------------------------

struct RingIdeal {
  Bits members;
};

inline bool is_ideal(const FinCommRing& r, const Bits& i) {
  if (i.universe() != r.size() || !i.test(r.zero())) return false;
  for (int a = 0; a < r.size(); ++a) {
    if (!i.test(a)) continue;
    if (!i.test(r.neg(a))) return false;
    for (int b = 0; b < r.size(); ++b) {
      if (i.test(b) && !i.test(r.add(a, b))) return false;
      if (!i.test(r.mul(a, b))) return false;
    }
  }
  return true;
}

namespace detail {
inline Bits close_ideal(const FinCommRing& r, Bits seed) {
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur = seed.elems();
    for (int a : cur) {
      int na = r.neg(a);
      if (!seed.test(na)) { seed.set(na); grew = true; }
      for (int b : cur) {
        int s = r.add(a, b);
        if (!seed.test(s)) { seed.set(s); grew = true; }
      }
      for (int b = 0; b < r.size(); ++b) {
        int m = r.mul(a, b);
        if (!seed.test(m)) { seed.set(m); grew = true; }
      }
    }
  }
  return seed;
}
}  // namespace detail

/// Complete ideal lattice by closure-BFS: grow each known ideal by one element
/// and close under addition, negation, and ring multiplication, to a fixpoint.
inline std::vector<RingIdeal> ideals(const FinCommRing& r) {
  std::set<Bits> found;
  Bits zero(r.size());
  zero.set(r.zero());
  std::vector<Bits> frontier{detail::close_ideal(r, zero)};
  found.insert(frontier[0]);
  while (!frontier.empty()) {
    std::vector<Bits> next;
    for (const Bits& i : frontier)
      for (int a = 0; a < r.size(); ++a) {
        if (i.test(a)) continue;
        Bits grown = i;
        grown.set(a);
        grown = detail::close_ideal(r, std::move(grown));
        if (found.insert(grown).second) next.push_back(grown);
      }
    frontier = std::move(next);
  }
  std::vector<RingIdeal> out;
  for (const Bits& i : found) out.push_back(RingIdeal{i});
  std::sort(out.begin(), out.end(), [](const RingIdeal& a, const RingIdeal& b) {
    if (a.members.count() != b.members.count()) return a.members.count() < b.members.count();
    return a.members < b.members;
  });
  for (const RingIdeal& i : out)
    if (!is_ideal(r, i.members)) throw verify_error("closure-BFS produced a non-ideal");
  return out;
}

/// Principal ideal (a).
inline RingIdeal principal_ideal(const FinCommRing& r, int a) {
  Bits seed(r.size());
  seed.set(r.zero());
  seed.set(a);
  return RingIdeal{detail::close_ideal(r, std::move(seed))};
}

/// Quotient ring A/I; also returns the class map.
struct QuotientRing {
  FinCommRing ring;
  std::vector<int> cls;
};

inline QuotientRing quotient_ring(const FinCommRing& r, const Bits& ideal) {
  if (!is_ideal(r, ideal)) throw invariant_error("not an ideal");
  const int n = r.size();
  std::vector<int> cls(n, -1);
  std::vector<int> reps;
  for (int a = 0; a < n; ++a) {
    for (std::size_t c = 0; c < reps.size(); ++c)
      if (ideal.test(r.sub(a, reps[c]))) {
        cls[a] = (int)c;
        break;
      }
    if (cls[a] < 0) {
      cls[a] = (int)reps.size();
      reps.push_back(a);
    }
  }
  const int m = (int)reps.size();
  if (m == 1) throw invariant_error("quotient by the whole ring is degenerate");
  BinTable add = BinTable::filled(m), mul = BinTable::filled(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      add.at(a, b) = cls[r.add(reps[a], reps[b])];
      mul.at(a, b) = cls[r.mul(reps[a], reps[b])];
    }
  return QuotientRing{FinCommRing(std::move(add), std::move(mul), cls[r.zero()], cls[r.one()]),
                      cls};
}

/// Prime test: A/I is an integral domain, computed on the quotient table.
inline bool is_prime_ideal(const FinCommRing& r, const Bits& ideal) {
  if (ideal.count() == r.size()) return false;  // not proper
  QuotientRing q = quotient_ring(r, ideal);
  for (int a = 0; a < q.ring.size(); ++a)
    for (int b = 0; b < q.ring.size(); ++b)
      if (a != q.ring.zero() && b != q.ring.zero() && q.ring.mul(a, b) == q.ring.zero())
        return false;
  return true;
}

inline bool is_maximal_ideal(const FinCommRing& r, const Bits& ideal,
                             const std::vector<RingIdeal>& all) {
  if (ideal.count() == r.size()) return false;
  for (const RingIdeal& j : all) {
    if (j.members.count() == r.size()) continue;
    if (ideal.subset_of(j.members) && !(j.members == ideal)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Locality.  A finite commutative ring is local iff its non-units are closed
// under addition; this is cross-checked against unique-maximal-ideal
// enumeration, and the two criteria must agree.
// ---------------------------------------------------------------------------

inline bool is_local(const FinCommRing& r) {
  bool by_sum = true;
  for (int a = 0; a < r.size() && by_sum; ++a)
    for (int b = 0; b < r.size(); ++b)
      if (!r.is_unit(a) && !r.is_unit(b) && r.is_unit(r.add(a, b))) {
        by_sum = false;
        break;
      }
  std::vector<RingIdeal> all = ideals(r);
  int maximal = 0;
  for (const RingIdeal& i : all)
    if (is_maximal_ideal(r, i.members, all)) ++maximal;
  bool by_max = (maximal == 1);
  if (by_sum != by_max)
    throw verify_error("locality criteria disagree: sum-of-nonunits=" + std::to_string(by_sum) +
                       " unique-maximal=" + std::to_string(by_max));
  return by_sum;
}

// ---------------------------------------------------------------------------
// Localization at a multiplicative set
// ---------------------------------------------------------------------------

struct Localization {
  FinCommRing result;
  std::vector<int> denominators;            // S, sorted, 1 included
  std::vector<int> canonical;               // a -> class of a/1
  std::vector<std::vector<int>> pair_class; // [a][index into denominators] -> class
};

/// Multiplicative closure of the given elements together with 1.
inline std::vector<int> multiplicative_closure(const FinCommRing& r, const std::vector<int>& gens) {
  Bits s(r.size());
  s.set(r.one());
  for (int g : gens) s.set(g);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur = s.elems();
    for (int a : cur)
      for (int b : cur) {
        int m = r.mul(a, b);
        if (!s.test(m)) { s.set(m); grew = true; }
      }
  }
  return s.elems();
}

/// Fractions a/s for s in S, with (a,s) ~ (b,t) iff u(at - bs) = 0 for some u in S.
/// S must contain 1, be closed under multiplication, and avoid 0 (a multiplicative
/// set containing 0 collapses the result to the zero ring, which the finite-ring
/// type rejects).
inline Localization localize(const FinCommRing& r, const std::vector<int>& s_in) {
  std::vector<int> s = s_in;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (s.empty() || !std::binary_search(s.begin(), s.end(), r.one()))
    throw invariant_error("denominator set must contain 1");
  for (int a : s)
    for (int b : s)
      if (!std::binary_search(s.begin(), s.end(), r.mul(a, b)))
        throw invariant_error("denominator set is not multiplicatively closed");
  if (std::binary_search(s.begin(), s.end(), r.zero()))
    throw invariant_error("denominator set contains 0; localization would be the zero ring");

  const int ns = (int)s.size(), n = r.size();
  auto sidx = [&](int v) {
    return (int)(std::lower_bound(s.begin(), s.end(), v) - s.begin());
  };
  auto related = [&](int a, int si, int b, int ti) {
    int d = r.sub(r.mul(a, s[ti]), r.mul(b, s[si]));
    for (int u : s)
      if (r.mul(u, d) == r.zero()) return true;
    return false;
  };
  std::vector<std::vector<int>> pc(n, std::vector<int>(ns, -1));
  std::vector<std::pair<int, int>> reps;  // (numerator, denominator index)
  for (int a = 0; a < n; ++a)
    for (int si = 0; si < ns; ++si) {
      for (std::size_t c = 0; c < reps.size(); ++c)
        if (related(a, si, reps[c].first, reps[c].second)) {
          pc[a][si] = (int)c;
          break;
        }
      if (pc[a][si] < 0) {
        pc[a][si] = (int)reps.size();
        reps.emplace_back(a, si);
      }
    }
  const int m = (int)reps.size();
  BinTable add = BinTable::filled(m), mul = BinTable::filled(m);
  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      auto [a, si] = reps[x];
      auto [b, ti] = reps[y];
      int st = r.mul(s[si], s[ti]);
      add.at(x, y) = pc[r.add(r.mul(a, s[ti]), r.mul(b, s[si]))][sidx(st)];
      mul.at(x, y) = pc[r.mul(a, b)][sidx(st)];
    }
  Localization loc{FinCommRing(std::move(add), std::move(mul), pc[r.zero()][sidx(r.one())],
                               pc[r.one()][sidx(r.one())]),
                   s, {}, pc};
  loc.canonical.resize(n);
  for (int a = 0; a < n; ++a) loc.canonical[a] = pc[a][sidx(r.one())];
  if (!is_ring_hom(r, loc.result, loc.canonical))
    throw verify_error("canonical localization map is not a ring hom");
  for (int si = 0; si < ns; ++si)
    if (!loc.result.is_unit(loc.canonical[s[si]]))
      throw verify_error("denominator fails to become a unit in the localization");
  return loc;
}

// ---------------------------------------------------------------------------
// Ring isomorphism search: brute force over generator assignments with
// early pruning by elementary invariants.
// ---------------------------------------------------------------------------

namespace detail {

inline int additive_order(const FinCommRing& r, int a) {
  int x = a, k = 1;
  while (x != r.zero()) {
    x = r.add(x, a);
    ++k;
  }
  return k;
}

inline std::vector<std::array<int, 4>> ring_profile(const FinCommRing& r) {
  std::vector<std::array<int, 4>> p(r.size());
  for (int a = 0; a < r.size(); ++a) {
    int ann = 0;
    for (int b = 0; b < r.size(); ++b)
      if (r.mul(a, b) == r.zero()) ++ann;
    p[a] = {additive_order(r, a), r.is_unit(a) ? 1 : 0, r.mul(a, a) == a ? 1 : 0, ann};
  }
  return p;
}

// Propagates forced images through + and * ; returns false on contradiction.
inline bool ring_close_map(const FinCommRing& a, const FinCommRing& b, std::vector<int>& img) {
  bool grew = true;
  while (grew) {
    grew = false;
    for (int x = 0; x < a.size(); ++x) {
      if (img[x] < 0) continue;
      for (int y = 0; y < a.size(); ++y) {
        if (img[y] < 0) continue;
        for (int ops = 0; ops < 2; ++ops) {
          int src = ops ? a.mul(x, y) : a.add(x, y);
          int dst = ops ? b.mul(img[x], img[y]) : b.add(img[x], img[y]);
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

inline bool ring_iso_search(const FinCommRing& a, const FinCommRing& b,
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
    return is_ring_hom(a, b, img);
  }
  std::vector<char> used(b.size(), 0);
  for (int v : img)
    if (v >= 0) used[v] = 1;
  for (int cand = 0; cand < b.size(); ++cand) {
    if (used[cand] || pa[next] != pb[cand]) continue;
    std::vector<int> trial = img;
    trial[next] = cand;
    if (ring_close_map(a, b, trial) && ring_iso_search(a, b, pa, pb, trial)) {
      img = trial;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Unit-preserving ring isomorphism, or nullopt.  Generators are assigned in
/// element order; images of sums and products are forced immediately.
inline std::optional<std::vector<int>> find_ring_iso(const FinCommRing& a, const FinCommRing& b) {
  if (a.size() != b.size()) return std::nullopt;
  auto pa = detail::ring_profile(a), pb = detail::ring_profile(b);
  {
    auto sa = pa, sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  std::vector<int> img(a.size(), -1);
  img[a.zero()] = b.zero();
  img[a.one()] = b.one();
  if (!detail::ring_close_map(a, b, img)) return std::nullopt;
  if (detail::ring_iso_search(a, b, pa, pb, img)) return img;
  return std::nullopt;
}

}  // namespace dualis
