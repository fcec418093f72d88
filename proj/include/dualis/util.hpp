#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dualis {

// ---------------------------------------------------------------------------
// errors
// ---------------------------------------------------------------------------

/// Malformed textual input (files, formulas).  Carries a 1-based position.
struct syntax_error : std::runtime_error {
  int line;
  int col;
  syntax_error(const std::string& what, int line_, int col_)
      : std::runtime_error(what + " (line " + std::to_string(line_) + ", col " +
                           std::to_string(col_) + ")"),
        line(line_),
        col(col_) {}
};

/// An axiom or structural invariant fails on the given data.
struct invariant_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An enumeration would exceed the configured search budget.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A verification that must succeed by theorem failed; surfaces a bug.
struct verify_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Enumeration cap, overridable through the DUALIS_BUDGET environment variable.
inline std::uint64_t search_budget() {
  if (const char* s = std::getenv("DUALIS_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && v > 0) return v;
  }
  return 8'000'000ULL;
}

// ---------------------------------------------------------------------------
// Bits: a small dynamic bit set
// ---------------------------------------------------------------------------

class Bits {
 public:
  Bits() = default;
  explicit Bits(int n) : n_(n), w_((n + 63) / 64, 0) {}

  int universe() const { return n_; }

  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1u; }
  void set(int i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  int count() const {
    int c = 0;
    for (auto x : w_) c += __builtin_popcountll(x);
    return c;
  }
  bool any() const {
    for (auto x : w_)
      if (x) return true;
    return false;
  }
  bool none() const { return !any(); }

  Bits& operator&=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  Bits& operator|=(const Bits& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  friend Bits operator&(Bits a, const Bits& b) { return a &= b; }
  friend Bits operator|(Bits a, const Bits& b) { return a |= b; }

  /// Complement within the universe.
  Bits complement() const {
    Bits r(n_);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
    r.trim();
    return r;
  }

  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  friend bool operator==(const Bits& a, const Bits& b) { return a.n_ == b.n_ && a.w_ == b.w_; }
  friend bool operator<(const Bits& a, const Bits& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.w_ < b.w_;
  }

  std::vector<int> elems() const {
    std::vector<int> r;
    for (int i = 0; i < n_; ++i)
      if (test(i)) r.push_back(i);
    return r;
  }

  const std::vector<std::uint64_t>& raw() const { return w_; }

  static Bits of(int n, const std::vector<int>& elems) {
    Bits b(n);
    for (int e : elems) b.set(e);
    return b;
  }

 private:
  void trim() {
    if (n_ & 63) w_.back() &= (std::uint64_t{1} << (n_ & 63)) - 1;
  }
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

// ---------------------------------------------------------------------------
// BinTable: an n-by-n operation table over {0..n-1}
// ---------------------------------------------------------------------------

class BinTable {
 public:
  BinTable() = default;
  BinTable(int n, std::vector<int> v) : n_(n), v_(std::move(v)) {
    if ((int)v_.size() != n_ * n_) throw invariant_error("operation table has wrong size");
    for (int x : v_)
      if (x < 0 || x >= n_) throw invariant_error("operation table entry out of range");
  }

  int n() const { return n_; }
  int operator()(int i, int j) const { return v_[i * n_ + j]; }
  int& at(int i, int j) { return v_[i * n_ + j]; }

  static BinTable filled(int n, int value = 0) { return BinTable(n, std::vector<int>(n * n, value)); }

  friend bool operator==(const BinTable& a, const BinTable& b) { return a.n_ == b.n_ && a.v_ == b.v_; }

 private:
  int n_ = 0;
  std::vector<int> v_;
};

// ---------------------------------------------------------------------------
// misc
// ---------------------------------------------------------------------------

/// FNV-1a, used as a stable digest of input files in reports.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex_digest(std::string_view s) {
  static const char* d = "0123456789abcdef";
  std::uint64_t h = fnv1a(s);
  std::string r(16, '0');
  for (int i = 15; i >= 0; --i) {
    r[i] = d[h & 15];
    h >>= 4;
  }
  return r;
}

inline std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string r;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) r += sep;
    r += parts[i];
  }
  return r;
}

}  // namespace dualis
