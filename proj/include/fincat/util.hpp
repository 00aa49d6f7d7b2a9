#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace fincat {

/// Thrown on malformed inputs (bad tables, mismatched endpoints, parse errors).
struct input_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw input_error(msg);
}

/// Union-find with path compression; representative = least member of the class.
class UnionFind {
 public:
  explicit UnionFind(int n = 0) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) const {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Merges the classes of a and b; keeps the smaller root. Returns true if they were distinct.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

  bool same(int a, int b) const { return find(a) == find(b); }
  int size() const { return static_cast<int>(parent_.size()); }

  /// Dense renumbering of classes in order of least member.
  /// Returns (class index per element, class count).
  std::pair<std::vector<int>, int> compress() const {
    std::vector<int> cls(parent_.size(), -1);
    int next = 0;
    for (int i = 0; i < size(); ++i) {
      int r = find(i);
      if (cls[r] < 0) cls[r] = next++;
      cls[i] = cls[r];
    }
    return {cls, next};
  }

 private:
  mutable std::vector<int> parent_;
};

/// Iterates all tuples (t_0,...,t_{k-1}) with 0 <= t_i < radix[i].
/// Visitor returns false to abort. Returns false if aborted.
inline bool for_each_tuple(const std::vector<int>& radix,
                           const std::function<bool(const std::vector<int>&)>& visit) {
  for (int r : radix)
    if (r <= 0) return true;  // empty product unless all radices positive; k=0 handled below
  std::vector<int> t(radix.size(), 0);
  if (radix.empty()) return visit(t);
  while (true) {
    if (!visit(t)) return false;
    int i = 0;
    while (i < static_cast<int>(radix.size())) {
      if (++t[i] < radix[i]) break;
      t[i] = 0;
      ++i;
    }
    if (i == static_cast<int>(radix.size())) return true;
  }
}

/// Number of tuples, or -1 on overflow past `cap`.
inline long long tuple_count(const std::vector<int>& radix, long long cap) {
  long long n = 1;
  for (int r : radix) {
    if (r == 0) return 0;
    n *= r;
    if (n > cap) return -1;
  }
  return n;
}

/// Mixed-radix rank of a tuple, first coordinate most significant.
inline int tuple_rank(const std::vector<int>& t, const std::vector<int>& radix) {
  int r = 0;
  for (size_t i = 0; i < t.size(); ++i) r = r * radix[i] + t[i];
  return r;
}

inline std::vector<int> tuple_unrank(int rank, const std::vector<int>& radix) {
  std::vector<int> t(radix.size());
  for (int i = static_cast<int>(radix.size()) - 1; i >= 0; --i) {
    t[i] = rank % radix[i];
    rank /= radix[i];
  }
  return t;
}

/// Deterministic RNG for seeded law suites. mt19937_64 output is pinned by the standard.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform integer in [0, n).
  int below(int n) {
    return static_cast<int>(eng_() % static_cast<std::uint64_t>(n));
  }
  int range(int lo, int hi) { return lo + below(hi - lo + 1); }
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace fincat
