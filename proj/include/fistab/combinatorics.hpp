#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "fistab/error.hpp"

namespace fistab::comb {

inline std::uint64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    unsigned __int128 t = static_cast<unsigned __int128>(r) * static_cast<std::uint64_t>(n - k + i);
    r = static_cast<std::uint64_t>(t / static_cast<std::uint64_t>(i));
  }
  return r;
}

// Signed binomial C(n, k) for any integer n, k >= 0.
inline std::int64_t binomial_signed(std::int64_t n, std::int64_t k) {
  if (k < 0) return 0;
  if (n >= 0) return static_cast<std::int64_t>(binomial(n, k));
  std::int64_t v = static_cast<std::int64_t>(binomial(-n + k - 1, k));
  return (k % 2) ? -v : v;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= static_cast<std::uint64_t>(i);
  return r;
}

// All k-subsets of {0..n-1} as sorted index vectors, in lexicographic order.
inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  for (;;) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

inline std::uint32_t mask_of(const std::vector<int>& s) {
  std::uint32_t m = 0;
  for (int x : s) m |= 1u << x;
  return m;
}

// Permutations of {0..m-1} in one-line notation, lexicographic order.
inline std::vector<std::vector<int>> permutations(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline int permutation_sign(std::vector<int> p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i)
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[p[i]]);
      sign = -sign;
    }
  return sign;
}

// Lehmer-code rank of a permutation within permutations(m).
inline std::size_t permutation_rank(const std::vector<int>& p) {
  std::size_t r = 0;
  const int m = static_cast<int>(p.size());
  for (int i = 0; i < m; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < m; ++j)
      if (p[j] < p[i]) ++smaller;
    r += static_cast<std::size_t>(smaller) * factorial(m - 1 - i);
  }
  return r;
}

}  // namespace fistab::comb
