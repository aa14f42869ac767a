#pragma once

// Deliberately naive reference implementations used only by tests.

#include <cstdint>
#include <numeric>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using Mat = std::vector<std::vector<std::int64_t>>;
using BigInt = boost::multiprecision::cpp_int;

inline std::int64_t mod(std::int64_t x, std::int64_t p) { return ((x % p) + p) % p; }

inline std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
  for (std::int64_t x = 1; x < p; ++x)
    if (mod(a * x, p) == 1) return x;
  return 0;
}

// Textbook Gaussian elimination over F_p.
inline std::size_t rank_mod_p(Mat a, std::int64_t p) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (auto& r : a)
    for (auto& x : r) x = mod(x, p);
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    std::int64_t inv = inv_mod(a[rank][c], p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank || a[i][c] == 0) continue;
      std::int64_t f = mod(a[i][c] * inv, p);
      for (std::size_t k = 0; k < cols; ++k) a[i][k] = mod(a[i][k] - f * a[rank][k], p);
    }
    ++rank;
  }
  return rank;
}

inline BigInt det(Mat m) {
  // cofactor expansion; only for tiny matrices
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  BigInt total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j] == 0) continue;
    Mat minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<std::int64_t> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(m[i][k]);
      minor.push_back(row);
    }
    BigInt term = BigInt(m[0][j]) * det(minor);
    total += (j % 2 == 0) ? term : BigInt(-term);
  }
  return total;
}

inline void subsets(std::size_t n, std::size_t k, std::size_t start, std::vector<std::size_t>& cur,
                    std::vector<std::vector<std::size_t>>& out) {
  if (cur.size() == k) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Invariant factors from determinantal divisors: d_k = D_k / D_{k-1}, where
// D_k is the gcd of all k x k minors.
inline std::vector<BigInt> smith_by_minors(const Mat& a) {
  const std::size_t R = a.size(), C = R ? a[0].size() : 0;
  std::vector<BigInt> D{1};
  for (std::size_t k = 1; k <= std::min(R, C); ++k) {
    std::vector<std::vector<std::size_t>> rs, cs;
    std::vector<std::size_t> cur;
    subsets(R, k, 0, cur, rs);
    subsets(C, k, 0, cur, cs);
    BigInt g = 0;
    for (const auto& r : rs)
      for (const auto& c : cs) {
        Mat m(k, std::vector<std::int64_t>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) m[i][j] = a[r[i]][c[j]];
        BigInt d = det(m);
        if (d < 0) d = -d;
        g = boost::multiprecision::gcd(g, d);
      }
    if (g == 0) break;
    D.push_back(g);
  }
  std::vector<BigInt> out;
  for (std::size_t k = 1; k < D.size(); ++k) out.push_back(D[k] / D[k - 1]);
  return out;
}

}  // namespace oracle
