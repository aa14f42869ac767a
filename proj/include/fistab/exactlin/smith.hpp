#pragma once

#include <algorithm>
#include <numeric>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "fistab/error.hpp"

namespace fistab::exactlin {

using BigInt = boost::multiprecision::cpp_int;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static IntMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    IntMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) throw InputError("ragged integer matrix");
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  BigInt& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<BigInt> data_;
};

namespace detail {

struct Overflow {};

inline std::int64_t checked_sub_mul(std::int64_t a, std::int64_t q, std::int64_t b) {
  std::int64_t prod, res;
  if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &res)) throw Overflow{};
  return res;
}
inline BigInt checked_sub_mul(const BigInt& a, const BigInt& q, const BigInt& b) { return a - q * b; }
inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline BigInt checked_mul(const BigInt& a, const BigInt& b) { return a * b; }
inline std::int64_t gcd_of(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
inline BigInt gcd_of(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

template <class T>
T abs_of(const T& x) {
  return x < 0 ? T(-x) : x;
}

// Diagonalizes a dense copy by repeated pivot/eliminate steps, then fixes
// divisibility of the diagonal with gcd/lcm swaps. Pivot choice: smallest
// absolute value, which keeps boundary matrices (mostly +-1) fill-light.
template <class T>
std::vector<T> diagonalize(std::vector<std::vector<T>> a) {
  const std::size_t R = a.size(), C = R ? a[0].size() : 0;
  std::vector<T> diag;
  for (std::size_t t = 0; t < std::min(R, C); ++t) {
    // locate pivot in the trailing block
    std::size_t pr = R, pc = C;
    T best = 0;
    for (std::size_t i = t; i < R && best != 1; ++i)
      for (std::size_t j = t; j < C; ++j) {
        if (a[i][j] == 0) continue;
        T v = abs_of(a[i][j]);
        if (pr == R || v < best) {
          pr = i;
          pc = j;
          best = v;
          if (v == 1) break;
        }
      }
    if (pr == R) break;
    std::swap(a[t], a[pr]);
    for (auto& row : a) std::swap(row[t], row[pc]);
    for (;;) {
      bool dirty = false;
      for (std::size_t i = t + 1; i < R; ++i) {
        if (a[i][t] == 0) continue;
        T q = a[i][t] / a[t][t];
        for (std::size_t j = t; j < C; ++j)
          if (a[t][j] != 0) a[i][j] = checked_sub_mul(a[i][j], q, a[t][j]);
        if (a[i][t] != 0) dirty = true;
      }
      for (std::size_t j = t + 1; j < C; ++j) {
        if (a[t][j] == 0) continue;
        T q = a[t][j] / a[t][t];
        for (std::size_t i = t; i < R; ++i)
          if (a[i][t] != 0) a[i][j] = checked_sub_mul(a[i][j], q, a[i][t]);
        if (a[t][j] != 0) dirty = true;
      }
      if (!dirty) break;
      // move the smallest remaining entry of row/column t onto the diagonal
      std::size_t bi = t, bj = t;
      T bv = abs_of(a[t][t]);
      for (std::size_t i = t + 1; i < R; ++i)
        if (a[i][t] != 0 && abs_of(a[i][t]) < bv) bv = abs_of(a[i][t]), bi = i, bj = t;
      for (std::size_t j = t + 1; j < C; ++j)
        if (a[t][j] != 0 && abs_of(a[t][j]) < bv) bv = abs_of(a[t][j]), bi = t, bj = j;
      if (bi != t) std::swap(a[t], a[bi]);
      if (bj != t)
        for (auto& row : a) std::swap(row[t], row[bj]);
    }
    diag.push_back(abs_of(a[t][t]));
  }
  // gcd/lcm normalization gives the invariant factors of a diagonal matrix
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) {
      T g = gcd_of(diag[i], diag[j]);
      if (g == diag[i]) continue;
      T l = checked_mul(T(diag[i] / g), diag[j]);
      diag[i] = g;
      diag[j] = l;
    }
  return diag;
}

}  // namespace detail

// Nonzero invariant factors d_1 | d_2 | ... of the Smith normal form.
inline std::vector<BigInt> smith_normal_form(const IntMatrix& m) {
  try {
    std::vector<std::vector<std::int64_t>> a(m.rows(), std::vector<std::int64_t>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (m(r, c) > INT32_MAX || m(r, c) < -INT32_MAX) throw detail::Overflow{};
        a[r][c] = m(r, c).convert_to<std::int64_t>();
      }
    auto d = detail::diagonalize(std::move(a));
    return std::vector<BigInt>(d.begin(), d.end());
  } catch (const detail::Overflow&) {
    std::vector<std::vector<BigInt>> a(m.rows(), std::vector<BigInt>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m(r, c);
    return detail::diagonalize(std::move(a));
  }
}

}  // namespace fistab::exactlin
