#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fistab/error.hpp"
#include "fistab/exactlin/dense.hpp"
#include "fistab/exactlin/field.hpp"

namespace fistab::exactlin {

struct SparseEntry {
  std::uint32_t row, col, value;
};

// Column-compressed sparse matrix over F_p.
class SparseMatrixFp {
 public:
  using Column = std::vector<std::pair<std::uint32_t, std::uint32_t>>;  // (row, value), rows ascending

  SparseMatrixFp() = default;
  SparseMatrixFp(std::size_t rows, std::size_t cols, std::uint32_t p)
      : rows_(rows), p_(p), cols_(cols) {
    PrimeField check(p);
    (void)check;
  }

  // Strict constructor: entries must be in range, nonzero mod p and without duplicates.
  static SparseMatrixFp from_entries(std::size_t rows, std::size_t cols, std::uint32_t p,
                                     const std::vector<SparseEntry>& entries) {
    SparseMatrixFp m(rows, cols, p);
    for (const auto& e : entries) {
      if (e.row >= rows || e.col >= cols)
        throw InputError("sparse entry (" + std::to_string(e.row) + "," + std::to_string(e.col) +
                         ") out of range");
      if (e.value % p == 0) throw InputError("sparse entry with zero value");
      m.cols_[e.col].emplace_back(e.row, e.value % p);
    }
    for (auto& c : m.cols_) {
      std::sort(c.begin(), c.end());
      for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i].first == c[i - 1].first) throw InputError("duplicate sparse entry");
    }
    return m;
  }

  // Builder form: duplicates are summed and zeros dropped.
  static Column make_column(Column raw, std::uint32_t p) {
    std::sort(raw.begin(), raw.end());
    Column out;
    for (const auto& [r, v] : raw) {
      if (!out.empty() && out.back().first == r)
        out.back().second = static_cast<std::uint32_t>((static_cast<std::uint64_t>(out.back().second) + v) % p);
      else
        out.emplace_back(r, v % p);
      if (out.back().second == 0) out.pop_back();
    }
    return out;
  }

  void set_column(std::size_t c, Column col) {
    for (const auto& e : col)
      if (e.first >= rows_) throw InputError("sparse column entry out of range");
    cols_.at(c) = std::move(col);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_.size(); }
  std::uint32_t modulus() const noexcept { return p_; }
  const Column& column(std::size_t c) const { return cols_.at(c); }
  std::size_t nnz() const {
    std::size_t n = 0;
    for (const auto& c : cols_) n += c.size();
    return n;
  }

  DenseMatrix to_dense() const {
    DenseMatrix d(rows_, cols_.size(), p_);
    for (std::size_t c = 0; c < cols_.size(); ++c)
      for (const auto& [r, v] : cols_[c]) d(r, c) = v;
    return d;
  }

  static SparseMatrixFp from_dense(const DenseMatrix& d) {
    SparseMatrixFp m(d.rows(), d.cols(), d.modulus());
    for (std::size_t c = 0; c < d.cols(); ++c)
      for (std::size_t r = 0; r < d.rows(); ++r)
        if (d(r, c)) m.cols_[c].emplace_back(static_cast<std::uint32_t>(r), d(r, c));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::uint32_t p_ = 2;
  std::vector<Column> cols_;
};

struct RankKernel {
  std::size_t rank = 0;
  std::vector<SparseMatrixFp::Column> kernel_basis;  // (column index, coefficient)
};

namespace detail {

using Col = SparseMatrixFp::Column;

// a <- a + f * b, both sorted by index.
inline void axpy_sparse(Col& a, const Col& b, std::uint32_t f, const PrimeField& F, Col& scratch) {
  scratch.clear();
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      scratch.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      scratch.emplace_back(b[j].first, F.mul(f, b[j].second));
      ++j;
    } else {
      std::uint32_t v = F.add(a[i].second, F.mul(f, b[j].second));
      if (v) scratch.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  a.swap(scratch);
}

inline void xor_sorted(std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b,
                       std::vector<std::uint32_t>& scratch) {
  scratch.clear();
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(scratch));
  a.swap(scratch);
}

}  // namespace detail

// Left-to-right column reduction keyed on the lowest nonzero row. Columns
// flagged in `skip` are treated as already known to reduce to zero and are
// neither reduced nor reported in the kernel.
inline RankKernel rank_and_kernel(const SparseMatrixFp& a, bool want_kernel = true,
                                  const std::vector<char>* skip = nullptr,
                                  std::vector<std::uint32_t>* pivot_rows = nullptr) {
  RankKernel out;
  const std::size_t n = a.cols();
  std::vector<std::int64_t> pivot_of_row(a.rows(), -1);
  if (a.modulus() == 2) {
    std::vector<std::vector<std::uint32_t>> reduced(n), track(want_kernel ? n : 0);
    std::vector<std::uint32_t> scratch;
    for (std::size_t j = 0; j < n; ++j) {
      if (skip && (*skip)[j]) continue;
      auto& col = reduced[j];
      for (const auto& e : a.column(j)) col.push_back(e.first);
      if (want_kernel) track[j] = {static_cast<std::uint32_t>(j)};
      while (!col.empty()) {
        std::int64_t piv = pivot_of_row[col.back()];
        if (piv < 0) break;
        detail::xor_sorted(col, reduced[piv], scratch);
        if (want_kernel) detail::xor_sorted(track[j], track[piv], scratch);
      }
      if (col.empty()) {
        if (want_kernel) {
          SparseMatrixFp::Column k;
          for (auto idx : track[j]) k.emplace_back(idx, 1);
          out.kernel_basis.push_back(std::move(k));
          track[j].clear();
          track[j].shrink_to_fit();
        }
      } else {
        pivot_of_row[col.back()] = static_cast<std::int64_t>(j);
        if (pivot_rows) pivot_rows->push_back(col.back());
        ++out.rank;
      }
    }
    return out;
  }
  PrimeField F(a.modulus());
  std::vector<detail::Col> reduced(n), track(want_kernel ? n : 0);
  detail::Col scratch;
  for (std::size_t j = 0; j < n; ++j) {
    if (skip && (*skip)[j]) continue;
    auto& col = reduced[j];
    col = a.column(j);
    if (want_kernel) track[j] = {{static_cast<std::uint32_t>(j), 1u}};
    while (!col.empty()) {
      std::int64_t piv = pivot_of_row[col.back().first];
      if (piv < 0) break;
      const auto& pc = reduced[piv];
      std::uint32_t f = F.neg(F.mul(col.back().second, F.inv(pc.back().second)));
      detail::axpy_sparse(col, pc, f, F, scratch);
      if (want_kernel) detail::axpy_sparse(track[j], track[piv], f, F, scratch);
    }
    if (col.empty()) {
      if (want_kernel) {
        out.kernel_basis.push_back(std::move(track[j]));
        track[j] = {};
      }
    } else {
      pivot_of_row[col.back().first] = static_cast<std::int64_t>(j);
      if (pivot_rows) pivot_rows->push_back(col.back().first);
      ++out.rank;
    }
  }
  return out;
}

inline std::size_t sparse_rank(const SparseMatrixFp& a) { return rank_and_kernel(a, false).rank; }

}  // namespace fistab::exactlin
