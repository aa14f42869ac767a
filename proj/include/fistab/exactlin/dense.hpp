#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fistab/error.hpp"
#include "fistab/exactlin/field.hpp"

namespace fistab::exactlin {

using Vec = std::vector<std::uint32_t>;

// Row-major matrix over F_p. Entries are kept canonical in [0, p).
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, std::uint32_t p)
      : rows_(rows), cols_(cols), p_(p), data_(rows * cols, 0) {}

  static DenseMatrix identity(std::size_t n, std::uint32_t p) {
    DenseMatrix m(n, n, p);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1 % p;
    return m;
  }

  static DenseMatrix from_rows(const std::vector<std::vector<std::int64_t>>& rows, std::size_t cols,
                               std::uint32_t p) {
    PrimeField f(p);
    DenseMatrix m(rows.size(), cols, p);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols)
        throw InputError("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                         " entries, expected " + std::to_string(cols));
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = f.reduce(rows[r][c]);
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::uint32_t modulus() const noexcept { return p_; }

  std::uint32_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::uint32_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::uint32_t* row(std::size_t r) { return data_.data() + r * cols_; }
  const std::uint32_t* row(std::size_t r) const { return data_.data() + r * cols_; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](std::uint32_t x) { return x == 0; });
  }
  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if ((*this)(r, c) != (r == c ? 1u : 0u)) return false;
    return true;
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_, p_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Vec column(std::size_t c) const {
    Vec v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  Vec apply(const Vec& v) const {
    if (v.size() != cols_) throw InputError("vector length does not match matrix columns");
    Vec out(rows_, 0);
    for (std::size_t r = 0; r < rows_; ++r) {
      std::uint64_t acc = 0;
      const std::uint32_t* a = row(r);
      for (std::size_t c = 0; c < cols_; ++c) {
        acc += static_cast<std::uint64_t>(a[c]) * v[c];
        if ((c & 3) == 3) acc %= p_;
      }
      out[r] = static_cast<std::uint32_t>(acc % p_);
    }
    return out;
  }

  std::vector<std::vector<std::int64_t>> to_rows() const {
    std::vector<std::vector<std::int64_t>> out(rows_, std::vector<std::int64_t>(cols_));
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out[r][c] = (*this)(r, c);
    return out;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.p_ == b.p_ && a.data_ == b.data_;
  }

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols_ != b.rows_ || a.p_ != b.p_)
      throw InputError("matrix product shape mismatch: " + shape(a) + " * " + shape(b));
    const std::uint64_t p = a.p_;
    DenseMatrix c(a.rows_, b.cols_, a.p_);
    std::vector<std::uint64_t> acc(b.cols_);
    // Products of residues below 2^16 stay under 2^32, so many can be summed unreduced.
    const std::size_t flush = p < (1u << 16) ? (1u << 30) : 3;
    for (std::size_t i = 0; i < a.rows_; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      std::size_t pending = 0;
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const std::uint64_t x = a(i, k);
        if (x == 0) continue;
        const std::uint32_t* br = b.row(k);
        for (std::size_t j = 0; j < b.cols_; ++j) acc[j] += x * br[j];
        if (++pending >= flush) {
          for (auto& v : acc) v %= p;
          pending = 0;
        }
      }
      std::uint32_t* cr = c.row(i);
      for (std::size_t j = 0; j < b.cols_; ++j) cr[j] = static_cast<std::uint32_t>(acc[j] % p);
    }
    return c;
  }

  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    check_same_shape(a, b);
    DenseMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) {
      std::uint32_t s = c.data_[i] + b.data_[i];
      c.data_[i] = s >= a.p_ ? s - a.p_ : s;
    }
    return c;
  }

  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    check_same_shape(a, b);
    DenseMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i)
      c.data_[i] = c.data_[i] >= b.data_[i] ? c.data_[i] - b.data_[i] : c.data_[i] + a.p_ - b.data_[i];
    return c;
  }

  static DenseMatrix block_diagonal(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.p_ != b.p_) throw InputError("block_diagonal: moduli differ");
    DenseMatrix m(a.rows_ + b.rows_, a.cols_ + b.cols_, a.p_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t c = 0; c < a.cols_; ++c) m(r, c) = a(r, c);
    for (std::size_t r = 0; r < b.rows_; ++r)
      for (std::size_t c = 0; c < b.cols_; ++c) m(a.rows_ + r, a.cols_ + c) = b(r, c);
    return m;
  }

  DenseMatrix select_columns(const std::vector<std::size_t>& cols) const {
    DenseMatrix m(rows_, cols.size(), p_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t j = 0; j < cols.size(); ++j) m(r, j) = (*this)(r, cols[j]);
    return m;
  }

  static std::string shape(const DenseMatrix& m) {
    return std::to_string(m.rows_) + "x" + std::to_string(m.cols_);
  }

 private:
  static void check_same_shape(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.p_ != b.p_)
      throw InputError("matrix shape mismatch: " + shape(a) + " vs " + shape(b));
  }

  std::size_t rows_ = 0, cols_ = 0;
  std::uint32_t p_ = 2;
  std::vector<std::uint32_t> data_;
};

namespace detail {

// F_2 rows packed 64 to a word; used for rank and RREF when p = 2.
struct BitRows {
  std::size_t cols = 0, words = 0;
  std::vector<std::vector<std::uint64_t>> rows;

  explicit BitRows(const DenseMatrix& m) : cols(m.cols()), words((m.cols() + 63) / 64) {
    rows.assign(m.rows(), std::vector<std::uint64_t>(words, 0));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (m(r, c)) rows[r][c >> 6] |= std::uint64_t{1} << (c & 63);
  }
  bool bit(std::size_t r, std::size_t c) const { return (rows[r][c >> 6] >> (c & 63)) & 1; }
};

inline void row_axpy(std::uint32_t* dst, const std::uint32_t* src, std::uint32_t f, std::size_t from,
                     std::size_t to, std::uint32_t p) {
  // dst += f * src (mod p) on columns [from, to)
  if (p < (1u << 15)) {
    for (std::size_t k = from; k < to; ++k) dst[k] = (dst[k] + f * src[k]) % p;
  } else {
    const std::uint64_t pp = p;
    for (std::size_t k = from; k < to; ++k)
      dst[k] = static_cast<std::uint32_t>((dst[k] + static_cast<std::uint64_t>(f) * src[k]) % pp);
  }
}

}  // namespace detail

struct Echelon {
  DenseMatrix rref;                  // reduced row echelon form; rows past rank() are zero
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row
  std::size_t rank() const noexcept { return pivots.size(); }
};

inline Echelon row_echelon(DenseMatrix a) {
  const std::uint32_t p = a.modulus();
  Echelon e;
  if (p == 2) {
    detail::BitRows b(a);
    std::size_t r = 0;
    for (std::size_t c = 0; c < b.cols && r < b.rows.size(); ++c) {
      std::size_t piv = r;
      while (piv < b.rows.size() && !b.bit(piv, c)) ++piv;
      if (piv == b.rows.size()) continue;
      std::swap(b.rows[r], b.rows[piv]);
      for (std::size_t i = 0; i < b.rows.size(); ++i) {
        if (i == r || !b.bit(i, c)) continue;
        for (std::size_t w = c >> 6; w < b.words; ++w) b.rows[i][w] ^= b.rows[r][w];
      }
      e.pivots.push_back(c);
      ++r;
    }
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t c = 0; c < a.cols(); ++c) a(i, c) = b.bit(i, c);
    e.rref = std::move(a);
    return e;
  }
  PrimeField f(p);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r)
      for (std::size_t k = 0; k < a.cols(); ++k) std::swap(a(r, k), a(piv, k));
    const std::uint32_t inv = f.inv(a(r, c));
    for (std::size_t k = c; k < a.cols(); ++k) a(r, k) = f.mul(a(r, k), inv);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == r || a(i, c) == 0) continue;
      detail::row_axpy(a.row(i), a.row(r), f.neg(a(i, c)), c, a.cols(), p);
    }
    e.pivots.push_back(c);
    ++r;
  }
  e.rref = std::move(a);
  return e;
}

// Forward elimination only; cheaper than row_echelon when just the rank is needed.
inline std::size_t rank(DenseMatrix a) {
  if (a.rows() > a.cols()) a = a.transposed();
  const std::uint32_t p = a.modulus();
  if (p == 2) {
    detail::BitRows b(a);
    std::size_t r = 0;
    for (std::size_t c = 0; c < b.cols && r < b.rows.size(); ++c) {
      std::size_t piv = r;
      while (piv < b.rows.size() && !b.bit(piv, c)) ++piv;
      if (piv == b.rows.size()) continue;
      std::swap(b.rows[r], b.rows[piv]);
      for (std::size_t i = r + 1; i < b.rows.size(); ++i) {
        if (!b.bit(i, c)) continue;
        for (std::size_t w = c >> 6; w < b.words; ++w) b.rows[i][w] ^= b.rows[r][w];
      }
      ++r;
    }
    return r;
  }
  PrimeField f(p);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t piv = r;
    while (piv < a.rows() && a(piv, c) == 0) ++piv;
    if (piv == a.rows()) continue;
    if (piv != r)
      for (std::size_t k = c; k < a.cols(); ++k) std::swap(a(r, k), a(piv, k));
    const std::uint32_t inv = f.inv(a(r, c));
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c) == 0) continue;
      detail::row_axpy(a.row(i), a.row(r), f.neg(f.mul(a(i, c), inv)), c, a.cols(), p);
    }
    ++r;
  }
  return r;
}

// Columns form a basis of the null space {x : A x = 0}.
inline DenseMatrix kernel_basis(const DenseMatrix& a) {
  const std::uint32_t p = a.modulus();
  PrimeField f(p);
  Echelon e = row_echelon(a);
  std::vector<char> is_pivot(a.cols(), 0);
  for (auto c : e.pivots) is_pivot[c] = 1;
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  DenseMatrix k(a.cols(), free_cols.size(), p);
  for (std::size_t j = 0; j < free_cols.size(); ++j) {
    k(free_cols[j], j) = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) k(e.pivots[i], j) = f.neg(e.rref(i, free_cols[j]));
  }
  return k;
}

// A subspace of F_p^d held as the rows of a reduced echelon basis.
class Subspace {
 public:
  Subspace() = default;
  Subspace(std::size_t ambient, std::uint32_t p) : ambient_(ambient), p_(p) {}

  static Subspace span_of_columns(const DenseMatrix& gens) {
    Subspace s(gens.rows(), gens.modulus());
    Echelon e = row_echelon(gens.transposed());
    for (std::size_t i = 0; i < e.rank(); ++i) {
      s.rows_.emplace_back(e.rref.row(i), e.rref.row(i) + gens.rows());
      s.pivots_.push_back(e.pivots[i]);
    }
    return s;
  }

  std::size_t dim() const noexcept { return rows_.size(); }
  std::size_t ambient() const noexcept { return ambient_; }
  std::uint32_t modulus() const noexcept { return p_; }
  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  Vec reduce(Vec v) const {
    check_len(v);
    PrimeField f(p_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const std::uint32_t c = v[pivots_[i]];
      if (c) detail::row_axpy(v.data(), rows_[i].data(), f.neg(c), pivots_[i], ambient_, p_);
    }
    return v;
  }

  bool contains(const Vec& v) const {
    Vec r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](std::uint32_t x) { return x == 0; });
  }

  // Inserts v; returns true when the dimension grew.
  bool add(const Vec& v) {
    PrimeField f(p_);
    Vec r = reduce(v);
    std::size_t lead = 0;
    while (lead < ambient_ && r[lead] == 0) ++lead;
    if (lead == ambient_) return false;
    const std::uint32_t inv = f.inv(r[lead]);
    for (std::size_t k = lead; k < ambient_; ++k) r[k] = f.mul(r[k], inv);
    for (auto& row : rows_)
      if (row[lead]) detail::row_axpy(row.data(), r.data(), f.neg(row[lead]), lead, ambient_, p_);
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), lead) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, lead);
    rows_.insert(rows_.begin() + pos, std::move(r));
    return true;
  }

  // Coordinates with respect to the echelon basis rows.
  Vec coordinates(const Vec& v) const {
    if (!contains(v)) throw ConsistencyError("vector is not in the subspace");
    Vec c(rows_.size());
    for (std::size_t i = 0; i < rows_.size(); ++i) c[i] = v[pivots_[i]];
    return c;
  }

  DenseMatrix coordinates_matrix(const DenseMatrix& cols) const {
    DenseMatrix m(dim(), cols.cols(), p_);
    for (std::size_t j = 0; j < cols.cols(); ++j) {
      Vec c = coordinates(cols.column(j));
      for (std::size_t i = 0; i < c.size(); ++i) m(i, j) = c[i];
    }
    return m;
  }

  DenseMatrix basis_columns() const {
    DenseMatrix b(ambient_, dim(), p_);
    for (std::size_t j = 0; j < rows_.size(); ++j)
      for (std::size_t i = 0; i < ambient_; ++i) b(i, j) = rows_[j][i];
    return b;
  }

  std::vector<std::size_t> complement() const {
    std::vector<std::size_t> out;
    std::size_t k = 0;
    for (std::size_t i = 0; i < ambient_; ++i) {
      if (k < pivots_.size() && pivots_[k] == i) {
        ++k;
        continue;
      }
      out.push_back(i);
    }
    return out;
  }

  // Projection F^d -> F^d / U expressed in the coordinates indexed by complement().
  DenseMatrix quotient_projection() const {
    PrimeField f(p_);
    auto comp = complement();
    DenseMatrix q(comp.size(), ambient_, p_);
    for (std::size_t j = 0; j < comp.size(); ++j) q(j, comp[j]) = 1;
    for (std::size_t i = 0; i < rows_.size(); ++i)
      for (std::size_t j = 0; j < comp.size(); ++j) q(j, pivots_[i]) = f.neg(rows_[i][comp[j]]);
    return q;
  }

  DenseMatrix complement_lift() const {
    auto comp = complement();
    DenseMatrix l(ambient_, comp.size(), p_);
    for (std::size_t j = 0; j < comp.size(); ++j) l(comp[j], j) = 1;
    return l;
  }

 private:
  void check_len(const Vec& v) const {
    if (v.size() != ambient_) throw InputError("vector length does not match ambient dimension");
  }

  std::size_t ambient_ = 0;
  std::uint32_t p_ = 2;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace fistab::exactlin
