#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "fistab/combinatorics.hpp"
#include "fistab/exactlin/dense.hpp"
#include "fistab/exactlin/sparse.hpp"
#include "fistab/fi/module.hpp"

namespace fistab::homology {

using exactlin::DenseMatrix;
using exactlin::SparseMatrixFp;
using fi::Degree;
using fi::TruncatedFIModule;

// Rank of a sparse matrix, switching to packed dense elimination when the
// matrix is not actually sparse.
inline std::size_t rank_of(const SparseMatrixFp& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const double cells = static_cast<double>(m.rows()) * static_cast<double>(m.cols());
  if (cells <= 4.0e7 && static_cast<double>(m.nnz()) * 12.0 > cells) return exactlin::rank(m.to_dense());
  return exactlin::sparse_rank(m);
}

// Sparse column lists of every face map, so the Koszul assembly never scans zeros.
struct FaceColumns {
  // cols[m][j][b] : column b of the face map M_m -> M_{m+1} missing j
  std::vector<std::vector<std::vector<SparseMatrixFp::Column>>> cols;

  explicit FaceColumns(const TruncatedFIModule& M) {
    auto faces = fi::face_maps(M);
    cols.resize(faces.size());
    for (std::size_t m = 0; m < faces.size(); ++m) {
      cols[m].resize(faces[m].size());
      for (std::size_t j = 0; j < faces[m].size(); ++j) {
        const auto& f = faces[m][j];
        cols[m][j].resize(f.cols());
        for (std::size_t b = 0; b < f.cols(); ++b)
          for (std::size_t r = 0; r < f.rows(); ++r)
            if (f(r, b)) cols[m][j][b].emplace_back(static_cast<std::uint32_t>(r), f(r, b));
      }
    }
  }
};

// Positions of the k-subsets of [n] in lexicographic order, by bitmask.
struct SubsetIndex {
  int n = 0;
  std::vector<std::vector<std::vector<int>>> by_size;  // [k] -> subsets
  std::vector<std::uint32_t> position;                 // [mask]

  explicit SubsetIndex(int n_) : n(n_), position(std::size_t{1} << n_, 0) {
    for (int k = 0; k <= n; ++k) {
      by_size.push_back(comb::subsets(n, k));
      for (std::size_t i = 0; i < by_size[k].size(); ++i) position[comb::mask_of(by_size[k][i])] = static_cast<std::uint32_t>(i);
    }
  }
};

// Columns of the Koszul differential C_a -> C_{a-1} at degree n, where
// C_a = sum over a-subsets R of [n] of M_{n-a}. Column index is
// pos(R) * dim M_{n-a} + b; rows use the same scheme one level down.
// Removing the t-th smallest element of R carries the sign (-1)^t.
template <class Emit>
void koszul_columns(const TruncatedFIModule& M, const FaceColumns& F, const SubsetIndex& S, int a, Emit&& emit) {
  const int n = S.n;
  const std::uint32_t p = M.p();
  const std::size_t src_dim = M.dim(n - a), dst_dim = M.dim(n - a + 1);
  for (std::size_t ri = 0; ri < S.by_size[a].size(); ++ri) {
    const auto& R = S.by_size[a][ri];
    const std::uint32_t rmask = comb::mask_of(R);
    for (int t = 0; t < a; ++t) {
      const int r = R[t];
      const std::uint32_t rest = rmask & ~(1u << r);
      // r's position among the complement of rest, i.e. points of [n]\R below r
      int j = 0;
      for (int x = 0; x < r; ++x)
        if (!((rmask >> x) & 1)) ++j;
      const std::size_t row_base = static_cast<std::size_t>(S.position[rest]) * dst_dim;
      const bool negate = t % 2 == 1;
      for (std::size_t b = 0; b < src_dim; ++b)
        for (const auto& [row, v] : F.cols[n - a][j][b])
          emit(ri * src_dim + b, row_base + row, negate ? p - v : v);
    }
  }
}

inline SparseMatrixFp koszul_differential(const TruncatedFIModule& M, const FaceColumns& F, const SubsetIndex& S,
                                          int a) {
  const int n = S.n;
  const std::size_t rows = S.by_size[a - 1].size() * M.dim(n - a + 1);
  const std::size_t cols = S.by_size[a].size() * M.dim(n - a);
  std::vector<SparseMatrixFp::Column> raw(cols);
  koszul_columns(M, F, S, a, [&](std::size_t c, std::size_t r, std::uint32_t v) {
    raw[c].emplace_back(static_cast<std::uint32_t>(r), v);
  });
  SparseMatrixFp d(rows, cols, M.p());
  for (std::size_t c = 0; c < cols; ++c) d.set_column(c, SparseMatrixFp::make_column(std::move(raw[c]), M.p()));
  return d;
}

// dim H_i of the Koszul complex at degree n for i = 0..i_max.
inline std::vector<std::size_t> koszul_homology_at(const TruncatedFIModule& M, const FaceColumns& F, int n,
                                                   int i_max) {
  SubsetIndex S(n);
  const int top = std::min(n, i_max + 1);
  std::vector<std::size_t> dimC(top + 2, 0), rk(top + 2, 0);
  for (int a = 0; a <= top; ++a) dimC[a] = S.by_size[a].size() * M.dim(n - a);
  for (int a = 1; a <= top; ++a) rk[a] = rank_of(koszul_differential(M, F, S, a));
  std::vector<std::size_t> h(i_max + 1, 0);
  for (int i = 0; i <= std::min(i_max, n); ++i) h[i] = dimC[i] - rk[i] - rk[i + 1];
  return h;
}

struct HomologyTable {
  int N = 0;
  std::vector<std::vector<std::size_t>> dims;  // [i][n]

  int i_max() const { return static_cast<int>(dims.size()) - 1; }
  Degree degree(int i) const {
    Degree d = -1;
    for (int n = 0; n <= N; ++n)
      if (dims.at(i)[n]) d = n;
    return d;
  }
};

inline HomologyTable fi_homology_table(const TruncatedFIModule& M, int i_max) {
  if (i_max < 0) throw InputError("i_max must be non-negative");
  HomologyTable T;
  T.N = M.width();
  T.dims.assign(i_max + 1, std::vector<std::size_t>(T.N + 1, 0));
  FaceColumns F(M);
  for (int n = 0; n <= T.N; ++n) {
    auto h = koszul_homology_at(M, F, n, i_max);
    for (int i = 0; i <= i_max; ++i) T.dims[i][n] = h[i];
  }
  return T;
}

// Presentation degrees from induced representations instead of the Koszul
// complex: H_0 = coker(Ind M_{n-1} -> M_n), and H_1 from the unsigned pair of
// maps Ind_{S_{n-2}}^{S_n} M_{n-2} => Ind_{S_{n-1}}^{S_n} M_{n-1}.
struct PresentationDegrees {
  Degree t0 = -1, t1 = -1;
  std::vector<std::size_t> h0, h1;
};

inline PresentationDegrees presentation_degrees_via_induction(const TruncatedFIModule& M) {
  PresentationDegrees out;
  const std::uint32_t p = M.p();
  auto faces = fi::face_maps(M);
  for (int n = 0; n <= M.width(); ++n) {
    // Ind_{n-1}: basis (j, y) with j the missed point, y in M_{n-1}
    const std::size_t d1 = n ? M.dim(n - 1) : 0, d2 = n >= 2 ? M.dim(n - 2) : 0;
    const std::size_t ind1 = static_cast<std::size_t>(n) * d1;
    std::size_t r1 = 0, r2 = 0;
    if (n >= 1) {
      DenseMatrix e(M.dim(n), ind1, p);
      for (int j = 0; j < n; ++j) {
        const auto& f = faces[n - 1][j];
        for (std::size_t r = 0; r < f.rows(); ++r)
          for (std::size_t c = 0; c < d1; ++c) e(r, j * d1 + c) = f(r, c);
      }
      r1 = exactlin::rank(e);
    }
    if (n >= 2) {
      // ordered pairs (a, b): sigma(n-2) = a, sigma(n-1) = b; difference of the two maps
      const std::size_t pairs = static_cast<std::size_t>(n) * (n - 1);
      std::vector<SparseMatrixFp::Column> raw(pairs * d2);
      std::size_t idx = 0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          const int a_in_b = a - (a > b ? 1 : 0);  // position of a in [n]\{b}
          const int b_in_a = b - (b > a ? 1 : 0);
          const auto& fa = faces[n - 2][a_in_b];
          const auto& fb = faces[n - 2][b_in_a];
          for (std::size_t c = 0; c < d2; ++c) {
            auto& col = raw[idx * d2 + c];
            for (std::size_t r = 0; r < d1; ++r) {
              if (fa(r, c)) col.emplace_back(static_cast<std::uint32_t>(b * d1 + r), fa(r, c));
              if (fb(r, c)) col.emplace_back(static_cast<std::uint32_t>(a * d1 + r), p - fb(r, c));
            }
          }
          ++idx;
        }
      SparseMatrixFp diff(ind1, pairs * d2, p);
      for (std::size_t c = 0; c < raw.size(); ++c) diff.set_column(c, SparseMatrixFp::make_column(std::move(raw[c]), p));
      r2 = rank_of(diff);
    }
    out.h0.push_back(M.dim(n) - r1);
    out.h1.push_back(ind1 - r1 - r2);
    if (out.h0.back()) out.t0 = n;
    if (out.h1.back()) out.t1 = n;
  }
  return out;
}

// Both routes, cross-checked row by row.
inline PresentationDegrees presentation_degrees(const TruncatedFIModule& M, const HomologyTable* koszul = nullptr) {
  PresentationDegrees ind = presentation_degrees_via_induction(M);
  HomologyTable local;
  if (!koszul || koszul->i_max() < 1) {
    local = fi_homology_table(M, 1);
    koszul = &local;
  }
  for (int n = 0; n <= M.width(); ++n)
    if (ind.h0[n] != koszul->dims[0][n] || ind.h1[n] != koszul->dims[1][n])
      throw ConsistencyError("presentation degrees disagree at n=" + std::to_string(n) + ": induced (" +
                             std::to_string(ind.h0[n]) + "," + std::to_string(ind.h1[n]) + ") vs Koszul (" +
                             std::to_string(koszul->dims[0][n]) + "," + std::to_string(koszul->dims[1][n]) + ")");
  return ind;
}

// H_0 only; cheap enough to run on every shift.
inline Degree generation_degree(const TruncatedFIModule& M) {
  auto faces = fi::face_maps(M);
  Degree t0 = -1;
  for (int n = 0; n <= M.width(); ++n) {
    std::size_t r = 0;
    if (n >= 1) {
      const std::size_t d1 = M.dim(n - 1);
      DenseMatrix e(M.dim(n), static_cast<std::size_t>(n) * d1, M.p());
      for (int j = 0; j < n; ++j)
        for (std::size_t rr = 0; rr < M.dim(n); ++rr)
          for (std::size_t c = 0; c < d1; ++c) e(rr, j * d1 + c) = faces[n - 1][j](rr, c);
      r = exactlin::rank(e);
    }
    if (M.dim(n) > r) t0 = n;
  }
  return t0;
}

struct SemiInducedResult {
  bool semi_induced = true;
  std::optional<std::pair<int, int>> first_failure;  // (i, n)
};

// True iff H_i(M)_n = 0 for all 1 <= i <= n <= N.
inline SemiInducedResult is_semi_induced_window(const TruncatedFIModule& M) {
  SemiInducedResult r;
  FaceColumns F(M);
  for (int n = 1; n <= M.width(); ++n) {
    auto h = koszul_homology_at(M, F, n, n);
    for (int i = 1; i <= n; ++i)
      if (h[i]) {
        r.semi_induced = false;
        r.first_failure = {i, n};
        return r;
      }
  }
  return r;
}

}  // namespace fistab::homology
