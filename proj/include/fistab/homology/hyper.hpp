#pragma once

#include <map>
#include <vector>

#include "fistab/fi/module.hpp"
#include "fistab/homology/koszul.hpp"

namespace fistab::homology {

using fi::FIComplexWindow;

// Hyper-FI-homology: homology of the total complex of the term-wise Koszul
// complexes. Tot_k = sum_{a + j = k} Koszul_a(M_j), d = d_Koszul + (-1)^a d_C.
struct HyperTable {
  int kmin = 0;
  int N = 0;
  std::vector<std::vector<std::size_t>> dims;  // [k - kmin][n]

  Degree degree(int k) const {
    if (k < kmin || k >= kmin + static_cast<int>(dims.size())) return -1;
    Degree d = -1;
    for (int n = 0; n <= N; ++n)
      if (dims[k - kmin][n]) d = n;
    return d;
  }
};

inline HyperTable hyper_fi_homology(const FIComplexWindow& C, int k_max) {
  C.check_shapes();
  HyperTable T;
  T.kmin = C.jmin;
  T.N = C.width();
  if (k_max < C.jmin) return T;
  T.dims.assign(k_max - C.jmin + 1, std::vector<std::size_t>(T.N + 1, 0));
  const std::uint32_t p = C.p();
  std::vector<FaceColumns> faces;
  for (const auto& m : C.modules) faces.emplace_back(m);
  for (int n = 0; n <= T.N; ++n) {
    SubsetIndex S(n);
    // block offsets of (a, j) inside Tot_{a+j}
    const int kmax_tot = std::min(k_max + 1, C.jmax + n);
    std::map<std::pair<int, int>, std::size_t> offset;
    std::vector<std::size_t> tot_dim(kmax_tot - C.jmin + 2, 0);
    for (int k = C.jmin; k <= kmax_tot; ++k)
      for (int j = C.jmin; j <= C.jmax; ++j) {
        const int a = k - j;
        if (a < 0 || a > n) continue;
        offset[{a, j}] = tot_dim[k - C.jmin];
        tot_dim[k - C.jmin] += S.by_size[a].size() * C.module(j).dim(n - a);
      }
    std::vector<std::size_t> rk(kmax_tot - C.jmin + 2, 0);
    for (int k = C.jmin + 1; k <= kmax_tot; ++k) {
      std::vector<SparseMatrixFp::Column> raw(tot_dim[k - C.jmin]);
      for (int j = C.jmin; j <= C.jmax; ++j) {
        const int a = k - j;
        if (a < 0 || a > n) continue;
        const auto& M = C.module(j);
        const std::size_t src = offset[{a, j}];
        if (a >= 1) {
          const std::size_t dst = offset[{a - 1, j}];
          koszul_columns(M, faces[j - C.jmin], S, a, [&](std::size_t c, std::size_t r, std::uint32_t v) {
            raw[src + c].emplace_back(static_cast<std::uint32_t>(dst + r), v);
          });
        }
        if (j - 1 >= C.jmin) {
          const std::size_t dst = offset[{a, j - 1}];
          const auto& d = C.d(j, n - a);
          const std::size_t sd = M.dim(n - a), td = C.module(j - 1).dim(n - a);
          for (std::size_t ri = 0; ri < S.by_size[a].size(); ++ri)
            for (std::size_t b = 0; b < sd; ++b)
              for (std::size_t r = 0; r < td; ++r) {
                std::uint32_t v = d(r, b);
                if (!v) continue;
                if (a % 2) v = p - v;
                raw[src + ri * sd + b].emplace_back(static_cast<std::uint32_t>(dst + ri * td + r), v);
              }
        }
      }
      SparseMatrixFp m(tot_dim[k - 1 - C.jmin], tot_dim[k - C.jmin], p);
      for (std::size_t c = 0; c < raw.size(); ++c) m.set_column(c, SparseMatrixFp::make_column(std::move(raw[c]), p));
      rk[k - C.jmin] = rank_of(m);
    }
    for (int k = C.jmin; k <= k_max; ++k) {
      if (k > kmax_tot) break;
      const std::size_t below = rk[k - C.jmin];
      const std::size_t above = k + 1 <= kmax_tot ? rk[k + 1 - C.jmin] : 0;
      T.dims[k - C.jmin][n] = tot_dim[k - C.jmin] - below - above;
    }
  }
  return T;
}

}  // namespace fistab::homology
