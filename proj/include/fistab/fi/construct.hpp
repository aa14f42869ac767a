#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_map>
#include <vector>

#include "fistab/combinatorics.hpp"
#include "fistab/exactlin/dense.hpp"
#include "fistab/fi/module.hpp"

namespace fistab::fi {

using exactlin::Subspace;
using exactlin::Vec;

// ---- FB windows ---------------------------------------------------------

inline FBModuleWindow fb_zero(std::uint32_t p, int top) {
  FBModuleWindow v;
  v.p = p;
  v.dims.assign(top + 1, 0);
  v.transpositions.resize(top + 1);
  for (int m = 0; m <= top; ++m) v.transpositions[m].assign(m ? m - 1 : 0, DenseMatrix(0, 0, p));
  return v;
}

inline FBModuleWindow fb_direct_sum(const FBModuleWindow& a, const FBModuleWindow& b) {
  if (a.p != b.p) throw InputError("FB direct sum: moduli differ");
  const int top = std::max(a.top(), b.top());
  FBModuleWindow s = fb_zero(a.p, top);
  for (int m = 0; m <= top; ++m) {
    const bool ha = m <= a.top(), hb = m <= b.top();
    s.dims[m] = (ha ? a.dims[m] : 0) + (hb ? b.dims[m] : 0);
    for (int i = 0; i + 1 < m; ++i) {
      DenseMatrix x = ha ? a.transpositions[m][i] : DenseMatrix(0, 0, a.p);
      DenseMatrix y = hb ? b.transpositions[m][i] : DenseMatrix(0, 0, a.p);
      s.transpositions[m][i] = DenseMatrix::block_diagonal(x, y);
    }
  }
  return s;
}

// A one-dimensional representation of S_m, trivial or sign, placed at degree m.
inline FBModuleWindow fb_character(std::uint32_t p, int m, bool sign) {
  FBModuleWindow v = fb_zero(p, m);
  v.dims[m] = 1;
  for (int i = 0; i + 1 < m; ++i) {
    DenseMatrix a(1, 1, p);
    a(0, 0) = sign ? p - 1 : 1 % p;
    v.transpositions[m][i] = a;
  }
  return v;
}

inline FBModuleWindow fb_trivial(std::uint32_t p, int m) { return fb_character(p, m, false); }
inline FBModuleWindow fb_sign(std::uint32_t p, int m) { return fb_character(p, m, true); }

// k[S_m] with S_m acting by left multiplication; basis in lexicographic order.
inline FBModuleWindow fb_regular(std::uint32_t p, int m) {
  FBModuleWindow v = fb_zero(p, m);
  auto perms = comb::permutations(m);
  v.dims[m] = perms.size();
  for (int i = 0; i + 1 < m; ++i) {
    DenseMatrix a(perms.size(), perms.size(), p);
    for (std::size_t c = 0; c < perms.size(); ++c) {
      auto q = perms[c];
      for (auto& x : q)
        if (x == i) x = i + 1;
        else if (x == i + 1) x = i;
      a(comb::permutation_rank(q), c) = 1;
    }
    v.transpositions[m][i] = a;
  }
  return v;
}

// ---- induced modules ----------------------------------------------------

// Basis of I(V)_n: (j, j-subset A of [n], basis index b of V_j), ordered by j,
// then A lexicographically, then b.
struct InducedBasis {
  std::vector<std::size_t> offset_of_j;                        // first index with this j
  std::vector<std::unordered_map<std::uint32_t, std::size_t>> offset;  // [j][mask(A)]
  std::size_t size = 0;

  InducedBasis(const FBModuleWindow& V, int n) {
    const int J = std::min(V.top(), n);
    offset.resize(J + 1);
    offset_of_j.resize(J + 1);
    for (int j = 0; j <= J; ++j) {
      offset_of_j[j] = size;
      for (const auto& A : comb::subsets(n, j)) {
        offset[j][comb::mask_of(A)] = size;
        size += V.dims[j];
      }
    }
  }
  std::size_t index(int j, std::uint32_t mask, std::size_t b) const { return offset[j].at(mask) + b; }
};

inline TruncatedFIModule induced(const FBModuleWindow& V, int N) {
  V.check();
  const std::uint32_t p = V.p;
  TruncatedFIModule M(p, N);
  std::vector<InducedBasis> bases;
  for (int n = 0; n <= N; ++n) bases.emplace_back(V, n);
  for (int n = 0; n <= N; ++n) {
    const auto& B = bases[n];
    const int J = std::min(V.top(), n);
    std::vector<DenseMatrix> trans;
    for (int i = 0; i + 1 < n; ++i) {
      DenseMatrix a(B.size, B.size, p);
      for (int j = 0; j <= J; ++j) {
        for (const auto& A : comb::subsets(n, j)) {
          const std::uint32_t mask = comb::mask_of(A);
          const bool hi = (mask >> i) & 1, hj = (mask >> (i + 1)) & 1;
          std::uint32_t img = mask;
          if (hi != hj) img ^= (1u << i) | (1u << (i + 1));
          if (hi && hj) {
            // both points move inside A: the straightening permutation is s_k
            const int k = static_cast<int>(std::find(A.begin(), A.end(), i) - A.begin());
            const auto& t = V.transpositions[j][k];
            for (std::size_t b = 0; b < V.dims[j]; ++b)
              for (std::size_t r = 0; r < V.dims[j]; ++r)
                if (t(r, b)) a(B.index(j, img, r), B.index(j, mask, b)) = t(r, b);
          } else {
            for (std::size_t b = 0; b < V.dims[j]; ++b) a(B.index(j, img, b), B.index(j, mask, b)) = 1;
          }
        }
      }
      trans.push_back(std::move(a));
    }
    DenseMatrix phi(B.size, n ? bases[n - 1].size : 0, p);
    if (n > 0) {
      const int Jp = std::min(V.top(), n - 1);
      for (int j = 0; j <= Jp; ++j)
        for (const auto& A : comb::subsets(n - 1, j)) {
          const std::uint32_t mask = comb::mask_of(A);
          for (std::size_t b = 0; b < V.dims[j]; ++b)
            phi(B.index(j, mask, b), bases[n - 1].index(j, mask, b)) = 1;
        }
    }
    M.set_level(n, B.size, std::move(trans), std::move(phi));
  }
  return M;
}

inline TruncatedFIModule constant(std::uint32_t p, int N) { return induced(fb_trivial(p, 0), N); }

inline TruncatedFIModule free_module(std::uint32_t p, int m, int N) { return induced(fb_regular(p, m), N); }

inline TruncatedFIModule torsion_point(std::uint32_t p, int m, int N) {
  if (m < 0 || m > N) throw InputError("torsion point degree outside window");
  TruncatedFIModule M(p, N);
  for (int n = 0; n <= N; ++n) {
    const std::size_t d = n == m ? 1 : 0;
    std::vector<DenseMatrix> t(n ? n - 1 : 0, DenseMatrix::identity(d, p));
    M.set_level(n, d, std::move(t), DenseMatrix(d, n ? M.dim(n - 1) : 0, p));
  }
  return M;
}

inline TruncatedFIModule direct_sum(const TruncatedFIModule& a, const TruncatedFIModule& b) {
  if (a.p() != b.p() || a.width() != b.width()) throw InputError("direct sum: windows or moduli differ");
  TruncatedFIModule M(a.p(), a.width());
  for (int n = 0; n <= a.width(); ++n) {
    std::vector<DenseMatrix> t;
    for (int i = 0; i + 1 < n; ++i)
      t.push_back(DenseMatrix::block_diagonal(a.transposition(n, i), b.transposition(n, i)));
    DenseMatrix phi = n ? DenseMatrix::block_diagonal(a.inclusion(n), b.inclusion(n))
                        : DenseMatrix(a.dim(0) + b.dim(0), 0, a.p());
    M.set_level(n, a.dim(n) + b.dim(n), std::move(t), std::move(phi));
  }
  return M;
}

// ---- sub- and quotient modules -------------------------------------------

// Smallest submodule containing the given elements (degree, vector).
inline std::vector<Subspace> generated_submodule(const TruncatedFIModule& X,
                                                 const std::vector<std::pair<int, Vec>>& gens) {
  std::vector<Subspace> U;
  for (int n = 0; n <= X.width(); ++n) {
    Subspace s(X.dim(n), X.p());
    std::vector<Vec> queue;
    auto push = [&](const Vec& v) {
      if (s.add(v)) queue.push_back(v);
    };
    if (n > 0) {
      DenseMatrix img = X.inclusion(n) * U[n - 1].basis_columns();
      for (std::size_t c = 0; c < img.cols(); ++c) push(img.column(c));
    }
    for (const auto& [deg, v] : gens)
      if (deg == n) push(v);
    while (!queue.empty()) {
      Vec v = std::move(queue.back());
      queue.pop_back();
      for (int i = 0; i + 1 < n; ++i) push(X.transposition(n, i).apply(v));
    }
    U.push_back(std::move(s));
  }
  return U;
}

struct QuotientResult {
  TruncatedFIModule module;
  std::vector<DenseMatrix> projection;  // X_n -> (X/U)_n
  std::vector<DenseMatrix> lift;        // section of the projection
};

// X / U, with quotient bases given by the non-pivot coordinates of U_n.
inline QuotientResult quotient(const TruncatedFIModule& X, const std::vector<Subspace>& U) {
  QuotientResult r;
  r.module = TruncatedFIModule(X.p(), X.width());
  for (int n = 0; n <= X.width(); ++n) {
    r.projection.push_back(U[n].quotient_projection());
    r.lift.push_back(U[n].complement_lift());
    const auto& P = r.projection[n];
    const auto& L = r.lift[n];
    std::vector<DenseMatrix> t;
    for (int i = 0; i + 1 < n; ++i) t.push_back(P * X.transposition(n, i) * L);
    DenseMatrix phi = n ? P * X.inclusion(n) * r.lift[n - 1] : DenseMatrix(P.rows(), 0, X.p());
    r.module.set_level(n, P.rows(), std::move(t), std::move(phi));
  }
  return r;
}

struct SubmoduleResult {
  TruncatedFIModule module;
  std::vector<DenseMatrix> inclusion;  // K_n -> X_n
};

inline SubmoduleResult submodule(const TruncatedFIModule& X, const std::vector<Subspace>& K) {
  SubmoduleResult r;
  r.module = TruncatedFIModule(X.p(), X.width());
  for (int n = 0; n <= X.width(); ++n) {
    r.inclusion.push_back(K[n].basis_columns());
    const auto& B = r.inclusion[n];
    std::vector<DenseMatrix> t;
    for (int i = 0; i + 1 < n; ++i) t.push_back(K[n].coordinates_matrix(X.transposition(n, i) * B));
    DenseMatrix phi =
        n ? K[n].coordinates_matrix(X.inclusion(n) * r.inclusion[n - 1]) : DenseMatrix(B.cols(), 0, X.p());
    r.module.set_level(n, B.cols(), std::move(t), std::move(phi));
  }
  return r;
}

// ---- maps ----------------------------------------------------------------

struct FIMap {
  TruncatedFIModule source, target;
  std::vector<DenseMatrix> maps;  // source_n -> target_n
};

inline bool is_natural(const FIMap& f) {
  for (int n = 0; n <= f.source.width(); ++n) {
    for (int i = 0; i + 1 < n; ++i)
      if (!(f.maps[n] * f.source.transposition(n, i) == f.target.transposition(n, i) * f.maps[n])) return false;
    if (n > 0 && !(f.maps[n] * f.source.inclusion(n) == f.target.inclusion(n) * f.maps[n - 1])) return false;
  }
  return true;
}

inline std::vector<Subspace> image_subspaces(const FIMap& f) {
  std::vector<Subspace> out;
  for (const auto& m : f.maps) out.push_back(Subspace::span_of_columns(m));
  return out;
}

inline std::vector<Subspace> kernel_subspaces(const FIMap& f) {
  std::vector<Subspace> out;
  for (const auto& m : f.maps) out.push_back(Subspace::span_of_columns(exactlin::kernel_basis(m)));
  return out;
}

inline TruncatedFIModule kernel(const FIMap& f) { return submodule(f.source, kernel_subspaces(f)).module; }
inline TruncatedFIModule cokernel(const FIMap& f) { return quotient(f.target, image_subspaces(f)).module; }
inline TruncatedFIModule image(const FIMap& f) { return submodule(f.target, image_subspaces(f)).module; }

// A free module is I(V) with V a sum of regular representations. A map out of
// it is determined by where each generator goes.
struct FreeSpec {
  std::vector<int> degrees;  // one regular summand per entry
};

inline FBModuleWindow fb_free(std::uint32_t p, const FreeSpec& s) {
  int top = 0;
  for (int d : s.degrees) top = std::max(top, d);
  FBModuleWindow v = fb_zero(p, top);
  for (int d : s.degrees) v = fb_direct_sum(v, fb_regular(p, d));
  return v;
}

inline TruncatedFIModule free_sum(std::uint32_t p, const FreeSpec& s, int N) { return induced(fb_free(p, s), N); }

// images[g] lies in target_{degrees[g]}.
inline FIMap free_map(const FreeSpec& s, const TruncatedFIModule& target, const std::vector<Vec>& images) {
  const std::uint32_t p = target.p();
  const int N = target.width();
  FIMap f;
  f.source = free_sum(p, s, N);
  f.target = target;
  // the order of summands inside each degree of fb_free follows s.degrees
  int top = 0;
  for (int d : s.degrees) top = std::max(top, d);
  std::vector<std::vector<std::size_t>> gens_at(top + 1);
  for (std::size_t g = 0; g < s.degrees.size(); ++g) gens_at[s.degrees[g]].push_back(g);
  const FBModuleWindow V = fb_free(p, s);
  for (int n = 0; n <= N; ++n) {
    InducedBasis B(V, n);
    DenseMatrix m(target.dim(n), B.size, p);
    for (int j = 0; j <= std::min(top, n); ++j) {
      if (gens_at[j].empty()) continue;
      const auto perms = comb::permutations(j);
      for (const auto& A : comb::subsets(n, j)) {
        const std::uint32_t mask = comb::mask_of(A);
        for (std::size_t pi = 0; pi < perms.size(); ++pi) {
          std::vector<int> inj(j);
          for (int t = 0; t < j; ++t) inj[t] = A[perms[pi][t]];
          const DenseMatrix fm = target.injection_matrix(j, n, inj);
          for (std::size_t k = 0; k < gens_at[j].size(); ++k) {
            const Vec img = fm.apply(images[gens_at[j][k]]);
            const std::size_t col = B.index(j, mask, k * perms.size() + pi);
            for (std::size_t r = 0; r < img.size(); ++r) m(r, col) = img[r];
          }
        }
      }
    }
    f.maps.push_back(std::move(m));
  }
  return f;
}

inline Vec random_vector(std::mt19937_64& rng, std::size_t n, std::uint32_t p) {
  std::uniform_int_distribution<std::uint32_t> d(0, p - 1);
  Vec v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

struct RandomPresentedSpec {
  std::uint64_t seed = 0;
  std::uint32_t p = 2;
  int gen_deg = 1;
  int rel_deg = 2;
  int N = 6;
  int gen_count = 2;
  int rel_count = 2;
};

// coker(I(W) -> I(V)) with V, W sums of regular representations. One summand
// of V sits at gen_deg and one of W at rel_deg; the rest are drawn below.
inline TruncatedFIModule random_presented(const RandomPresentedSpec& spec) {
  if (spec.gen_deg < 0 || spec.rel_deg < 0 || spec.gen_count < 1 || spec.rel_count < 0)
    throw InputError("random_presented: bad degrees or counts");
  std::mt19937_64 rng(spec.seed);
  FreeSpec gens{{spec.gen_deg}}, rels;
  for (int i = 1; i < spec.gen_count; ++i)
    gens.degrees.push_back(std::uniform_int_distribution<int>(0, spec.gen_deg)(rng));
  if (spec.rel_count > 0) rels.degrees.push_back(spec.rel_deg);
  for (int i = 1; i < spec.rel_count; ++i)
    rels.degrees.push_back(std::uniform_int_distribution<int>(0, spec.rel_deg)(rng));
  std::sort(gens.degrees.begin(), gens.degrees.end());
  std::sort(rels.degrees.begin(), rels.degrees.end());
  const TruncatedFIModule X = free_sum(spec.p, gens, spec.N);
  std::vector<std::pair<int, Vec>> relations;
  for (int d : rels.degrees)
    if (d <= spec.N) relations.emplace_back(d, random_vector(rng, X.dim(d), spec.p));
  return quotient(X, generated_submodule(X, relations)).module;
}

}  // namespace fistab::fi
