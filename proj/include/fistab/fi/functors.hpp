#pragma once

#include <vector>

#include "fistab/fi/construct.hpp"
#include "fistab/fi/module.hpp"

namespace fistab::fi {

// (Sigma M)_n = M_{n+1}, the new point being the last one. Width drops by one.
inline TruncatedFIModule shift_once(const TruncatedFIModule& M) {
  if (M.width() < 1) throw WindowExhausted("shift needs width >= 1");
  TruncatedFIModule S(M.p(), M.width() - 1);
  for (int n = 0; n <= S.width(); ++n) {
    std::vector<DenseMatrix> t(M.transpositions(n + 1).begin(), M.transpositions(n + 1).begin() + (n ? n - 1 : 0));
    DenseMatrix phi = n ? M.transposition(n + 1, n - 1) * M.inclusion(n + 1) : DenseMatrix(M.dim(1), 0, M.p());
    S.set_level(n, M.dim(n + 1), std::move(t), std::move(phi));
  }
  return S;
}

inline TruncatedFIModule shift(const TruncatedFIModule& M, int a) {
  if (a < 0) throw InputError("negative shift");
  if (a > M.width()) throw WindowExhausted("shift by " + std::to_string(a) + " exceeds width " + std::to_string(M.width()));
  TruncatedFIModule S = M;
  for (int i = 0; i < a; ++i) S = shift_once(S);
  return S;
}

// The natural map M -> Sigma^a M, degreewise the composite of structure maps.
inline FIMap shift_map(const TruncatedFIModule& M, int a) {
  FIMap f;
  f.target = shift(M, a);
  f.source = M;
  TruncatedFIModule src(M.p(), f.target.width());
  for (int n = 0; n <= src.width(); ++n) {
    std::vector<DenseMatrix> t(M.transpositions(n).begin(), M.transpositions(n).end());
    src.set_level(n, M.dim(n), std::move(t), n ? M.inclusion(n) : DenseMatrix(M.dim(0), 0, M.p()));
    f.maps.push_back(M.composite_inclusion(n, n + a));
  }
  f.source = src;
  return f;
}

// Q_a M = coker(M -> Sigma^a M); a = 1 is the derivative.
inline TruncatedFIModule derivative(const TruncatedFIModule& M, int a = 1) { return cokernel(shift_map(M, a)); }

inline TruncatedFIModule iterated_derivative(const TruncatedFIModule& M, int times) {
  TruncatedFIModule D = M;
  for (int i = 0; i < times; ++i) D = derivative(D, 1);
  return D;
}

// Restriction to degrees <= N'.
inline TruncatedFIModule truncate(const TruncatedFIModule& M, int width) {
  if (width > M.width() || width < 0) throw InputError("truncate outside window");
  TruncatedFIModule T(M.p(), width);
  for (int n = 0; n <= width; ++n)
    T.set_level(n, M.dim(n), M.transpositions(n), n ? M.inclusion(n) : DenseMatrix(M.dim(0), 0, M.p()));
  return T;
}

// Dimension of the elements of M_n that die by degree N. Only torsion that is
// killed inside the window is visible.
struct TorsionProfile {
  std::vector<std::size_t> dims;
  Degree h0_observed = -1;  // largest n with nonzero observed torsion
};

inline TorsionProfile observed_torsion(const TruncatedFIModule& M) {
  TorsionProfile t;
  const int N = M.width();
  for (int n = 0; n <= N; ++n) {
    const std::size_t k = M.dim(n) - exactlin::rank(M.composite_inclusion(n, N));
    t.dims.push_back(k);
    if (k) t.h0_observed = n;
  }
  return t;
}

inline bool is_observed_torsion(const TruncatedFIModule& M) {
  const auto t = observed_torsion(M);
  for (int n = 0; n <= M.width(); ++n)
    if (t.dims[n] != M.dim(n)) return false;
  return true;
}

// Termwise shift of a complex; the differential at degree n is d at n + 1.
inline FIComplexWindow shift(const FIComplexWindow& C) {
  C.check_shapes();
  FIComplexWindow S;
  S.jmin = C.jmin;
  S.jmax = C.jmax;
  for (const auto& m : C.modules) S.modules.push_back(shift_once(m));
  for (const auto& levels : C.differentials)
    S.differentials.emplace_back(levels.begin() + 1, levels.end());
  return S;
}

// H_j(C) = ker d_j / im d_{j+1} as a module over the window.
inline TruncatedFIModule complex_homology(const FIComplexWindow& C, int j) {
  C.check_shapes();
  if (j < C.jmin || j > C.jmax) throw InputError("homological degree outside the complex");
  const auto& M = C.module(j);
  std::vector<Subspace> Z;
  for (int n = 0; n <= C.width(); ++n)
    Z.push_back(j > C.jmin ? Subspace::span_of_columns(exactlin::kernel_basis(C.d(j, n)))
                           : Subspace::span_of_columns(DenseMatrix::identity(M.dim(n), M.p())));
  const auto z = submodule(M, Z);
  std::vector<Subspace> B;
  for (int n = 0; n <= C.width(); ++n) {
    if (j < C.jmax)
      B.push_back(Subspace::span_of_columns(Z[n].coordinates_matrix(C.d(j + 1, n))));
    else
      B.emplace_back(z.module.dim(n), M.p());
  }
  return quotient(z.module, B).module;
}

}  // namespace fistab::fi
