#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fistab/error.hpp"
#include "fistab/exactlin/dense.hpp"

namespace fistab::fi {

using exactlin::DenseMatrix;

// Degrees of FI-modules; -1 stands for the zero module.
using Degree = int;

// Indices are 0-based throughout: transposition i of S_n swaps points i and
// i+1 of {0..n-1}, and the inclusion at degree n is the standard map
// {0..n-2} -> {0..n-1}.

// Representations of S_0, ..., S_D with no maps between degrees.
struct FBModuleWindow {
  std::uint32_t p = 2;
  std::vector<std::size_t> dims;
  std::vector<std::vector<DenseMatrix>> transpositions;  // [m][i], i < m-1

  int top() const { return static_cast<int>(dims.size()) - 1; }
  void check() const {
    if (transpositions.size() != dims.size()) throw DimensionMismatch(top(), "FB window is ragged");
    for (std::size_t m = 0; m < dims.size(); ++m) {
      if (transpositions[m].size() != (m ? m - 1 : 0))
        throw DimensionMismatch(static_cast<int>(m), "wrong number of transpositions");
      for (const auto& a : transpositions[m])
        if (a.rows() != dims[m] || a.cols() != dims[m] || a.modulus() != p)
          throw DimensionMismatch(static_cast<int>(m), "transposition is not dim x dim");
    }
  }
};

class TruncatedFIModule {
 public:
  TruncatedFIModule() = default;
  TruncatedFIModule(std::uint32_t p, int N) : p_(p), N_(N) {
    if (N < 0) throw InputError("window width must be non-negative");
    exactlin::PrimeField check(p);
    (void)check;
    dims_.assign(N + 1, 0);
    transpositions_.resize(N + 1);
    inclusions_.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
      transpositions_[n].assign(n ? n - 1 : 0, DenseMatrix(0, 0, p));
      inclusions_[n] = DenseMatrix(0, 0, p);
    }
  }

  std::uint32_t p() const noexcept { return p_; }
  int width() const noexcept { return N_; }
  std::size_t dim(int n) const { return dims_.at(n); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  const DenseMatrix& transposition(int n, int i) const { return transpositions_.at(n).at(i); }
  const std::vector<DenseMatrix>& transpositions(int n) const { return transpositions_.at(n); }
  // Structure map M_{n-1} -> M_n; only meaningful for n >= 1.
  const DenseMatrix& inclusion(int n) const { return inclusions_.at(n); }

  // Replaces level n. Shapes are checked against the current dims of n-1.
  void set_level(int n, std::size_t dim, std::vector<DenseMatrix> transpositions, DenseMatrix inclusion) {
    if (n < 0 || n > N_) throw InputError("level out of window");
    if (transpositions.size() != static_cast<std::size_t>(n ? n - 1 : 0))
      throw DimensionMismatch(n, "expected " + std::to_string(n ? n - 1 : 0) + " transpositions");
    for (const auto& a : transpositions)
      if (a.rows() != dim || a.cols() != dim || a.modulus() != p_)
        throw DimensionMismatch(n, "transposition shape " + DenseMatrix::shape(a) + ", dim " + std::to_string(dim));
    if (n > 0 && (inclusion.rows() != dim || inclusion.cols() != dims_[n - 1] || inclusion.modulus() != p_))
      throw DimensionMismatch(n, "inclusion shape " + DenseMatrix::shape(inclusion) + ", expected " +
                                     std::to_string(dim) + "x" + std::to_string(dims_[n - 1]));
    dims_[n] = dim;
    transpositions_[n] = std::move(transpositions);
    inclusions_[n] = n > 0 ? std::move(inclusion) : DenseMatrix(dim, 0, p_);
  }

  // rho_n(sigma) for sigma in one-line notation on {0..n-1}.
  DenseMatrix permutation_matrix(int n, std::vector<int> w) const {
    // Peel descents from the right: sigma = sigma' s_i with sigma' = sigma s_i.
    DenseMatrix rho = DenseMatrix::identity(dims_.at(n), p_);
    for (;;) {
      int i = 0;
      while (i + 1 < n && w[i] < w[i + 1]) ++i;
      if (i + 1 >= n) break;
      std::swap(w[i], w[i + 1]);
      rho = transpositions_[n][i] * rho;
    }
    return rho;
  }

  // Phi_n ... Phi_{m+1} : M_m -> M_n.
  DenseMatrix composite_inclusion(int m, int n) const {
    DenseMatrix out = DenseMatrix::identity(dims_.at(m), p_);
    for (int k = m + 1; k <= n; ++k) out = inclusions_.at(k) * out;
    return out;
  }

  // f_* for an injection f : {0..m-1} -> {0..n-1} given by its images.
  DenseMatrix injection_matrix(int m, int n, const std::vector<int>& f) const {
    std::vector<int> sigma(f.begin(), f.end());
    std::vector<char> used(n, 0);
    for (int x : f) {
      if (x < 0 || x >= n || used[x]) throw InputError("not an injection");
      used[x] = 1;
    }
    for (int x = 0; x < n; ++x)
      if (!used[x]) sigma.push_back(x);
    return permutation_matrix(n, sigma) * composite_inclusion(m, n);
  }

 private:
  std::uint32_t p_ = 2;
  int N_ = 0;
  std::vector<std::size_t> dims_;
  std::vector<std::vector<DenseMatrix>> transpositions_;
  std::vector<DenseMatrix> inclusions_;
};

// Face maps of the module: face[m][j] : M_m -> M_{m+1} induced by the
// order-preserving injection {0..m-1} -> {0..m} that misses j.
inline std::vector<std::vector<DenseMatrix>> face_maps(const TruncatedFIModule& M) {
  std::vector<std::vector<DenseMatrix>> faces(M.width());
  for (int m = 0; m < M.width(); ++m) {
    faces[m].resize(m + 1);
    // sigma_j = s_j s_{j+1} ... s_{m-1}; build right to left
    DenseMatrix acc = M.inclusion(m + 1);
    faces[m][m] = acc;
    for (int j = m - 1; j >= 0; --j) {
      acc = M.transposition(m + 1, j) * acc;
      faces[m][j] = acc;
    }
  }
  return faces;
}

struct Violation {
  std::string check;
  int n = 0;
  std::vector<int> witness;
};

struct ValidationReport {
  bool pass = true;
  std::vector<Violation> violations;
  void add(std::string check, int n, std::vector<int> witness) {
    pass = false;
    violations.push_back({std::move(check), n, std::move(witness)});
  }
};

// Checks the Coxeter relations of each S_n, equivariance of the structure
// maps, and the two-step symmetry relation. Together these are a complete
// presentation of FI restricted to the window.
inline ValidationReport validate(const TruncatedFIModule& M) {
  ValidationReport rep;
  for (int n = 0; n <= M.width(); ++n) {
    const auto& A = M.transpositions(n);
    const auto I = DenseMatrix::identity(M.dim(n), M.p());
    for (int i = 0; i + 1 < n; ++i) {
      if (!(A[i] * A[i] == I)) rep.add("involution", n, {i});
      if (i + 2 < n && !(A[i] * A[i + 1] * A[i] == A[i + 1] * A[i] * A[i + 1])) rep.add("braid", n, {i, i + 1});
      for (int j = i + 2; j + 1 < n; ++j)
        if (!(A[i] * A[j] == A[j] * A[i])) rep.add("commutation", n, {i, j});
    }
    if (n == 0) continue;
    const auto& phi = M.inclusion(n);
    for (int i = 0; i + 2 < n; ++i)
      if (!(A[i] * phi == phi * M.transposition(n - 1, i))) rep.add("equivariance", n, {i});
    if (n >= 2) {
      DenseMatrix two = phi * M.inclusion(n - 1);
      if (!(A[n - 2] * two == two)) rep.add("two-step symmetry", n, {n - 2});
    }
  }
  return rep;
}

// A bounded complex of FI-modules M_jmin <- ... <- M_jmax, all with the same
// width and modulus. differentials[t][n] is d_{jmin+1+t} at degree n.
struct FIComplexWindow {
  int jmin = 0;
  int jmax = 0;
  std::vector<TruncatedFIModule> modules;
  std::vector<std::vector<DenseMatrix>> differentials;

  const TruncatedFIModule& module(int j) const { return modules.at(j - jmin); }
  const DenseMatrix& d(int j, int n) const { return differentials.at(j - jmin - 1).at(n); }
  int width() const { return modules.empty() ? -1 : modules.front().width(); }
  std::uint32_t p() const { return modules.empty() ? 2 : modules.front().p(); }

  void check_shapes() const {
    if (jmax < jmin || modules.size() != static_cast<std::size_t>(jmax - jmin + 1) ||
        differentials.size() != static_cast<std::size_t>(jmax - jmin))
      throw InputError("complex has inconsistent range");
    for (const auto& m : modules)
      if (m.width() != width() || m.p() != p()) throw InputError("complex modules disagree on width or modulus");
    for (int j = jmin + 1; j <= jmax; ++j) {
      if (differentials[j - jmin - 1].size() != static_cast<std::size_t>(width() + 1))
        throw InputError("differential " + std::to_string(j) + " has the wrong number of levels");
      for (int n = 0; n <= width(); ++n) {
        const auto& dm = d(j, n);
        if (dm.rows() != module(j - 1).dim(n) || dm.cols() != module(j).dim(n) || dm.modulus() != p())
          throw DimensionMismatch(n, "differential " + std::to_string(j) + " has shape " + DenseMatrix::shape(dm));
      }
    }
  }
};

inline ValidationReport validate(const FIComplexWindow& C) {
  C.check_shapes();
  ValidationReport rep;
  for (const auto& m : C.modules)
    for (auto& v : validate(m).violations) rep.add(v.check, v.n, v.witness);
  for (int j = C.jmin + 1; j <= C.jmax; ++j) {
    const auto& src = C.module(j);
    const auto& dst = C.module(j - 1);
    for (int n = 0; n <= C.width(); ++n) {
      const auto& dn = C.d(j, n);
      for (int i = 0; i + 1 < n; ++i)
        if (!(dn * src.transposition(n, i) == dst.transposition(n, i) * dn))
          rep.add("differential equivariance", n, {j, i});
      if (n > 0 && !(dn * src.inclusion(n) == dst.inclusion(n) * C.d(j, n - 1)))
        rep.add("differential naturality", n, {j});
      if (j - 1 > C.jmin && !(C.d(j - 1, n) * dn).is_zero()) rep.add("d squared", n, {j});
    }
  }
  return rep;
}

}  // namespace fistab::fi
