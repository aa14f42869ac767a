#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fistab/bounds/formulas.hpp"
#include "fistab/congruence/group_homology.hpp"
#include "fistab/fi/module.hpp"
#include "fistab/homology/invariants.hpp"

namespace fistab::congruence {

using fi::TruncatedFIModule;

// An FI-module whose level n has a basis of combinatorial objects on [n],
// permuted up to sign by S_n, with structure maps sending each object to
// itself. `basis(n)` must list the objects in an order extending that of n-1;
// `act(x, w)` returns w.x and a sign.
using Object = std::vector<int>;

inline TruncatedFIModule signed_permutation_module(
    std::uint32_t p, int N, const std::function<std::vector<Object>(int)>& basis,
    const std::function<std::pair<Object, int>(const Object&, const std::vector<int>&)>& act) {
  TruncatedFIModule M(p, N);
  std::vector<Object> prev;
  for (int n = 0; n <= N; ++n) {
    auto B = basis(n);
    std::map<Object, std::size_t> pos;
    for (std::size_t i = 0; i < B.size(); ++i) pos.emplace(B[i], i);
    if (pos.size() != B.size()) throw ConsistencyError("basis objects repeat");
    std::vector<exactlin::DenseMatrix> ts;
    for (int i = 0; i + 1 < n; ++i) {
      std::vector<int> w(n);
      for (int x = 0; x < n; ++x) w[x] = x;
      std::swap(w[i], w[i + 1]);
      exactlin::DenseMatrix t(B.size(), B.size(), p);
      for (std::size_t c = 0; c < B.size(); ++c) {
        auto [img, sign] = act(B[c], w);
        auto it = pos.find(img);
        if (it == pos.end()) throw ConsistencyError("basis is not closed under S_n");
        t(it->second, c) = sign > 0 ? 1 % p : p - 1;
      }
      ts.push_back(std::move(t));
    }
    exactlin::DenseMatrix inc(B.size(), prev.size(), p);
    for (std::size_t c = 0; c < prev.size(); ++c) {
      auto it = pos.find(prev[c]);
      if (it == pos.end()) throw ConsistencyError("structure map leaves the basis");
      inc(it->second, c) = 1 % p;
    }
    M.set_level(n, B.size(), std::move(ts), std::move(inc));
    prev = std::move(B);
  }
  return M;
}

namespace detail {

// Matrix entries (a, b) of [n] x [n], encoded as a * 64 + b so that the
// order is the same for every n.
inline std::vector<int> entries(int n) {
  std::vector<int> e;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) e.push_back(a * 64 + b);
  return e;
}
inline int move_entry(int x, const std::vector<int>& w) { return w[x / 64] * 64 + w[x % 64]; }

}  // namespace detail

// H_k(GL_n(Z/p^2, p); F_p) for k = 1, 2 as FI-modules. The group is
// (Z/p)^{n^2} via I + pA -> A mod p, with S_n permuting matrix entries.
//   k = 1: the entry permutation module F_p^{n x n};
//   k = 2, p = 2: its divided square (squares and unordered pairs of entries);
//   k = 2, p odd: exterior square plus a copy of the entry module.
inline TruncatedFIModule hk_model(int k, std::uint32_t p, int N) {
  using detail::entries;
  using detail::move_entry;
  if (k == 1) {
    return signed_permutation_module(
        p, N,
        [](int n) {
          std::vector<Object> B;
          for (int x : entries(n)) B.push_back({x});
          return B;
        },
        [](const Object& o, const std::vector<int>& w) { return std::make_pair(Object{move_entry(o[0], w)}, 1); });
  }
  if (k != 2) throw InputError("only k = 1, 2 are modelled");
  if (p == 2) {
    return signed_permutation_module(
        p, N,
        [](int n) {
          std::vector<Object> B;
          const auto e = entries(n);
          for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i; j < e.size(); ++j) B.push_back({e[i], e[j]});
          std::sort(B.begin(), B.end());
          return B;
        },
        [](const Object& o, const std::vector<int>& w) {
          Object x{move_entry(o[0], w), move_entry(o[1], w)};
          std::sort(x.begin(), x.end());
          return std::make_pair(x, 1);
        });
  }
  return signed_permutation_module(
      p, N,
      [](int n) {
        std::vector<Object> B;
        const auto e = entries(n);
        for (std::size_t i = 0; i < e.size(); ++i) {
          B.push_back({0, e[i]});  // linear part
          for (std::size_t j = i + 1; j < e.size(); ++j) B.push_back({1, e[i], e[j]});
        }
        std::sort(B.begin(), B.end());
        return B;
      },
      [](const Object& o, const std::vector<int>& w) {
        if (o[0] == 0) return std::make_pair(Object{0, move_entry(o[1], w)}, 1);
        const int x = move_entry(o[1], w), y = move_entry(o[2], w);
        return x < y ? std::make_pair(Object{1, x, y}, 1) : std::make_pair(Object{1, y, x}, -1);
      });
}

struct HkGate {
  bool pass = true;
  std::vector<std::size_t> model_dims, oracle_dims;  // n = 0..2
  bool valid = false;
};

// The model is only trusted once it is a valid FI-module whose dimensions
// agree with the bar complex of the actual groups for n <= 2.
inline HkGate hk_gate(const TruncatedFIModule& M, int k, std::uint32_t p) {
  HkGate g;
  g.valid = fi::validate(M).pass;
  g.pass = g.valid;
  const splitbases::FiniteModRing R(p * p, p);
  for (int n = 0; n <= std::min(2, M.width()); ++n) {
    const auto G = FiniteGroup::from_congruence(splitbases::congruence_group(R, n));
    g.model_dims.push_back(M.dim(n));
    g.oracle_dims.push_back(bar_homology_oracle(G, k, p).dim);
    if (g.model_dims.back() != g.oracle_dims.back()) g.pass = false;
  }
  return g;
}

inline TruncatedFIModule hk_fi_module(int k, std::uint32_t p, int N) {
  if (!exactlin::is_prime(p)) throw InputError("p must be prime");
  if (k < 1 || k > 2) throw InputError("only k = 1, 2 are supported");
  if (N < 0 || N > 8) throw InputError("N must lie in 0..8");
  if (static_cast<std::uint64_t>(p) * p > 64) throw FeasibilityError("p^2 is too large for the group gate");
  auto M = hk_model(k, p, N);
  const auto g = hk_gate(M, k, p);
  if (!g.pass)
    throw ConsistencyError("H_" + std::to_string(k) + " model disagrees with the bar complex oracle for n <= 2" +
                           (g.valid ? "" : " (model fails FI validation)"));
  return M;
}

// ---- empirical check of the congruence subgroup bounds ---------------------

struct ApplicationB {
  int k = 1;
  std::uint32_t p = 2;
  int N = 0;
  std::vector<std::size_t> dims;
  fi::Degree t0 = -1, t1 = -1;
  homology::StableDegree delta;
  homology::LocalDegree hmax;
  homology::PolynomialFit fit;
  bounds::BoundsReport bound;
  bool delta_ok = false, t0_ok = false, onset_ok = false;
  bool pass() const { return delta_ok && t0_ok && onset_ok; }
};

inline ApplicationB application_b_empirical(int k, std::uint32_t p, int N) {
  ApplicationB r;
  r.k = k;
  r.p = p;
  r.N = N;
  const auto M = hk_fi_module(k, p, N);
  r.dims = M.dims();
  const auto inv = homology::invariants(M);
  r.t0 = inv.t0;
  r.t1 = inv.t1;
  r.delta = inv.delta;
  r.hmax = inv.hmax;
  r.fit = homology::polynomial_fit(M, inv.delta.value, inv.hmax.value, inv.certified);
  r.bound = bounds::congruence_bounds(0, k);
  r.delta_ok = r.delta.value <= r.bound.at("delta");
  r.t0_ok = r.t0 <= r.bound.at("t0");
  r.onset_ok = r.fit.onset <= r.bound.at("hmax") + 1;
  return r;
}

inline json to_json(const ApplicationB& r) {
  return {{"k", r.k},
          {"p", r.p},
          {"N", r.N},
          {"d", 0},
          {"dims", r.dims},
          {"t0", r.t0},
          {"t1", r.t1},
          {"delta", r.delta.value},
          {"delta_certified", r.delta.certified},
          {"hmax", r.hmax.value},
          {"hmax_certified", r.hmax.certified},
          {"fit", {{"degree", r.fit.degree}, {"coeffs_binomial_basis", r.fit.coeffs}, {"onset", r.fit.onset}}},
          {"bounds", bounds::to_json(r.bound)},
          {"checks", {{"delta_le_bound", r.delta_ok}, {"t0_le_bound", r.t0_ok}, {"onset_le_hmax_bound_plus_1", r.onset_ok}}},
          {"pass", r.pass()}};
}

}  // namespace fistab::congruence
