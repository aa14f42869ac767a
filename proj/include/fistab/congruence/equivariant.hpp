#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fistab/congruence/group_homology.hpp"
#include "fistab/splitbases/complex.hpp"
#include "fistab/splitbases/spb.hpp"

namespace fistab::congruence {

using splitbases::FaceTable;
using splitbases::SimplicialComplex;

struct EquivariantInput {
  FiniteGroup group;
  SimplicialComplex complex;
  std::vector<std::vector<std::uint32_t>> action;  // [g][vertex] -> vertex
  std::uint32_t p = 2;
  int depth = 0;  // bar resolution degrees 0..depth
};

// Each element permutes vertices and maximal simplices; the action is a
// homomorphism on every pair for small groups, else on seeded samples.
inline void check_action(const EquivariantInput& E) {
  const auto& G = E.group;
  const std::size_t V = E.complex.vertices();
  if (E.action.size() != G.order()) throw InputError("need one vertex map per group element");
  const std::set<std::vector<std::uint32_t>> maximal(E.complex.maximal.begin(), E.complex.maximal.end());
  for (std::size_t g = 0; g < G.order(); ++g) {
    const auto& a = E.action[g];
    if (a.size() != V) throw InputError("vertex map has the wrong length");
    std::vector<char> hit(V, 0);
    for (auto v : a) {
      if (v >= V || hit[v]) throw InputError("group element does not act bijectively on vertices");
      hit[v] = 1;
    }
    for (const auto& s : E.complex.maximal) {
      std::vector<std::uint32_t> t;
      for (auto v : s) t.push_back(a[v]);
      std::sort(t.begin(), t.end());
      if (!maximal.count(t)) throw InputError("action does not preserve maximal simplices");
    }
  }
  auto check_pair = [&](std::size_t g, std::size_t h) {
    const auto& gh = E.action[G.mul(g, h)];
    for (std::size_t v = 0; v < V; ++v)
      if (gh[v] != E.action[g][E.action[h][v]]) throw InputError("vertex maps do not form a group action");
  };
  if (G.order() * G.order() <= 4096) {
    for (std::size_t g = 0; g < G.order(); ++g)
      for (std::size_t h = 0; h < G.order(); ++h) check_pair(g, h);
  } else {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 512; ++i) check_pair(rng() % G.order(), rng() % G.order());
  }
}

namespace detail {

// Blocks (a, b) of total degree a + b: bar tuples of length a over G \ 1
// (mixed radix) times faces of dimension b, b = -1 being the empty face.
struct TotalLayout {
  std::size_t nbar = 0;  // |G| - 1
  std::vector<std::size_t> faces;  // faces[b + 1]
  int depth = 0;

  std::size_t bar_count(int a) const { return a < 0 ? 0 : checked_power(nbar, a, "bar chains"); }
  std::size_t face_count(int b) const { return b + 1 < 0 || b + 1 >= static_cast<int>(faces.size()) ? 0 : faces[b + 1]; }
  int amin(int k) const { return std::max(0, k - (static_cast<int>(faces.size()) - 2)); }
  int amax(int k) const { return std::min(depth, k + 1); }
  std::size_t offset(int k, int a) const {
    std::size_t o = 0;
    for (int x = amin(k); x < a; ++x) o += bar_count(x) * face_count(k - x);
    return o;
  }
  std::size_t dim(int k) const {
    if (k < -1) return 0;
    const std::size_t d = offset(k, amax(k) + 1);
    if (d > max_cells()) throw FeasibilityError("total complex degree " + std::to_string(k) + " has " + std::to_string(d) +
                                              " cells, beyond the guard of " + max_cells_text());
    return d;
  }
};

}  // namespace detail

// Reduced equivariant homology: homology of the total complex of
// B_a (x)_G C~_b(X) over the normalized bar resolution, C~ augmented by the
// empty simplex in degree -1. With m.g = g^{-1} m,
//   d_h(m[g_1|..|g_a]) = (m.g_1)[g_2|..] + sum (-1)^i m[..|g_i g_{i+1}|..] + (-1)^a m[..|g_{a-1}],
// and d = d_h + (-1)^a d_v. Returns dims for k = -1..k_max.
inline std::vector<std::size_t> equivariant_homology(const EquivariantInput& E, int k_max) {
  if (k_max < -1) throw InputError("k_max must be >= -1");
  if (E.depth < k_max + 2)
    throw InputError("bar resolution depth " + std::to_string(E.depth) + " is below k_max + 2 = " +
                     std::to_string(k_max + 2) + ": degree k_max + 1 needs bar tuples of that length");
  if (!exactlin::is_prime(E.p)) throw InputError("coefficient modulus must be prime");
  check_action(E);
  const auto& G = E.group;
  const std::uint32_t p = E.p;
  const int bmax = std::min(k_max + 1, E.complex.dim());
  FaceTable F(E.complex, bmax);

  detail::TotalLayout L;
  L.nbar = G.order() - 1;
  L.depth = E.depth;
  L.faces.push_back(1);
  for (int b = 0; b <= bmax; ++b) L.faces.push_back(F.count(b));

  // act[b][g][s] = (image face, sign) for b >= 0
  struct Image {
    std::uint32_t face;
    bool negative;
  };
  std::vector<std::vector<std::vector<Image>>> act(bmax + 1);
  for (int b = 0; b <= bmax; ++b) {
    act[b].assign(G.order(), std::vector<Image>(F.count(b)));
    for (std::size_t g = 0; g < G.order(); ++g)
      for (std::size_t s = 0; s < F.count(b); ++s) {
        auto v = F.vertices(b, s);
        for (auto& x : v) x = E.action[g][x];
        int inversions = 0;
        for (std::size_t i = 0; i < v.size(); ++i)
          for (std::size_t j = i + 1; j < v.size(); ++j) inversions += v[i] > v[j];
        std::sort(v.begin(), v.end());
        const auto idx = F.find(v);
        if (idx < 0) throw ConsistencyError("action leaves the face table");
        act[b][g][s] = {static_cast<std::uint32_t>(idx), inversions % 2 == 1};
      }
  }
  // face boundaries: bd[b][s] = rows of faces of dim b - 1 with (-1)^i
  std::vector<exactlin::SparseMatrixFp> bd;
  for (int b = 0; b <= bmax; ++b) bd.push_back(F.boundary(b, p));

  auto neg = [p](std::uint32_t v) { return v ? p - v : 0u; };
  auto diff = [&](int k) {
    const std::size_t cols = L.dim(k), rows = L.dim(k - 1);
    std::vector<SparseMatrixFp::Column> raw(cols);
    std::vector<std::uint32_t> g, h;
    for (int a = L.amin(k); a <= L.amax(k); ++a) {
      const int b = k - a;
      const std::size_t nf = L.face_count(b), nb = L.bar_count(a), base = L.offset(k, a);
      if (!nf) continue;
      const bool down_h = a >= 1 && a - 1 >= L.amin(k - 1) && a - 1 <= L.amax(k - 1);
      const bool down_v = b >= 0 && a >= L.amin(k - 1) && a <= L.amax(k - 1);
      const std::size_t hbase = down_h ? L.offset(k - 1, a - 1) : 0, vbase = down_v ? L.offset(k - 1, a) : 0;
      const std::size_t nf_v = L.face_count(b - 1);
      g.resize(a);
      for (std::size_t t = 0; t < nb; ++t) {
        std::size_t x = t;
        for (int i = a - 1; i >= 0; --i, x /= L.nbar) g[i] = static_cast<std::uint32_t>(x % L.nbar) + 1;
        auto bar_index = [&](const std::vector<std::uint32_t>& tuple, std::size_t& out) {
          out = 0;
          for (auto e : tuple) {
            if (e == 0) return false;
            out = out * L.nbar + (e - 1);
          }
          return true;
        };
        for (std::size_t s = 0; s < nf; ++s) {
          auto& col = raw[base + t * nf + s];
          if (down_h) {
            std::size_t bi;
            // (m.g_1)[g_2|..]
            h.assign(g.begin() + 1, g.end());
            if (bar_index(h, bi)) {
              if (b >= 0) {
                const auto im = act[b][G.inv(g[0])][s];
                col.emplace_back(static_cast<std::uint32_t>(hbase + bi * nf + im.face), im.negative ? p - 1 : 1 % p);
              } else {
                col.emplace_back(static_cast<std::uint32_t>(hbase + bi * nf + s), 1 % p);
              }
            }
            for (int i = 1; i < a; ++i) {
              h.assign(g.begin(), g.end());
              h[i - 1] = G.mul(g[i - 1], g[i]);
              h.erase(h.begin() + i);
              if (bar_index(h, bi))
                col.emplace_back(static_cast<std::uint32_t>(hbase + bi * nf + s), i % 2 ? p - 1 : 1 % p);
            }
            h.assign(g.begin(), g.end() - 1);
            if (bar_index(h, bi))
              col.emplace_back(static_cast<std::uint32_t>(hbase + bi * nf + s), a % 2 ? p - 1 : 1 % p);
          }
          if (down_v) {
            for (const auto& [r, v] : bd[b].column(s))
              col.emplace_back(static_cast<std::uint32_t>(vbase + t * nf_v + r), a % 2 ? neg(v) : v);
          }
        }
      }
    }
    return assemble(rows, std::move(raw), p);
  };
  return chain_homology(-1, k_max, [&](int k) { return L.dim(k); }, diff);
}

// ---- SPB with its group action ------------------------------------------------

// SPB_n(Z/m, q) with GL_n(Z/m, q) acting by gamma.(v, g) = (gamma v, g gamma^{-1}).
inline EquivariantInput spb_equivariant_input(const splitbases::FiniteModRing& R, int n, std::uint32_t p, int depth) {
  EquivariantInput E;
  E.p = p;
  E.depth = depth;
  const auto CG = splitbases::congruence_group(R, n);
  std::vector<std::uint32_t> relabel;
  E.group = FiniteGroup::from_congruence(CG, &relabel);
  if (n == 0) {
    E.action.assign(1, {});
    return E;  // the empty complex
  }
  const auto X = splitbases::spb_complex(R, n, splitbases::Variant::SPB_modI);
  E.complex = X.complex;
  const auto C = CG.codec();
  E.action.assign(CG.order(), {});
  for (std::size_t e = 0; e < CG.order(); ++e) {
    const auto gm = C.matrix(CG.elements[e]), gi = C.matrix(CG.inverses[e]);
    auto& a = E.action[relabel[e]];
    for (const auto& x : X.vertex) {
      splitbases::SplitVertex y;
      y.v.assign(n, 0);
      y.g.assign(n, 0);
      y.type = x.type;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          y.v[i] = static_cast<std::uint32_t>((y.v[i] + std::uint64_t{gm[i * n + j]} * x.v[j]) % R.m);
          y.g[j] = static_cast<std::uint32_t>((y.g[j] + std::uint64_t{x.g[i]} * gi[i * n + j]) % R.m);
        }
      const auto idx = X.index_of(y);
      if (idx < 0) throw ConsistencyError("group translate of a vertex is missing");
      a.push_back(static_cast<std::uint32_t>(idx));
    }
  }
  return E;
}

// ---- FI-hyperhomology of the group chains -----------------------------------

// H_k of the total complex of K_i(C_j) at level n, where
// K_i(C_j) = sum over i-subsets T of [n] of the normalized bar chains
// C_j(Gamma_{[n] - T}). The Koszul face removing the t-th smallest element of
// T has sign (-1)^t and is induced by Gamma_{[n]-T} in Gamma_{[n]-T+t}; the
// total differential is d_K + (-1)^i d_bar.
inline std::vector<std::size_t> fi_hyperhomology_of_group_chains(const splitbases::FiniteModRing& R, int n, int k_max,
                                                                 std::uint32_t p) {
  if (n < 0 || k_max < 0) throw InputError("n and k must be non-negative");
  const splitbases::FIGroupWindow W(R, n);
  std::vector<std::uint32_t> relabel;
  const auto G = FiniteGroup::from_congruence(W.at(n), &relabel);
  const std::uint32_t full = (1u << n) - 1;
  // non-identity elements of Gamma_S, S = complement of T, by mask of T
  std::vector<std::vector<std::uint32_t>> elems(std::size_t{1} << n);
  std::vector<std::vector<std::int64_t>> where(std::size_t{1} << n, std::vector<std::int64_t>(G.order(), -1));
  for (std::uint32_t T = 0; T <= full; ++T) {
    std::vector<int> S;
    for (int i = 0; i < n; ++i)
      if (!((T >> i) & 1)) S.push_back(i);
    for (auto code : W.subgroup(S, n)) {
      const auto e = relabel[W.at(n).index_of(code)];
      if (e != 0) elems[T].push_back(e);
    }
    std::sort(elems[T].begin(), elems[T].end());
    for (std::size_t i = 0; i < elems[T].size(); ++i) where[T][elems[T][i]] = static_cast<std::int64_t>(i);
  }
  auto bar_count = [&](std::uint32_t T, int j) { return checked_power(elems[T].size(), j, "bar chains"); };
  // ordering of blocks in total degree k: by i = |T| ascending, then T ascending
  auto blocks = [&](int k) {
    std::vector<std::pair<std::uint32_t, int>> out;  // (T, j)
    for (int i = 0; i <= std::min(n, k); ++i)
      for (std::uint32_t T = 0; T <= full; ++T)
        if (std::popcount(T) == i) out.emplace_back(T, k - i);
    return out;
  };
  auto offsets = [&](int k) {
    std::vector<std::size_t> off{0};
    for (auto [T, j] : blocks(k)) off.push_back(off.back() + bar_count(T, j));
    if (off.back() > max_cells()) throw FeasibilityError("hyperhomology chains exceed the guard of " + max_cells_text());
    return off;
  };
  auto dim = [&](int k) -> std::size_t { return k < 0 ? 0 : offsets(k).back(); };
  auto diff = [&](int k) {
    const auto src = blocks(k), dst = blocks(k - 1);
    const auto so = offsets(k), dof = offsets(k - 1);
    auto block_of = [&](std::uint32_t T, int j) -> std::int64_t {
      for (std::size_t b = 0; b < dst.size(); ++b)
        if (dst[b].first == T && dst[b].second == j) return static_cast<std::int64_t>(b);
      return -1;
    };
    std::vector<SparseMatrixFp::Column> raw(so.back());
    std::vector<std::uint32_t> g, h;
    for (std::size_t b = 0; b < src.size(); ++b) {
      const auto [T, j] = src[b];
      const int i = std::popcount(T);
      const auto& E = elems[T];
      const std::size_t nb = E.size();
      const auto bar_block = block_of(T, j - 1);
      std::vector<std::pair<std::int64_t, std::uint32_t>> koszul;  // (dst block, T') with sign in index order
      std::vector<std::uint32_t> kmask;
      std::vector<bool> kneg;
      int t = 0;
      for (int x = 0; x < n; ++x)
        if ((T >> x) & 1) {
          const std::uint32_t T2 = T & ~(1u << x);
          kmask.push_back(T2);
          kneg.push_back(t % 2 == 1);
          koszul.emplace_back(block_of(T2, j), T2);
          ++t;
        }
      g.resize(j);
      for (std::size_t c = 0; c < bar_count(T, j); ++c) {
        std::size_t x = c;
        for (int u = j - 1; u >= 0; --u, x /= nb) g[u] = E[x % nb];
        auto& col = raw[so[b] + c];
        auto index_in = [&](std::uint32_t Tm, const std::vector<std::uint32_t>& tuple, std::size_t& out) {
          out = 0;
          for (auto e : tuple) {
            if (e == 0) return false;
            const auto w = where[Tm][e];
            if (w < 0) throw ConsistencyError("bar entry outside its subgroup");
            out = out * elems[Tm].size() + static_cast<std::size_t>(w);
          }
          return true;
        };
        const std::uint32_t sign_bar = i % 2 ? p - 1 : 1 % p;
        if (bar_block >= 0) {
          std::size_t idx;
          h.assign(g.begin() + 1, g.end());
          if (index_in(T, h, idx)) col.emplace_back(static_cast<std::uint32_t>(dof[bar_block] + idx), sign_bar);
          for (int u = 1; u < j; ++u) {
            h.assign(g.begin(), g.end());
            h[u - 1] = G.mul(g[u - 1], g[u]);
            h.erase(h.begin() + u);
            if (index_in(T, h, idx)) {
              const std::uint32_t v = u % 2 ? p - 1 : 1 % p;
              col.emplace_back(static_cast<std::uint32_t>(dof[bar_block] + idx), i % 2 ? (p - v) % p : v);
            }
          }
          h.assign(g.begin(), g.end() - 1);
          if (index_in(T, h, idx)) {
            const std::uint32_t v = j % 2 ? p - 1 : 1 % p;
            col.emplace_back(static_cast<std::uint32_t>(dof[bar_block] + idx), i % 2 ? (p - v) % p : v);
          }
        }
        for (std::size_t f = 0; f < koszul.size(); ++f) {
          const auto [blk, T2] = koszul[f];
          if (blk < 0) continue;
          std::size_t idx;
          if (index_in(T2, g, idx))
            col.emplace_back(static_cast<std::uint32_t>(dof[blk] + idx), kneg[f] ? p - 1 : 1 % p);
        }
      }
    }
    return assemble(dof.back(), std::move(raw), p);
  };
  return chain_homology(0, k_max, dim, diff);
}

struct TheoremCResult {
  std::uint32_t p = 2;
  int ell = 2, n = 0, k = 0;
  std::size_t lhs = 0, rhs = 0;
  double seconds = 0;
  bool equal() const { return lhs == rhs; }
};

// Compares the FI-hyperhomology of the group chains with the reduced
// equivariant homology of SPB_n(Z/p^ell, p) one degree down.
inline TheoremCResult theoremC_check(std::uint32_t p, int ell, int n, int k) {
  if (!exactlin::is_prime(p)) throw InputError("p must be prime");
  if (ell < 1) throw InputError("ell must be >= 1");
  if (n < 0 || n > 3 || k < 0 || k > 2) throw InputError("need 0 <= n <= 3 and 0 <= k <= 2");
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t m = 1;
  for (int i = 0; i < ell; ++i) m *= p;
  if (m > 1024) throw FeasibilityError("p^ell is too large");
  const splitbases::FiniteModRing R(static_cast<std::uint32_t>(m), p);
  TheoremCResult r;
  r.p = p;
  r.ell = ell;
  r.n = n;
  r.k = k;
  r.lhs = fi_hyperhomology_of_group_chains(R, n, k, p)[k];
  const auto E = spb_equivariant_input(R, n, p, k + 1);
  r.rhs = equivariant_homology(E, k - 1)[k];  // index k is degree k - 1
  r.seconds = splitbases::seconds_since(t0);
  return r;
}

inline json to_json(const TheoremCResult& r) {
  return {{"p", r.p}, {"ell", r.ell}, {"n", r.n}, {"k", r.k}, {"lhs", r.lhs}, {"rhs", r.rhs},
          {"equal", r.equal()}, {"seconds", r.seconds}};
}

}  // namespace fistab::congruence
