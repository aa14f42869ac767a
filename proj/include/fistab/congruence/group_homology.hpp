#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fistab/combinatorics.hpp"
#include "fistab/error.hpp"
#include "fistab/exactlin/field.hpp"
#include "fistab/exactlin/sparse.hpp"
#include "fistab/limits.hpp"
#include "fistab/splitbases/group.hpp"

namespace fistab::congruence {

using json = nlohmann::json;
using exactlin::SparseMatrixFp;

// A finite group by its multiplication table; element 0 is the identity.
class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(1, {0}) {}
  FiniteGroup(std::size_t order, std::vector<std::uint32_t> table) : n_(order), table_(std::move(table)) {
    if (n_ == 0 || table_.size() != n_ * n_) throw InputError("multiplication table must be order x order");
    inv_.assign(n_, 0);
    for (std::size_t a = 0; a < n_; ++a) {
      if (mul(0, a) != a || mul(a, 0) != a) throw InputError("element 0 must be the identity");
      bool found = false;
      for (std::size_t b = 0; b < n_ && !found; ++b)
        if (mul(a, b) == 0) inv_[a] = static_cast<std::uint32_t>(b), found = true;
      if (!found) throw InputError("element " + std::to_string(a) + " has no inverse");
    }
  }

  std::size_t order() const { return n_; }
  std::uint32_t mul(std::size_t a, std::size_t b) const { return table_[a * n_ + b]; }
  std::uint32_t inv(std::size_t a) const { return inv_[a]; }

  // Associativity over every triple; only sensible for small groups.
  bool associative() const {
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        for (std::size_t c = 0; c < n_; ++c)
          if (mul(mul(a, b), c) != mul(a, mul(b, c))) return false;
    return true;
  }

  // (Z/p)^r with element index = base-p digits.
  static FiniteGroup elementary_abelian(std::uint32_t p, int r) {
    std::size_t n = 1;
    for (int i = 0; i < r; ++i) n *= p;
    if (n * n > max_cells() * 4) throw FeasibilityError("elementary abelian group too large for a table");
    std::vector<std::uint32_t> t(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        std::size_t x = a, y = b, out = 0, w = 1;
        for (int i = 0; i < r; ++i, x /= p, y /= p, w *= p) out += ((x % p + y % p) % p) * w;
        t[a * n + b] = static_cast<std::uint32_t>(out);
      }
    return FiniteGroup(n, std::move(t));
  }

  static FiniteGroup cyclic(std::uint32_t m) {
    std::vector<std::uint32_t> t(std::size_t{m} * m);
    for (std::uint32_t a = 0; a < m; ++a)
      for (std::uint32_t b = 0; b < m; ++b) t[a * m + b] = (a + b) % m;
    return FiniteGroup(m, std::move(t));
  }

  // Relabels so that the identity comes first; the map old index -> new index is returned.
  static FiniteGroup from_congruence(const splitbases::CongruenceGroup& G, std::vector<std::uint32_t>* relabel = nullptr) {
    const auto C = G.codec();
    const std::uint64_t id = C.pack(C.identity());
    const std::size_t n = G.order();
    if (n * n > max_cells() * 4) throw FeasibilityError("group of order " + std::to_string(n) + " is too large for a table");
    std::vector<std::uint32_t> to_new(n), to_old(n);
    const std::size_t id_pos = G.index_of(id);
    for (std::size_t i = 0, k = 1; i < n; ++i) {
      const std::size_t j = i == id_pos ? 0 : k++;
      to_new[i] = static_cast<std::uint32_t>(j);
      to_old[j] = static_cast<std::uint32_t>(i);
    }
    std::vector<std::uint32_t> t(n * n);
    std::vector<std::vector<std::uint32_t>> mats(n);
    for (std::size_t i = 0; i < n; ++i) mats[i] = C.matrix(G.elements[to_old[i]]);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) t[a * n + b] = to_new[G.index_of(C.pack(C.mul(mats[a], mats[b])))];
    if (relabel) *relabel = to_new;
    return FiniteGroup(n, std::move(t));
  }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inv_;
};

struct GroupStructure {
  std::size_t order = 1;
  bool abelian = true;
  std::size_t exponent = 1;
  std::optional<int> elementary_rank;  // set iff elementary abelian
  std::uint32_t prime = 0;             // the p of an elementary abelian p-group
};

inline std::size_t element_order(const FiniteGroup& G, std::size_t a) {
  std::size_t k = 1;
  for (std::size_t x = a; x != 0; x = G.mul(x, a)) ++k;
  return k;
}

// Exhaustive: every pair for commutativity, every element for its order.
inline GroupStructure identify_structure(const FiniteGroup& G) {
  GroupStructure s;
  s.order = G.order();
  for (std::size_t a = 0; a < G.order() && s.abelian; ++a)
    for (std::size_t b = a + 1; b < G.order(); ++b)
      if (G.mul(a, b) != G.mul(b, a)) {
        s.abelian = false;
        break;
      }
  for (std::size_t a = 1; a < G.order(); ++a) s.exponent = std::lcm(s.exponent, element_order(G, a));
  if (s.abelian && s.exponent > 1 && exactlin::is_prime(s.exponent)) {
    int r = 0;
    std::size_t x = s.order;
    while (x % s.exponent == 0) x /= s.exponent, ++r;
    if (x == 1) {
      s.elementary_rank = r;
      s.prime = static_cast<std::uint32_t>(s.exponent);
    }
  }
  if (s.order == 1) s.elementary_rank = 0;
  return s;
}

inline GroupStructure identify_structure(const splitbases::FiniteModRing& R, int n) {
  return identify_structure(FiniteGroup::from_congruence(splitbases::congruence_group(R, n)));
}

inline json to_json(const GroupStructure& s) {
  json j{{"order", s.order}, {"abelian", s.abelian}, {"exponent", s.exponent}};
  j["elementary_abelian"] = s.elementary_rank.has_value();
  if (s.elementary_rank) j["rank"] = *s.elementary_rank;
  return j;
}

// dim H^k((Z/p)^r; F_p) = C(r + k - 1, k).
inline std::uint64_t cohom_dim_formula(int r, int k) {
  if (r < 0 || k < 0) throw InputError("rank and degree must be non-negative");
  return static_cast<std::uint64_t>(comb::binomial_signed(r + k - 1, k));
}

// ---- chain complexes given by their differentials -----------------------------

// Homology dims of a complex in degrees lo..hi. `dim(k)` is the size of the
// k-th chain group and `diff(k)` the matrix of d_k : C_k -> C_{k-1}. Ranks
// are taken from the top down so that pivots of d_{k+1} clear columns of d_k.
inline std::vector<std::size_t> chain_homology(int lo, int hi, const std::function<std::size_t(int)>& dim,
                                               const std::function<SparseMatrixFp(int)>& diff) {
  std::vector<std::size_t> rank(hi - lo + 2, 0);  // rank[k - lo] = rank d_k, k = lo..hi+1
  std::vector<char> skip;
  for (int k = hi + 1; k >= lo; --k) {
    if (dim(k) == 0 || dim(k - 1) == 0) {
      skip.clear();
      continue;
    }
    const auto d = diff(k);
    std::vector<std::uint32_t> pivots;
    rank[k - lo] = exactlin::rank_and_kernel(d, false, skip.empty() ? nullptr : &skip, &pivots).rank;
    skip.assign(dim(k - 1), 0);
    for (auto r : pivots) skip[r] = 1;
  }
  std::vector<std::size_t> h;
  for (int k = lo; k <= hi; ++k) h.push_back(dim(k) - rank[k - lo] - rank[k + 1 - lo]);
  return h;
}

inline SparseMatrixFp assemble(std::size_t rows, std::vector<SparseMatrixFp::Column> raw, std::uint32_t p) {
  SparseMatrixFp d(rows, raw.size(), p);
  for (std::size_t c = 0; c < raw.size(); ++c) d.set_column(c, SparseMatrixFp::make_column(std::move(raw[c]), p));
  return d;
}

inline std::size_t checked_power(std::size_t base, int e, const std::string& what) {
  std::size_t out = 1;
  for (int i = 0; i < e; ++i) {
    if (base && out > max_cells() / base) throw FeasibilityError(what + " exceeds the guard of " + max_cells_text());
    out *= base;
  }
  return out;
}

// ---- bar complex oracle -----------------------------------------------------------

enum class BarRoute { automatic, direct, multigraded };

struct BarResult {
  std::size_t dim = 0;
  std::string route;
  std::size_t cells = 0;  // basis elements handled in the top chain group
};

namespace detail {

// Normalized bar complex F_p (x)_G B(G): chains [g_1|...|g_j] with g_i != 1,
// d = [g_2|..] + sum_{i<j} (-1)^i [..|g_i g_{i+1}|..] + (-1)^j [..|g_{j-1}],
// terms with an identity entry dropped. Tuples are mixed-radix over G \ 1.
inline std::size_t bar_direct(const FiniteGroup& G, int k, std::uint32_t p, std::size_t* cells) {
  const std::size_t b = G.order() - 1;
  auto dim = [&](int j) -> std::size_t { return j < 0 ? 0 : checked_power(b, j, "bar complex"); };
  if (cells) *cells = dim(k + 1);
  auto diff = [&](int j) {
    std::vector<SparseMatrixFp::Column> raw(dim(j));
    std::vector<std::uint32_t> g(j), h;
    for (std::size_t c = 0; c < raw.size(); ++c) {
      std::size_t x = c;
      for (int i = j - 1; i >= 0; --i, x /= b) g[i] = static_cast<std::uint32_t>(x % b) + 1;
      auto emit = [&](const std::vector<std::uint32_t>& t, std::uint32_t v) {
        std::size_t idx = 0;
        for (auto e : t) {
          if (e == 0) return;
          idx = idx * b + (e - 1);
        }
        raw[c].emplace_back(static_cast<std::uint32_t>(idx), v);
      };
      h.assign(g.begin() + 1, g.end());
      emit(h, 1 % p);
      for (int i = 1; i < j; ++i) {
        h.assign(g.begin(), g.end());
        h[i - 1] = G.mul(g[i - 1], g[i]);
        h.erase(h.begin() + i);
        emit(h, i % 2 ? p - 1 : 1 % p);
      }
      h.assign(g.begin(), g.end() - 1);
      emit(h, j % 2 ? p - 1 : 1 % p);
    }
    return assemble(dim(j - 1), std::move(raw), p);
  };
  return chain_homology(k, k, dim, diff)[0];
}

// The same bar complex for (Z/p)^r written in the basis of monomials in
// x_i = g_i - 1 of F_p[x_1..x_r]/(x_i^p). Outer faces vanish on the
// augmentation ideal, inner faces multiply monomials, and the complex splits
// by total multidegree. Coordinate permutations are automorphisms, so only
// multidegrees with non-increasing entries are computed, weighted by orbit size.
inline std::size_t bar_multigraded(std::uint32_t p, int r, int k, std::size_t* cells) {
  std::size_t P = 1;
  for (int i = 0; i < r; ++i) P *= p;
  const int cap = static_cast<int>(p - 1);
  std::vector<std::vector<int>> mono(P);  // exponent vectors by code
  for (std::size_t c = 0; c < P; ++c) {
    std::size_t x = c;
    for (int i = 0; i < r; ++i, x /= p) mono[c].push_back(static_cast<int>(x % p));
  }
  auto product = [&](std::size_t a, std::size_t b) -> std::size_t {
    std::size_t out = 0, w = 1;
    for (int i = 0; i < r; ++i, w *= p) {
      const int e = mono[a][i] + mono[b][i];
      if (e > cap) return 0;
      out += static_cast<std::size_t>(e) * w;
    }
    return out;
  };
  if (P == 1) return k == 0 ? 1 : 0;
  if (static_cast<double>(k + 1) * std::log2(static_cast<double>(P)) > 63)
    throw FeasibilityError("bar tuples do not fit the packed representation");

  // tuples of j nonzero monomials summing to D, packed base P, ascending
  auto tuples = [&](const std::vector<int>& D, int j) {
    std::vector<std::uint64_t> out;
    std::vector<int> rest = D;
    std::function<void(int, std::uint64_t)> rec = [&](int left, std::uint64_t key) {
      if (left == 0) {
        if (std::all_of(rest.begin(), rest.end(), [](int x) { return x == 0; })) out.push_back(key);
        return;
      }
      int total = 0;
      for (int i = 0; i < r; ++i) {
        if (rest[i] > cap * left) return;
        total += rest[i];
      }
      if (total < left) return;
      for (std::size_t c = 1; c < P; ++c) {
        bool fits = true;
        for (int i = 0; i < r && fits; ++i) fits = mono[c][i] <= rest[i];
        if (!fits) continue;
        for (int i = 0; i < r; ++i) rest[i] -= mono[c][i];
        rec(left - 1, key * P + c);
        for (int i = 0; i < r; ++i) rest[i] += mono[c][i];
      }
    };
    rec(j, 0);
    if (out.size() > max_cells()) throw FeasibilityError("multidegree piece exceeds the guard of " + max_cells_text());
    return out;
  };

  std::size_t total = 0, seen_cells = 0;
  std::vector<int> D(r, 0);
  const int top = cap * (k + 1);
  std::function<void(int, int)> each = [&](int i, int bound) {
    if (i == r) {
      std::vector<std::vector<std::uint64_t>> C(3);  // degrees k-1, k, k+1
      for (int t = 0; t < 3; ++t)
        if (k - 1 + t >= 0) C[t] = tuples(D, k - 1 + t);
      if (C[1].empty()) return;
      // orbit of D under coordinate permutations
      std::uint64_t orbit = comb::factorial(r);
      for (int a = 0, b = 0; a < r; a = b) {
        while (b < r && D[b] == D[a]) ++b;
        orbit /= comb::factorial(b - a);
      }
      seen_cells += C[2].size() * orbit;
      auto diff = [&](int j) {
        const auto& src = C[j - k + 1];
        const auto& dst = C[j - k];
        std::vector<SparseMatrixFp::Column> raw(src.size());
        std::vector<std::uint64_t> g(j);
        for (std::size_t c = 0; c < src.size(); ++c) {
          std::uint64_t x = src[c];
          for (int t = j - 1; t >= 0; --t, x /= P) g[t] = x % P;
          for (int t = 1; t < j; ++t) {
            const std::size_t m = product(g[t - 1], g[t]);
            if (!m) continue;
            std::uint64_t key = 0;
            for (int u = 0; u < j; ++u) {
              if (u == t) continue;
              key = key * P + (u == t - 1 ? m : g[u]);
            }
            auto it = std::lower_bound(dst.begin(), dst.end(), key);
            if (it == dst.end() || *it != key) throw ConsistencyError("multigraded bar face missing");
            raw[c].emplace_back(static_cast<std::uint32_t>(it - dst.begin()), t % 2 ? p - 1 : 1u);
          }
        }
        return assemble(dst.size(), std::move(raw), p);
      };
      const auto h = chain_homology(
          k, k, [&](int j) { return j < k - 1 || j > k + 1 ? std::size_t{0} : C[j - k + 1].size(); }, diff);
      total += h[0] * orbit;
      return;
    }
    for (int v = 0; v <= bound; ++v) {
      D[i] = v;
      each(i + 1, v);
    }
    D[i] = 0;
  };
  each(0, top);
  if (cells) *cells = seen_cells;
  return total;
}

}  // namespace detail

// dim H_k(G; F_p) from the normalized bar complex truncated at degree k + 1.
inline BarResult bar_homology_oracle(const FiniteGroup& G, int k, std::uint32_t p, BarRoute route = BarRoute::automatic) {
  if (k < 0) throw InputError("degree must be non-negative");
  if (!exactlin::is_prime(p)) throw InputError("coefficient modulus must be prime");
  BarResult out;
  const double direct_cells = std::pow(static_cast<double>(G.order() - 1), k + 1);
  if (route == BarRoute::automatic) {
    route = BarRoute::direct;
    if (direct_cells > static_cast<double>(std::size_t{1} << 22)) {
      const auto s = identify_structure(G);
      if (s.elementary_rank && s.prime == p) route = BarRoute::multigraded;
    }
  }
  if (route == BarRoute::direct) {
    out.route = "direct";
    out.dim = detail::bar_direct(G, k, p, &out.cells);
  } else {
    const auto s = identify_structure(G);
    if (!s.elementary_rank || (s.order > 1 && s.prime != p))
      throw InputError("the multigraded route needs an elementary abelian p-group with p the coefficient prime");
    out.route = "multigraded";
    out.dim = detail::bar_multigraded(p, *s.elementary_rank, k, &out.cells);
  }
  return out;
}

}  // namespace fistab::congruence
