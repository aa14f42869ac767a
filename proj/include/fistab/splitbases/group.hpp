#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fistab/combinatorics.hpp"
#include "fistab/error.hpp"
#include "fistab/exactlin/field.hpp"
#include "fistab/exactlin/smith.hpp"
#include "fistab/limits.hpp"

namespace fistab::splitbases {

constexpr std::size_t kMaxGroupOrder = std::size_t{1} << 26;

// Z/m with the ideal I = qZ/m.
struct FiniteModRing {
  std::uint32_t m = 2;
  std::uint32_t q = 2;

  FiniteModRing() = default;
  FiniteModRing(std::uint32_t m_, std::uint32_t q_) : m(m_), q(q_) {
    if (m < 2) throw InputError("ring modulus must be >= 2");
    if (q == 0 || m % q != 0) throw InputError("ideal generator q must divide m");
  }
  bool proper() const { return q != 1; }
  exactlin::ModRing ring() const { return exactlin::ModRing(m); }
};

inline std::uint32_t smallest_prime_factor(std::uint32_t m) {
  for (std::uint32_t d = 2; d * d <= m; ++d)
    if (m % d == 0) return d;
  return m;
}

// Row-major n x n matrices and length-n vectors over Z/m, packed as base-m
// integers with the first entry most significant so that code order is
// lexicographic order.
class Codec {
 public:
  Codec(std::uint32_t m, int n) : m_(m), n_(n) {
    const double bits = static_cast<double>(n) * n * std::log2(static_cast<double>(m));
    if (bits > 63.0)
      throw FeasibilityError("matrices of size " + std::to_string(n) + " over Z/" + std::to_string(m) +
                             " do not fit the 64-bit packed representation");
  }
  std::uint32_t m() const { return m_; }
  int n() const { return n_; }

  std::uint64_t pack(const std::vector<std::uint32_t>& a) const {
    std::uint64_t c = 0;
    for (auto x : a) c = c * m_ + x;
    return c;
  }
  std::vector<std::uint32_t> unpack(std::uint64_t c, std::size_t len) const {
    std::vector<std::uint32_t> a(len);
    for (std::size_t i = len; i-- > 0;) {
      a[i] = static_cast<std::uint32_t>(c % m_);
      c /= m_;
    }
    return a;
  }
  std::vector<std::uint32_t> matrix(std::uint64_t c) const { return unpack(c, static_cast<std::size_t>(n_) * n_); }

  std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint32_t> c(static_cast<std::size_t>(n_) * n_, 0);
    for (int i = 0; i < n_; ++i)
      for (int k = 0; k < n_; ++k) {
        const std::uint64_t x = a[i * n_ + k];
        if (!x) continue;
        for (int j = 0; j < n_; ++j) c[i * n_ + j] = static_cast<std::uint32_t>((c[i * n_ + j] + x * b[k * n_ + j]) % m_);
      }
    return c;
  }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return pack(mul(matrix(a), matrix(b))); }

  std::vector<std::uint32_t> identity() const {
    std::vector<std::uint32_t> e(static_cast<std::size_t>(n_) * n_, 0);
    for (int i = 0; i < n_; ++i) e[i * n_ + i] = 1 % m_;
    return e;
  }

 private:
  std::uint32_t m_;
  int n_;
};

// Determinant mod m by Laplace expansion along the first row; n is tiny here.
inline std::uint32_t det_mod(const std::vector<std::uint32_t>& a, int n, std::uint32_t m) {
  if (n == 0) return 1 % m;
  if (n == 1) return a[0] % m;
  std::int64_t acc = 0;
  std::vector<std::uint32_t> minor(static_cast<std::size_t>(n - 1) * (n - 1));
  for (int c = 0; c < n; ++c) {
    if (!a[c]) continue;
    for (int r = 1; r < n; ++r)
      for (int cc = 0, k = 0; cc < n; ++cc)
        if (cc != c) minor[(r - 1) * (n - 1) + k++] = a[r * n + cc];
    const std::int64_t term = static_cast<std::int64_t>(a[c]) * det_mod(minor, n - 1, m) % m;
    acc = (acc + (c % 2 ? m - term : term)) % m;
  }
  return static_cast<std::uint32_t>(acc);
}

// Membership in GL_n(Z/m, I): congruent to the identity mod q and invertible.
inline bool in_congruence_group(const std::vector<std::uint32_t>& a, int n, const FiniteModRing& R) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if ((a[i * n + j] + R.q - (i == j ? 1 % R.q : 0)) % R.q != 0) return false;
  return R.ring().is_unit(det_mod(a, n, R.m));
}

struct CongruenceGroup {
  FiniteModRing ring;
  int n = 0;
  std::vector<std::uint64_t> elements;  // sorted packed matrices
  std::vector<std::uint64_t> inverses;  // inverses[i] = elements[i]^{-1}
  bool count_verified = false;          // order also matched a brute-force count of the kernel

  std::size_t order() const { return elements.size(); }
  Codec codec() const { return Codec(ring.m, n); }
  std::size_t index_of(std::uint64_t code) const {
    auto it = std::lower_bound(elements.begin(), elements.end(), code);
    if (it == elements.end() || *it != code) throw ConsistencyError("matrix is not in the group");
    return static_cast<std::size_t>(it - elements.begin());
  }
  bool contains(std::uint64_t code) const { return std::binary_search(elements.begin(), elements.end(), code); }
};

// Counts the kernel of GL_n(Z/m) -> GL_n(Z/q) directly; nullopt when too many candidates.
inline std::optional<std::size_t> direct_order(const FiniteModRing& R, int n, std::size_t limit = std::size_t{1} << 22) {
  const std::uint32_t r = R.m / R.q;
  const double cand = std::pow(static_cast<double>(r), static_cast<double>(n) * n);
  if (cand > static_cast<double>(limit)) return std::nullopt;
  const std::size_t total = static_cast<std::size_t>(cand + 0.5), cells = static_cast<std::size_t>(n) * n;
  std::vector<std::uint32_t> a(cells);
  std::size_t count = 0;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t x = idx;
    for (std::size_t c = 0; c < cells; ++c) {
      const std::uint32_t digit = static_cast<std::uint32_t>(x % r);
      x /= r;
      a[c] = (R.q * digit + (c / n == c % n ? 1u : 0u)) % R.m;
    }
    if (R.ring().is_unit(det_mod(a, n, R.m))) ++count;
  }
  return count;
}

// |GL_n(Z/m)| by CRT from |GL_n(Z/p^a)| = p^{(a-1)n^2} |GL_n(F_p)|.
inline exactlin::BigInt gl_order(std::uint32_t m, int n) {
  exactlin::BigInt out = 1;
  for (std::uint32_t p = 2, r = m; r > 1; ++p) {
    if (r % p) {
      if (p * p > r) p = r - 1;  // r is prime
      continue;
    }
    int a = 0;
    while (r % p == 0) r /= p, ++a;
    const exactlin::BigInt P = p;
    exactlin::BigInt pn = boost::multiprecision::pow(P, n), pi = 1;
    out *= boost::multiprecision::pow(P, (a - 1) * n * n);
    for (int i = 0; i < n; ++i, pi *= P) out *= pn - pi;
  }
  return out;
}

// Reduction GL_n(Z/m) -> GL_n(Z/q) is onto, so the kernel has order |GL_n(Z/m)| / |GL_n(Z/q)|.
inline exactlin::BigInt congruence_order(const FiniteModRing& R, int n) { return gl_order(R.m, n) / gl_order(R.q, n); }

// Breadth-first closure from I + qE_ij (i != j) and diag(1, .., u, .., 1) with
// u a unit congruent to 1 mod q, carrying inverses along.
inline CongruenceGroup congruence_group(const FiniteModRing& R, int n) {
  if (n < 0) throw InputError("n must be >= 0");
  const auto expected = congruence_order(R, n);
  if (expected > kMaxGroupOrder)
    throw FeasibilityError("|GL_" + std::to_string(n) + "(Z/" + std::to_string(R.m) + ", " + std::to_string(R.q) +
                           ")| = " + expected.str() + " exceeds the 2^26 guard");
  CongruenceGroup G;
  G.ring = R;
  G.n = n;
  const Codec C(R.m, n);
  const auto ring = R.ring();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> gens;
  const std::uint64_t id = C.pack(C.identity());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto g = C.identity(), h = C.identity();
      if (i != j) {
        g[i * n + j] = R.q % R.m;
        h[i * n + j] = (R.m - R.q % R.m) % R.m;
        if (C.pack(g) != id) gens.emplace_back(C.pack(g), C.pack(h));
      } else {
        for (std::uint32_t u = 2; u < R.m; ++u) {
          if ((u + R.q - 1) % R.q != 0 || !ring.is_unit(u)) continue;
          g[i * n + i] = u;
          h[i * n + i] = ring.inv(u);
          gens.emplace_back(C.pack(g), C.pack(h));
        }
      }
    }
  std::unordered_map<std::uint64_t, std::uint64_t> inv{{id, id}};
  std::deque<std::uint64_t> queue{id};
  while (!queue.empty()) {
    const std::uint64_t x = queue.front();
    queue.pop_front();
    const auto xm = C.matrix(x), xi = C.matrix(inv.at(x));
    for (const auto& [g, gi] : gens) {
      const std::uint64_t y = C.pack(C.mul(C.matrix(g), xm));
      if (inv.count(y)) continue;
      inv.emplace(y, C.pack(C.mul(xi, C.matrix(gi))));
      queue.push_back(y);
    }
  }
  G.elements.reserve(inv.size());
  for (const auto& [x, xi] : inv) G.elements.push_back(x);
  std::sort(G.elements.begin(), G.elements.end());
  for (auto x : G.elements) {
    if (!in_congruence_group(C.matrix(x), n, R)) throw ConsistencyError("closure left the congruence subgroup");
    G.inverses.push_back(inv.at(x));
  }
  if (G.order() != expected)
    throw ConsistencyError("closure found " + std::to_string(G.order()) + " elements, expected " + expected.str());
  if (auto d = direct_order(R, n)) {
    if (*d != G.order())
      throw ConsistencyError("closure found " + std::to_string(G.order()) + " elements, direct count " +
                             std::to_string(*d));
    G.count_verified = true;
  }
  return G;
}

// GL(Z/m, I) restricted to n <= N. A subset S of [n] determines the subgroup
// Gamma_S acting on the coordinates in S and fixing the others.
struct FIGroupWindow {
  FiniteModRing ring;
  int N = 0;
  std::vector<CongruenceGroup> groups;

  FIGroupWindow(const FiniteModRing& R, int N_) : ring(R), N(N_) {
    for (int n = 0; n <= N; ++n) groups.push_back(congruence_group(R, n));
  }

  const CongruenceGroup& at(int n) const { return groups.at(n); }

  // Image of an element of Gamma_{|S|} under the monotone injection S -> [n].
  std::uint64_t embed(std::uint64_t code, const std::vector<int>& S, int n) const {
    const int k = static_cast<int>(S.size());
    const Codec small(ring.m, k), big(ring.m, n);
    const auto a = small.matrix(code);
    auto b = big.identity();
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) b[S[i] * n + S[j]] = a[i * k + j];
    return big.pack(b);
  }

  // The corner inclusion Gamma_{n-1} -> Gamma_n.
  std::uint64_t inclusion(std::uint64_t code, int n) const {
    std::vector<int> S(n - 1);
    for (int i = 0; i < n - 1; ++i) S[i] = i;
    return embed(code, S, n);
  }

  // Gamma_S inside Gamma_n, sorted.
  std::vector<std::uint64_t> subgroup(const std::vector<int>& S, int n) const {
    std::vector<std::uint64_t> out;
    for (auto c : at(static_cast<int>(S.size())).elements) out.push_back(embed(c, S, n));
    std::sort(out.begin(), out.end());
    return out;
  }

  // w gamma w^{-1} for the permutation matrix of w (w[i] = image of i).
  std::uint64_t conjugate(std::uint64_t code, const std::vector<int>& w) const {
    const int n = static_cast<int>(w.size());
    const Codec C(ring.m, n);
    const auto a = C.matrix(code);
    std::vector<std::uint32_t> b(a.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b[w[i] * n + w[j]] = a[i * n + j];
    return C.pack(b);
  }
};

}  // namespace fistab::splitbases
