#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fistab/combinatorics.hpp"
#include "fistab/splitbases/complex.hpp"
#include "fistab/splitbases/group.hpp"

namespace fistab::splitbases {

enum class Variant { SPB_modI, SU_modI, SPB, SU };

inline Variant parse_variant(const std::string& s) {
  if (s == "SPB_modI") return Variant::SPB_modI;
  if (s == "SU_modI") return Variant::SU_modI;
  if (s == "SPB") return Variant::SPB;
  if (s == "SU") return Variant::SU;
  throw InputError("unknown complex variant " + s + " (expected SPB_modI, SU_modI, SPB or SU)");
}

// A vertex (v, g) of SU_n(R) with g(v) = 1; `type` is the i with v = e_i,
// g = lambda_i mod I, or -1 outside the mod-I variants.
struct SplitVertex {
  std::vector<std::uint32_t> v, g;
  int type = -1;

  auto key() const { return std::tie(v, g); }
  friend bool operator<(const SplitVertex& a, const SplitVertex& b) { return a.key() < b.key(); }
  friend bool operator==(const SplitVertex& a, const SplitVertex& b) { return a.key() == b.key(); }
};

inline std::uint32_t pair_value(const std::vector<std::uint32_t>& g, const std::vector<std::uint32_t>& v,
                                std::uint32_t m) {
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < v.size(); ++i) s = (s + static_cast<std::uint64_t>(g[i]) * v[i]) % m;
  return static_cast<std::uint32_t>(s);
}

inline json vertex_label(const SplitVertex& x) {
  json j{{"v", x.v}, {"g", x.g}};
  if (x.type >= 0) j["type"] = x.type;
  return j;
}

// A complex whose vertices are split vertices, kept alongside the generic record.
struct SplitComplex {
  FiniteModRing ring;
  int n = 0;
  Variant variant = Variant::SPB_modI;
  std::vector<SplitVertex> vertex;
  SimplicialComplex complex;

  std::int64_t index_of(const SplitVertex& x) const {
    auto it = std::lower_bound(vertex.begin(), vertex.end(), x);
    return it != vertex.end() && *it == x ? it - vertex.begin() : -1;
  }
  // g_i(v_j) = delta_ij on every listed simplex
  bool simplex_predicate_holds() const {
    for (const auto& s : complex.maximal)
      for (auto a : s)
        for (auto b : s)
          if (pair_value(vertex[a].g, vertex[b].v, ring.m) != (a == b ? 1 % ring.m : 0)) return false;
    return true;
  }
};

namespace detail {

// gamma x_t = (column t of gamma, row t of gamma^{-1})
inline SplitVertex translate_standard(const Codec& C, const std::vector<std::uint32_t>& gm,
                                      const std::vector<std::uint32_t>& gi, int t, bool typed) {
  const int n = C.n();
  SplitVertex x;
  x.v.resize(n);
  x.g.resize(n);
  for (int r = 0; r < n; ++r) x.v[r] = gm[r * n + t];
  for (int c = 0; c < n; ++c) x.g[c] = gi[t * n + c];
  x.type = typed ? t : -1;
  return x;
}

inline void finish(SplitComplex& X) {
  X.complex.labels.clear();
  for (const auto& x : X.vertex) X.complex.labels.push_back(vertex_label(x));
  X.complex.canonicalize();
}

// Maximal simplices {gamma x_1, ..., gamma x_n} over the group elements.
inline SplitComplex orbit_complex(const CongruenceGroup& G, Variant variant) {
  SplitComplex X;
  X.ring = G.ring;
  X.n = G.n;
  X.variant = variant;
  const Codec C = G.codec();
  const bool typed = variant == Variant::SPB_modI;
  std::vector<std::vector<SplitVertex>> per(G.order());
  for (std::size_t e = 0; e < G.order(); ++e) {
    const auto gm = C.matrix(G.elements[e]), gi = C.matrix(G.inverses[e]);
    for (int t = 0; t < G.n; ++t) {
      per[e].push_back(translate_standard(C, gm, gi, t, typed));
      X.vertex.push_back(per[e].back());
    }
  }
  std::sort(X.vertex.begin(), X.vertex.end());
  X.vertex.erase(std::unique(X.vertex.begin(), X.vertex.end()), X.vertex.end());
  for (auto& verts : per) {
    std::vector<std::uint32_t> s;
    for (const auto& x : verts) s.push_back(static_cast<std::uint32_t>(X.index_of(x)));
    X.complex.maximal.push_back(std::move(s));
  }
  finish(X);
  return X;
}

// Every (v, g) with g(v) = 1, and for the mod-I variants v = e_i, g = lambda_i mod q.
inline std::vector<SplitVertex> su_vertices(const FiniteModRing& R, int n, bool mod_I) {
  const std::uint32_t step = mod_I ? R.q : 1, r = R.m / step;
  double cand = 1;
  for (int i = 0; i < 2 * n; ++i) cand *= r;
  if (cand * (mod_I ? n : 1) > static_cast<double>(kMaxGroupOrder))
    throw FeasibilityError("enumerating SU vertices needs " + std::to_string(static_cast<long long>(cand)) +
                           " candidates; beyond the 2^26 guard");
  std::vector<SplitVertex> out;
  const std::size_t total = static_cast<std::size_t>(cand + 0.5);
  for (int type = mod_I ? 0 : -1; type < (mod_I ? n : 0); ++type)
    for (std::size_t idx = 0; idx < total; ++idx) {
      SplitVertex x;
      x.v.resize(n);
      x.g.resize(n);
      x.type = type;
      std::size_t c = idx;
      for (int i = 0; i < n; ++i, c /= r) x.v[i] = (step * static_cast<std::uint32_t>(c % r) + (i == type)) % R.m;
      for (int i = 0; i < n; ++i, c /= r) x.g[i] = (step * static_cast<std::uint32_t>(c % r) + (i == type)) % R.m;
      if (pair_value(x.g, x.v, R.m) == 1 % R.m) out.push_back(std::move(x));
    }
  std::sort(out.begin(), out.end());
  return out;
}

// Cliques of size <= max_size in the graph g_a(v_b) = g_b(v_a) = 0.
inline std::vector<std::vector<std::uint32_t>> su_cliques(const std::vector<SplitVertex>& V, std::uint32_t m,
                                                          int max_size) {
  const std::size_t nv = V.size();
  std::vector<std::vector<std::uint32_t>> adj(nv);
  for (std::size_t a = 0; a < nv; ++a)
    for (std::size_t b = a + 1; b < nv; ++b)
      if (pair_value(V[a].g, V[b].v, m) == 0 && pair_value(V[b].g, V[a].v, m) == 0)
        adj[a].push_back(static_cast<std::uint32_t>(b));
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur;
  auto grow = [&](auto&& self, const std::vector<std::uint32_t>& cand) -> void {
    out.push_back(cur);
    if (out.size() > max_cells()) throw FeasibilityError("SU complex has more than " + max_cells_text() + " in range");
    if (static_cast<int>(cur.size()) == max_size) return;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const auto w = cand[i];
      std::vector<std::uint32_t> next;
      std::set_intersection(cand.begin() + i + 1, cand.end(), adj[w].begin(), adj[w].end(), std::back_inserter(next));
      cur.push_back(w);
      self(self, next);
      cur.pop_back();
    }
  };
  for (std::uint32_t v = 0; v < nv; ++v) {
    cur = {v};
    if (max_size == 1) {
      out.push_back(cur);
      continue;
    }
    // seed with the neighbours above v
    std::vector<std::uint32_t> cand = adj[v];
    out.push_back(cur);
    for (std::size_t i = 0; i < cand.size(); ++i) {
      const auto w = cand[i];
      std::vector<std::uint32_t> next;
      std::set_intersection(cand.begin() + i + 1, cand.end(), adj[w].begin(), adj[w].end(), std::back_inserter(next));
      cur.push_back(w);
      grow(grow, next);
      cur.pop_back();
    }
  }
  return out;
}

}  // namespace detail

// SPB variants come from the group orbit of the standard simplex; SU variants
// from brute-force vertex enumeration and the flag condition g_i(v_j) = delta_ij.
inline SplitComplex spb_complex(const FiniteModRing& R, int n, Variant variant) {
  if (n < 1) throw InputError("n must be >= 1");
  const bool mod_I = variant == Variant::SPB_modI || variant == Variant::SU_modI;
  if (mod_I && !R.proper()) throw InputError("mod-I complexes need a proper ideal (q != 1)");
  if (variant == Variant::SPB_modI) return detail::orbit_complex(congruence_group(R, n), variant);
  if (variant == Variant::SPB) return detail::orbit_complex(congruence_group(FiniteModRing(R.m, 1), n), variant);
  SplitComplex X;
  X.ring = R;
  X.n = n;
  X.variant = variant;
  X.vertex = detail::su_vertices(R, n, mod_I);
  X.complex.maximal = detail::su_cliques(X.vertex, R.m, n);
  detail::finish(X);
  return X;
}

// ---- Y_Gamma ---------------------------------------------------------------

struct YGammaResult {
  SimplicialComplex complex;
  std::vector<std::pair<int, std::uint64_t>> vertex;  // (t, coset label), sorted
  bool saturated = false;
  bool iso_to_spb = false;
  std::string iso_failure;
};

// Coset labels of gamma H for every element: the least packed matrix in the coset.
inline std::vector<std::uint64_t> coset_labels(const CongruenceGroup& G, const std::vector<std::uint64_t>& H) {
  const Codec C = G.codec();
  std::vector<std::vector<std::uint32_t>> hm;
  for (auto h : H) hm.push_back(C.matrix(h));
  std::vector<std::uint64_t> label(G.order(), 0);
  std::vector<char> done(G.order(), 0);
  for (std::size_t e = 0; e < G.order(); ++e) {
    if (done[e]) continue;
    const auto gm = C.matrix(G.elements[e]);
    std::vector<std::size_t> members;
    std::uint64_t best = ~std::uint64_t{0};
    for (const auto& h : hm) {
      const std::uint64_t x = C.pack(C.mul(gm, h));
      members.push_back(G.index_of(x));
      best = std::min(best, x);
    }
    for (auto i : members) {
      label[i] = best;
      done[i] = 1;
    }
  }
  return label;
}

inline bool saturated(const FIGroupWindow& W, int n) {
  std::vector<std::vector<std::uint64_t>> sub(std::size_t{1} << n);
  for (std::uint32_t mask = 0; mask < sub.size(); ++mask) {
    std::vector<int> S;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) S.push_back(i);
    sub[mask] = W.subgroup(S, n);
  }
  for (std::uint32_t a = 0; a < sub.size(); ++a)
    for (std::uint32_t b = a + 1; b < sub.size(); ++b) {
      std::vector<std::uint64_t> meet;
      std::set_intersection(sub[a].begin(), sub[a].end(), sub[b].begin(), sub[b].end(), std::back_inserter(meet));
      if (meet != sub[a & b]) return false;
    }
  return true;
}

inline YGammaResult y_gamma_complex(const FIGroupWindow& W, int n) {
  if (n < 1 || n > W.N) throw InputError("n must lie in 1..N");
  const auto& G = W.at(n);
  YGammaResult Y;
  std::vector<std::vector<std::uint64_t>> label(n);
  for (int t = 0; t < n; ++t) {
    std::vector<int> rest;
    for (int i = 0; i < n; ++i)
      if (i != t) rest.push_back(i);
    label[t] = coset_labels(G, W.subgroup(rest, n));
    for (auto l : label[t]) Y.vertex.emplace_back(t, l);
  }
  std::sort(Y.vertex.begin(), Y.vertex.end());
  Y.vertex.erase(std::unique(Y.vertex.begin(), Y.vertex.end()), Y.vertex.end());
  auto vid = [&](int t, std::uint64_t l) {
    return static_cast<std::uint32_t>(std::lower_bound(Y.vertex.begin(), Y.vertex.end(), std::make_pair(t, l)) -
                                      Y.vertex.begin());
  };
  for (std::size_t e = 0; e < G.order(); ++e) {
    std::vector<std::uint32_t> s;
    for (int t = 0; t < n; ++t) s.push_back(vid(t, label[t][e]));
    Y.complex.maximal.push_back(std::move(s));
  }
  for (const auto& [t, l] : Y.vertex) Y.complex.labels.push_back({{"t", t}, {"coset", l}});
  Y.complex.canonicalize();
  Y.saturated = saturated(W, n);

  // (t, gamma Gamma_{[n] - t}) -> gamma x_t must be a well-defined bijection on
  // vertices that carries maximal simplices onto those of SPB_n(R, I)
  if (!W.ring.proper()) {
    Y.iso_failure = "ideal is not proper";
    return Y;
  }
  const auto S = spb_complex(W.ring, n, Variant::SPB_modI);
  const Codec C = G.codec();
  std::vector<std::int64_t> phi(Y.vertex.size(), -1);
  bool ok = S.vertex.size() == Y.vertex.size();
  if (!ok) Y.iso_failure = "vertex counts differ";
  for (std::size_t e = 0; ok && e < G.order(); ++e) {
    const auto gm = C.matrix(G.elements[e]), gi = C.matrix(G.inverses[e]);
    for (int t = 0; t < n && ok; ++t) {
      const auto y = vid(t, label[t][e]);
      const auto x = S.index_of(detail::translate_standard(C, gm, gi, t, true));
      if (x < 0) {
        ok = false;
        Y.iso_failure = "translate of a standard vertex is missing from SPB";
      } else if (phi[y] >= 0 && phi[y] != x) {
        ok = false;
        Y.iso_failure = "vertex map is not well defined on cosets";
      } else {
        phi[y] = x;
      }
    }
  }
  if (ok) {
    std::vector<std::int64_t> sorted_phi = phi;
    std::sort(sorted_phi.begin(), sorted_phi.end());
    if (std::adjacent_find(sorted_phi.begin(), sorted_phi.end()) != sorted_phi.end()) {
      ok = false;
      Y.iso_failure = "vertex map is not injective";
    }
  }
  if (ok) {
    std::vector<std::vector<std::uint32_t>> image;
    for (const auto& s : Y.complex.maximal) {
      std::vector<std::uint32_t> t;
      for (auto v : s) t.push_back(static_cast<std::uint32_t>(phi[v]));
      std::sort(t.begin(), t.end());
      image.push_back(std::move(t));
    }
    std::sort(image.begin(), image.end());
    if (image != S.complex.maximal) {
      ok = false;
      Y.iso_failure = "maximal simplices do not correspond";
    }
  }
  Y.iso_to_spb = ok;
  return Y;
}

// ---- verification ------------------------------------------------------------

struct Verdict {
  std::string mode;
  bool pass = false;
  json details;
};

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// H~_j(SPB_n(Z/m, q); F_p) = 0 for every j with n >= 2j + d + 3 (j >= -1).
inline Verdict verify_charney(const FiniteModRing& R, int n, int d, std::uint32_t p) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict V{"charney", true, {}};
  const int jmax = (n - d - 3) >= 0 ? (n - d - 3) / 2 : -1;
  const auto X = spb_complex(R, n, Variant::SPB_modI);
  const auto H = reduced_homology_fp(X.complex, p, jmax);
  json checked = json::array();
  for (int j = -1; j <= jmax; ++j) {
    checked.push_back({{"degree", j}, {"betti", H.at(j)}});
    if (H.at(j) != 0) V.pass = false;
  }
  V.details = {{"m", R.m}, {"q", R.q}, {"n", n}, {"d", d}, {"p", p}, {"checked", checked},
               {"homology", to_json(H)}, {"seconds", seconds_since(t0)}};
  return V;
}

// H~_{k-1}(SPB_{2k}(Z/p^ell, p); F_p) != 0.
inline Verdict verify_theorem_d(std::uint32_t p, int ell, int k) {
  if (!exactlin::is_prime(p)) throw InputError("modulus must be prime");
  if (k < 1) throw InputError("k must be >= 1");
  if (ell < 2)
    throw InputError("ell must be >= 2: for ell = 1 the ideal (p) of Z/p is zero, the group is trivial and "
                     "SPB_2k is a single simplex, so the reduced homology vanishes");
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t m = 1;
  for (int i = 0; i < ell; ++i) m *= p;
  if (m > (1u << 20)) throw FeasibilityError("p^ell is too large");
  const FiniteModRing R(static_cast<std::uint32_t>(m), p);
  const auto X = spb_complex(R, 2 * k, Variant::SPB_modI);
  const auto H = reduced_homology_fp(X.complex, p, k - 1);
  Verdict V{"theoremD", H.at(k - 1) != 0, {}};
  V.details = {{"p", p},
               {"ell", ell},
               {"k", k},
               {"n", 2 * k},
               {"maximal_simplices", X.complex.maximal.size()},
               {"degree", k - 1},
               {"betti", H.at(k - 1)},
               {"homology", to_json(H)},
               {"seconds", seconds_since(t0)}};
  return V;
}

// Every l-simplex of SU_n(R, I) with l <= n - d - 2 lies in SPB_n(R, I).
// Containment is also reported for the higher dimensions, without asserting it.
inline Verdict verify_spb_in_su(const FiniteModRing& R, int n, int d) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto spb = spb_complex(R, n, Variant::SPB_modI);
  const auto su = spb_complex(R, n, Variant::SU_modI);
  FaceTable F(spb.complex, n - 1);
  const int lmax = n - d - 2;
  std::vector<std::size_t> su_count(n, 0), contained(n, 0);
  std::vector<std::uint32_t> face;
  for (const auto& s : su.complex.maximal) {
    // su lists all cliques, so every SU simplex appears here
    face.clear();
    for (auto v : s) face.push_back(static_cast<std::uint32_t>(spb.index_of(su.vertex[v])));
    const int l = static_cast<int>(s.size()) - 1;
    ++su_count[l];
    bool in = std::find(face.begin(), face.end(), static_cast<std::uint32_t>(-1)) == face.end();
    if (in) {
      std::sort(face.begin(), face.end());
      in = F.find(face) >= 0;
    }
    if (in) ++contained[l];
  }
  Verdict V{"spb_in_su", true, {}};
  json dims = json::array();
  for (int l = 0; l < n; ++l) {
    dims.push_back({{"dim", l}, {"su_simplices", su_count[l]}, {"in_spb", contained[l]}, {"asserted", l <= lmax}});
    if (l <= lmax && contained[l] != su_count[l]) V.pass = false;
  }
  V.details = {{"m", R.m}, {"q", R.q}, {"n", n}, {"d", d}, {"max_asserted_dim", lmax}, {"dims", dims},
               {"spb_f_vector", F.f_vector()}, {"seconds", seconds_since(t0)}};
  return V;
}

}  // namespace fistab::splitbases
