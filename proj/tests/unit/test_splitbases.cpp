#include <catch_amalgamated.hpp>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "fistab/splitbases/spb.hpp"

using namespace fistab;
using namespace fistab::splitbases;

namespace {

// Leibniz determinant, independent of the library's Laplace expansion.
std::int64_t leibniz_det(const std::vector<std::uint32_t>& a, int n, std::int64_t m) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t acc = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    std::int64_t t = 1;
    for (int i = 0; i < n; ++i) t = t * a[i * n + perm[i]] % m;
    acc = (acc + (inversions % 2 ? m - t : t)) % m;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

// Every n x n matrix over Z/m that is the identity mod q and has unit determinant.
std::set<std::vector<std::uint32_t>> brute_force_group(std::uint32_t m, std::uint32_t q, int n) {
  std::set<std::vector<std::uint32_t>> out;
  const int cells = n * n;
  std::vector<std::uint32_t> a(cells, 0);
  std::size_t total = 1;
  for (int i = 0; i < cells; ++i) total *= m;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t x = idx;
    bool ok = true;
    for (int c = 0; c < cells; ++c, x /= m) {
      a[c] = static_cast<std::uint32_t>(x % m);
      if ((a[c] + q - (c / n == c % n ? 1 : 0)) % q) ok = false;
    }
    if (ok && std::gcd<std::int64_t>(leibniz_det(a, n, m), m) == 1) out.insert(a);
  }
  return out;
}

std::int64_t reduced_euler(const ReducedHomology& H) {
  std::int64_t chi = -1, sign = 1;
  for (auto f : H.f_vector) chi += sign * static_cast<std::int64_t>(f), sign = -sign;
  return chi;
}

std::int64_t alternating_betti(const ReducedHomology& H) {
  std::int64_t s = 0;
  for (std::size_t i = 0; i < H.betti.size(); ++i) s += (i % 2 ? 1 : -1) * static_cast<std::int64_t>(H.betti[i]);
  return s;
}

std::size_t torsion_divisible(const ReducedHomology& H, int k, std::uint32_t p) {
  if (k + 1 < 0 || k + 1 >= static_cast<int>(H.torsion.size())) return 0;
  std::size_t c = 0;
  for (const auto& d : H.torsion[k + 1])
    if (exactlin::BigInt(d) % p == 0) ++c;
  return c;
}

// dim H~_k(X; F_p) = rank H~_k(X; Z) + #(p-divisible torsion in H~_k) + #(in H~_{k-1})
void check_universal_coefficients(const SimplicialComplex& X, int kmax, std::uint32_t p) {
  const auto Z = reduced_homology_z(X, kmax + 1);
  const auto F = reduced_homology_fp(X, p, kmax);
  for (int k = -1; k <= kmax; ++k) {
    INFO("degree " << k << ", p = " << p);
    CHECK(F.at(k) == Z.at(k) + torsion_divisible(Z, k, p) + torsion_divisible(Z, k - 1, p));
  }
}

SimplicialComplex bare(std::size_t vertices, std::vector<std::vector<std::uint32_t>> maximal) {
  SimplicialComplex X;
  for (std::size_t i = 0; i < vertices; ++i) X.labels.push_back(static_cast<int>(i));
  X.maximal = std::move(maximal);
  X.canonicalize();
  return X;
}

// Six-vertex real projective plane.
SimplicialComplex projective_plane() {
  return bare(6, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                  {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {1, 3, 5}, {2, 4, 5}});
}

}  // namespace

TEST_CASE("congruence groups agree with brute-force enumeration") {
  for (auto [m, q, n] : std::vector<std::array<std::uint32_t, 3>>{{4, 2, 2}, {4, 2, 3}, {9, 3, 2}, {6, 2, 2}, {6, 3, 2},
                                                                   {4, 1, 2}, {5, 5, 2}, {8, 4, 2}}) {
    INFO("m = " << m << ", q = " << q << ", n = " << n);
    const FiniteModRing R(m, q);
    const auto G = congruence_group(R, static_cast<int>(n));
    const auto brute = brute_force_group(m, q, static_cast<int>(n));
    CHECK(G.order() == brute.size());
    CHECK(exactlin::BigInt(G.order()) == congruence_order(R, static_cast<int>(n)));
    const Codec C = G.codec();
    for (std::size_t i = 0; i < G.order(); ++i) {
      CHECK(brute.count(C.matrix(G.elements[i])));
      CHECK(C.mul(G.elements[i], G.inverses[i]) == C.pack(C.identity()));
    }
  }
  CHECK(congruence_group(FiniteModRing(4, 2), 2).order() == 16);
  CHECK(congruence_group(FiniteModRing(4, 2), 3).order() == 512);
  CHECK(congruence_group(FiniteModRing(9, 3), 2).order() == 81);
}

TEST_CASE("level-p subgroups of GL_n(Z/p^2) have order p^(n^2)") {
  for (std::uint32_t p : {2u, 3u})
    for (int n = 0; n <= (p == 2 ? 4 : 3); ++n) {
      const auto G = congruence_group(FiniteModRing(p * p, p), n);
      std::size_t expect = 1;
      for (int i = 0; i < n * n; ++i) expect *= p;
      CHECK(G.order() == expect);
      // closure under products on a sample
      const Codec C = G.codec();
      for (std::size_t i = 0; i < G.order(); i += 97)
        for (std::size_t j = 0; j < G.order(); j += 89) CHECK(G.contains(C.mul(G.elements[i], G.elements[j])));
    }
}

TEST_CASE("group guards and ring validation") {
  CHECK_THROWS_AS(FiniteModRing(4, 3), InputError);
  CHECK_THROWS_AS(FiniteModRing(1, 1), InputError);
  CHECK_THROWS_AS(congruence_group(FiniteModRing(4, 2), 6), FeasibilityError);
  CHECK_THROWS_AS(congruence_group(FiniteModRing(8, 2), 4), FeasibilityError);
  CHECK_FALSE(FiniteModRing(6, 1).proper());
  CHECK(FiniteModRing(6, 6).proper());
}

TEST_CASE("the FI-group window: inclusions and permutation conjugation") {
  const FIGroupWindow W(FiniteModRing(4, 2), 3);
  for (int n = 1; n <= 3; ++n) {
    std::set<std::uint64_t> images;
    for (auto c : W.at(n - 1).elements) {
      const auto x = W.inclusion(c, n);
      CHECK(W.at(n).contains(x));
      images.insert(x);
    }
    CHECK(images.size() == W.at(n - 1).order());
    std::vector<int> w(n);
    std::iota(w.begin(), w.end(), 0);
    do {
      std::vector<std::uint64_t> conj;
      for (auto c : W.at(n).elements) conj.push_back(W.conjugate(c, w));
      std::sort(conj.begin(), conj.end());
      CHECK(conj == W.at(n).elements);
    } while (std::next_permutation(w.begin(), w.end()));
  }
}

TEST_CASE("SPB_n(Z/4, 2) sizes") {
  const FiniteModRing R(4, 2);
  auto one = spb_complex(R, 1, Variant::SPB_modI);
  CHECK(one.vertex.size() == 2);
  CHECK(one.complex.dim() == 0);

  auto two = spb_complex(R, 2, Variant::SPB_modI);
  CHECK(two.vertex.size() == 16);
  CHECK(two.complex.maximal.size() == 16);
  std::vector<int> degree(16, 0);
  for (const auto& e : two.complex.maximal)
    for (auto v : e) ++degree[v];
  CHECK(std::all_of(degree.begin(), degree.end(), [](int d) { return d == 2; }));

  auto three = spb_complex(R, 3, Variant::SPB_modI);
  CHECK(FaceTable(three.complex, 2).f_vector() == std::vector<std::size_t>{96, 768, 512});
  for (const auto* X : {&one, &two, &three}) {
    CHECK(X->simplex_predicate_holds());
    for (const auto& x : X->vertex) CHECK(pair_value(x.g, x.v, 4) == 1);
  }
}

TEST_CASE("f-vectors match orbit-stabilizer counts") {
  // faces of type T are the translates of {x_t : t in T}; the stabilizer fixes
  // column t and row t for every t in T
  for (auto [m, q, n] : std::vector<std::array<std::uint32_t, 3>>{{4, 2, 2}, {4, 2, 3}, {9, 3, 2}, {6, 2, 2}}) {
    const FiniteModRing R(m, q);
    const auto G = congruence_group(R, static_cast<int>(n));
    const Codec C = G.codec();
    std::vector<std::size_t> expect(n, 0);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::size_t stab = 0;
      for (auto code : G.elements) {
        const auto a = C.matrix(code);
        bool fixes = true;
        for (std::uint32_t t = 0; t < n; ++t) {
          if (!((mask >> t) & 1)) continue;
          for (std::uint32_t i = 0; i < n; ++i)
            if (a[i * n + t] != (i == t) || a[t * n + i] != (i == t)) fixes = false;
        }
        stab += fixes;
      }
      expect[std::popcount(mask) - 1] += G.order() / stab;
    }
    const auto X = spb_complex(R, static_cast<int>(n), Variant::SPB_modI);
    CHECK(FaceTable(X.complex, n - 1).f_vector() == expect);
  }
}

TEST_CASE("the congruence group acts simplicially on SPB") {
  const FiniteModRing R(4, 2);
  const int n = 3;
  const auto X = spb_complex(R, n, Variant::SPB_modI);
  const auto G = congruence_group(R, n);
  const Codec C = G.codec();
  FaceTable F(X.complex, n - 1);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t e = rng() % G.order();
    const auto gm = C.matrix(G.elements[e]), gi = C.matrix(G.inverses[e]);
    const int k = static_cast<int>(rng() % n);
    const auto face = F.vertices(k, rng() % F.count(k));
    std::vector<std::uint32_t> image;
    for (auto v : face) {
      // gamma (v, g) = (gamma v, g gamma^{-1})
      SplitVertex y;
      y.v.assign(n, 0);
      y.g.assign(n, 0);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          y.v[i] = (y.v[i] + gm[i * n + j] * X.vertex[v].v[j]) % 4;
          y.g[j] = (y.g[j] + X.vertex[v].g[i] * gi[i * n + j]) % 4;
        }
      const auto idx = X.index_of(y);
      REQUIRE(idx >= 0);
      CHECK(X.vertex[idx].type == X.vertex[v].type);
      image.push_back(static_cast<std::uint32_t>(idx));
    }
    std::sort(image.begin(), image.end());
    CHECK(F.find(image) >= 0);
  }
}

TEST_CASE("SU and the full-ring variants") {
  const FiniteModRing R(4, 2);
  for (int n = 1; n <= 3; ++n) {
    const auto su = spb_complex(R, n, Variant::SU_modI);
    const auto spb = spb_complex(R, n, Variant::SPB_modI);
    CHECK(su.simplex_predicate_holds());
    CHECK(su.vertex == spb.vertex);
    // mod-I vertices carry the type i with v = e_i mod q
    for (const auto& x : su.vertex)
      for (int i = 0; i < n; ++i) CHECK(x.v[i] % 2 == (i == x.type ? 1u : 0u));
  }
  // over a field every unimodular pair extends, so SPB and SU agree
  const FiniteModRing F3(3, 1);
  for (int n = 1; n <= 2; ++n) {
    const auto su = spb_complex(F3, n, Variant::SU);
    const auto spb = spb_complex(F3, n, Variant::SPB);
    CHECK(su.vertex == spb.vertex);
    CHECK(FaceTable(su.complex, n - 1).f_vector() == FaceTable(spb.complex, n - 1).f_vector());
  }
  // SU_1(F_3): (v, v^{-1}) for v = 1, 2
  CHECK(spb_complex(F3, 1, Variant::SU).vertex.size() == 2);
  // SPB over Z/4 with I = R: GL_2(Z/4) has order 96
  const auto full = spb_complex(FiniteModRing(4, 1), 2, Variant::SPB);
  CHECK(congruence_group(FiniteModRing(4, 1), 2).order() == 96);
  CHECK(full.simplex_predicate_holds());
  CHECK(full.vertex.front().type == -1);
  CHECK_THROWS_AS(spb_complex(FiniteModRing(4, 1), 2, Variant::SPB_modI), InputError);
  CHECK_THROWS_AS(spb_complex(FiniteModRing(4, 1), 2, Variant::SU_modI), InputError);
  CHECK_THROWS_AS(spb_complex(R, 0, Variant::SPB_modI), InputError);
  CHECK_THROWS_AS(parse_variant("SPB_mod_I"), InputError);
}

TEST_CASE("reduced homology of small complexes") {
  const auto circle = bare(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto H = reduced_homology_fp(circle, 2, 2);
  CHECK(H.at(-1) == 0);
  CHECK(H.at(0) == 0);
  CHECK(H.at(1) == 1);
  CHECK(H.at(2) == 0);

  for (int d = 0; d <= 5; ++d) {
    std::vector<std::uint32_t> s(d + 1);
    std::iota(s.begin(), s.end(), 0u);
    const auto Hs = reduced_homology_fp(bare(d + 1, {s}), 3, d);
    for (int k = -1; k <= d; ++k) CHECK(Hs.at(k) == 0);
    const auto Zs = reduced_homology_z(bare(d + 1, {s}), d);
    for (int k = -1; k <= d; ++k) CHECK(Zs.at(k) == 0);
  }

  const SimplicialComplex empty;
  CHECK(reduced_homology_fp(empty, 2, 0).at(-1) == 1);
  CHECK(reduced_homology_z(empty, 0).at(-1) == 1);

  const auto rp2 = projective_plane();
  const auto Z = reduced_homology_z(rp2, 2);
  CHECK(Z.at(1) == 0);
  CHECK(Z.torsion[2] == std::vector<std::string>{"2"});
  CHECK(reduced_homology_fp(rp2, 2, 2).at(1) == 1);
  CHECK(reduced_homology_fp(rp2, 2, 2).at(2) == 1);
  CHECK(reduced_homology_fp(rp2, 3, 2).at(1) == 0);
  check_universal_coefficients(rp2, 2, 2);
  check_universal_coefficients(rp2, 2, 3);

  CHECK_THROWS_AS(reduced_homology_fp(circle, 4, 1), InputError);
}

TEST_CASE("Euler characteristic and universal coefficients on constructed complexes") {
  std::vector<SimplicialComplex> cases{projective_plane()};
  for (int n = 1; n <= 3; ++n) cases.push_back(spb_complex(FiniteModRing(4, 2), n, Variant::SPB_modI).complex);
  cases.push_back(spb_complex(FiniteModRing(9, 3), 2, Variant::SPB_modI).complex);
  cases.push_back(spb_complex(FiniteModRing(6, 2), 2, Variant::SPB_modI).complex);
  cases.push_back(spb_complex(FiniteModRing(3, 1), 2, Variant::SU).complex);
  for (std::size_t i = 0; i < cases.size(); ++i) {
    INFO("complex " << i);
    const auto& X = cases[i];
    for (std::uint32_t p : {2u, 3u}) {
      const auto H = reduced_homology_fp(X, p, X.dim());
      CHECK(reduced_euler(H) == alternating_betti(H));
    }
    const auto Z = reduced_homology_z(X, X.dim());
    CHECK(reduced_euler(Z) == alternating_betti(Z));
    for (std::uint32_t p : {2u, 3u}) check_universal_coefficients(X, X.dim(), p);
  }
}

TEST_CASE("SPB_2(Z/4, 2) is four disjoint squares") {
  const auto X = spb_complex(FiniteModRing(4, 2), 2, Variant::SPB_modI);
  const auto H = reduced_homology_fp(X.complex, 2, 1);
  CHECK(H.at(0) == 3);
  CHECK(H.at(1) == 4);
}

TEST_CASE("Y_Gamma matches SPB and is saturated") {
  const FIGroupWindow W(FiniteModRing(4, 2), 3);
  for (int n = 1; n <= 3; ++n) {
    const auto Y = y_gamma_complex(W, n);
    INFO("n = " << n << ": " << Y.iso_failure);
    CHECK(Y.iso_to_spb);
    CHECK(Y.saturated);
  }
  const FIGroupWindow W9(FiniteModRing(9, 3), 2);
  CHECK(y_gamma_complex(W9, 2).iso_to_spb);

  // the trivial group gives the full simplex
  const FIGroupWindow T(FiniteModRing(4, 4), 4);
  for (int n = 1; n <= 4; ++n) {
    const auto Y = y_gamma_complex(T, n);
    CHECK(Y.complex.vertices() == static_cast<std::size_t>(n));
    CHECK(Y.complex.maximal.size() == 1);
    CHECK(Y.complex.dim() == n - 1);
    CHECK(Y.saturated);
    CHECK(Y.iso_to_spb);
  }
  CHECK_THROWS_AS(y_gamma_complex(W, 4), InputError);
}

TEST_CASE("Gamma_n-orbits of (k-1)-simplices of Y_Gamma number C(n, k)") {
  for (auto [m, q, n] : std::vector<std::array<std::uint32_t, 3>>{{4, 2, 2}, {4, 2, 3}, {9, 3, 2}}) {
    const FIGroupWindow W(FiniteModRing(m, q), static_cast<int>(n));
    const auto Y = y_gamma_complex(W, static_cast<int>(n));
    const auto& G = W.at(static_cast<int>(n));
    const Codec C = G.codec();
    // coset labels per type, to act by left multiplication
    std::vector<std::vector<std::uint64_t>> label(n);
    for (std::uint32_t t = 0; t < n; ++t) {
      std::vector<int> rest;
      for (std::uint32_t i = 0; i < n; ++i)
        if (i != t) rest.push_back(static_cast<int>(i));
      label[t] = coset_labels(G, W.subgroup(rest, static_cast<int>(n)));
    }
    auto act = [&](std::size_t h, std::uint32_t v) {
      const auto [t, l] = Y.vertex[v];
      const auto img = label[t][G.index_of(C.mul(G.elements[h], l))];
      return static_cast<std::uint32_t>(
          std::lower_bound(Y.vertex.begin(), Y.vertex.end(), std::make_pair(t, img)) - Y.vertex.begin());
    };
    FaceTable F(Y.complex, static_cast<int>(n) - 1);
    for (std::uint32_t k = 1; k <= n; ++k) {
      std::set<std::vector<std::uint32_t>> seen;
      std::size_t orbits = 0;
      for (std::size_t i = 0; i < F.count(k - 1); ++i) {
        const auto face = F.vertices(static_cast<int>(k) - 1, i);
        if (seen.count(face)) continue;
        ++orbits;
        for (std::size_t h = 0; h < G.order(); ++h) {
          std::vector<std::uint32_t> img;
          for (auto v : face) img.push_back(act(h, v));
          std::sort(img.begin(), img.end());
          seen.insert(img);
        }
      }
      CHECK(orbits == comb::binomial(n, k));
    }
  }
}

TEST_CASE("verification modes") {
  const FiniteModRing R(4, 2);
  auto c = verify_charney(R, 3, 0, 2);
  CHECK(c.pass);
  CHECK(c.details["checked"].size() == 2);
  auto c9 = verify_charney(FiniteModRing(9, 3), 3, 0, 3);
  CHECK(c9.pass);
  // n = 2 asserts nothing beyond degree -1
  CHECK(verify_charney(R, 2, 0, 2).details["checked"].size() == 1);

  auto d = verify_theorem_d(2, 2, 1);
  CHECK(d.pass);
  CHECK(d.details["betti"] == 3);
  auto d9 = verify_theorem_d(3, 2, 1);
  CHECK(d9.pass);
  CHECK_THROWS_AS(verify_theorem_d(2, 1, 1), InputError);
  CHECK_THROWS_AS(verify_theorem_d(4, 2, 1), InputError);

  auto s = verify_spb_in_su(R, 3, 0);
  CHECK(s.pass);
  CHECK(s.details["max_asserted_dim"] == 1);
  CHECK(s.details["dims"][1]["in_spb"] == s.details["dims"][1]["su_simplices"]);
}

TEST_CASE("complex files round trip") {
  const auto X = spb_complex(FiniteModRing(4, 2), 2, Variant::SPB_modI);
  const json j = to_json(X.complex);
  const auto Y = complex_from_json(json::parse(j.dump()));
  CHECK(Y.maximal == X.complex.maximal);
  CHECK(Y.labels == X.complex.labels);
  CHECK(j["vertices"][0].contains("type"));

  CHECK_THROWS_AS(complex_from_json(json{{"kind", "module"}}), InputError);
  CHECK_THROWS_AS(complex_from_json(json::parse(R"({"kind":"simplicial","vertices":[0],"maximal":[[0,1]]})")),
                  InputError);
  CHECK_THROWS_AS(complex_from_json(json::parse(R"({"kind":"simplicial","vertices":[0,1],"maximal":[[1,1]]})")),
                  InputError);
  CHECK_THROWS_AS(complex_from_json(json::parse(R"({"kind":"simplicial","vertices":[0,1],"maximal":[[]]})")),
                  InputError);
}
