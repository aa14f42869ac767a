#include <catch_amalgamated.hpp>

#include <random>

#include "fistab/combinatorics.hpp"
#include "fistab/fi/construct.hpp"
#include "fistab/fi/functors.hpp"
#include "fistab/fi/io.hpp"
#include "fistab/fi/module.hpp"

using namespace fistab;
using namespace fistab::fi;

namespace {

std::vector<TruncatedFIModule> sample_modules() {
  std::vector<TruncatedFIModule> out{constant(2, 5),         free_module(3, 2, 5),
                                     torsion_point(2, 0, 4), torsion_point(3, 2, 4),
                                     induced(fb_sign(3, 2), 5), induced(fb_trivial(2, 1), 6)};
  for (std::uint64_t seed : {1, 2, 3})
    out.push_back(random_presented({seed, seed % 2 ? 2u : 3u, 2, 3, 5, 2, 2}));
  return out;
}

std::vector<int> random_injection(std::mt19937_64& rng, int m, int n) {
  std::vector<int> pts(n);
  std::iota(pts.begin(), pts.end(), 0);
  std::shuffle(pts.begin(), pts.end(), rng);
  pts.resize(m);
  return pts;
}

}  // namespace

TEST_CASE("standard constructions satisfy every relation") {
  for (const auto& M : sample_modules()) {
    auto rep = validate(M);
    INFO("first violation: " << (rep.violations.empty() ? "" : rep.violations[0].check));
    CHECK(rep.pass);
  }
}

TEST_CASE("induced dimensions follow the binomial formula") {
  auto V = fb_direct_sum(fb_regular(2, 2), fb_trivial(2, 1));
  auto M = induced(V, 6);
  for (int n = 0; n <= 6; ++n) CHECK(M.dim(n) == comb::binomial(n, 2) * 2 + comb::binomial(n, 1));
  auto F = free_module(3, 2, 6);
  for (int n = 0; n <= 6; ++n) CHECK(F.dim(n) == (n >= 2 ? n * (n - 1) : 0));
  auto C = constant(5, 4);
  for (int n = 0; n <= 4; ++n) CHECK(C.dim(n) == 1);
}

TEST_CASE("injections compose functorially") {
  std::mt19937_64 rng(9);
  for (const auto& M : sample_modules()) {
    const int N = M.width();
    for (int trial = 0; trial < 10; ++trial) {
      int a = rng() % (N + 1), b = a + rng() % (N - a + 1), c = b + rng() % (N - b + 1);
      auto f = random_injection(rng, a, b), g = random_injection(rng, b, c);
      std::vector<int> gf(a);
      for (int t = 0; t < a; ++t) gf[t] = g[f[t]];
      CHECK(M.injection_matrix(a, c, gf) == M.injection_matrix(b, c, g) * M.injection_matrix(a, b, f));
    }
  }
}

TEST_CASE("two-step symmetry is caught when equivariance alone holds") {
  // Search Phi_2 over all 2x2 matrices mod 2 on (F_2^2, F_2^2, F_2[S_2]).
  auto reg = fb_regular(2, 2).transpositions[2][0];
  int only_two_step = 0;
  for (int bits = 0; bits < 16; ++bits) {
    TruncatedFIModule M(2, 2);
    M.set_level(0, 2, {}, DenseMatrix(2, 0, 2));
    M.set_level(1, 2, {}, DenseMatrix::identity(2, 2));
    DenseMatrix phi(2, 2, 2);
    for (int k = 0; k < 4; ++k) phi(k / 2, k % 2) = (bits >> k) & 1;
    M.set_level(2, 2, {reg}, phi);
    auto rep = validate(M);
    if (!rep.pass) {
      REQUIRE(rep.violations.size() == 1);
      CHECK(rep.violations[0].check == "two-step symmetry");
      CHECK(rep.violations[0].n == 2);
      ++only_two_step;
    }
  }
  // phi passes iff both columns are swap-invariant: 4 of 16 choices
  CHECK(only_two_step == 12);
}

TEST_CASE("corrupted modules are reported with witnesses") {
  auto M = induced(fb_trivial(2, 1), 4);
  auto t = M.transpositions(4);
  auto bad = M;
  t[1](0, 0) ^= 1;
  bad.set_level(4, M.dim(4), t, M.inclusion(4));
  auto rep = validate(bad);
  CHECK_FALSE(rep.pass);
  bool saw_involution = false;
  for (const auto& v : rep.violations)
    if (v.check == "involution" && v.n == 4 && v.witness == std::vector<int>{1}) saw_involution = true;
  CHECK(saw_involution);

  auto phi = M.inclusion(3);
  phi(0, 0) ^= 1;
  auto bad2 = M;
  bad2.set_level(3, M.dim(3), M.transpositions(3), phi);
  auto rep2 = validate(bad2);
  CHECK_FALSE(rep2.pass);
  CHECK(std::any_of(rep2.violations.begin(), rep2.violations.end(),
                    [](const Violation& v) { return v.check == "equivariance" && v.n == 3; }));
}

TEST_CASE("json round trip and decode errors") {
  for (const auto& M : sample_modules()) {
    auto back = decode_fi_module(encode(M));
    CHECK(encode(back) == encode(M));
  }
  auto j = encode(constant(2, 2));
  j["p"] = 4;
  CHECK_THROWS_WITH(decode_fi_module(j), "modulus must be prime");
  j = encode(constant(2, 2));
  j["levels"][2]["inclusion"] = json::array({json::array({1, 0})});
  try {
    decode_fi_module(j);
    FAIL("expected a dimension mismatch");
  } catch (const DimensionMismatch& e) {
    CHECK(e.degree() == 2);
    CHECK(std::string(e.what()).find("n=2") != std::string::npos);
  }
  j = encode(constant(2, 2));
  j["levels"][1]["dim"] = 2;
  CHECK_THROWS_AS(decode_fi_module(j), DimensionMismatch);
}

TEST_CASE("random presented modules are deterministic in the seed") {
  RandomPresentedSpec s{42, 3, 2, 3, 6, 2, 2};
  CHECK(encode(random_presented(s)) == encode(random_presented(s)));
  auto M = random_presented(s);
  CHECK(validate(M).pass);
  for (int n = 0; n <= 6; ++n) CHECK(M.dim(n) <= free_sum(3, {{0, 2}}, 6).dim(n) + free_sum(3, {{2, 2}}, 6).dim(n));
}

TEST_CASE("shift composes and preserves validity") {
  for (const auto& M : sample_modules()) {
    const int N = M.width();
    for (int a = 0; a <= std::min(N, 2); ++a) {
      auto S = shift(M, a);
      CHECK(validate(S).pass);
      CHECK(S.width() == N - a);
      for (int n = 0; n <= S.width(); ++n) CHECK(S.dim(n) == M.dim(n + a));
      if (a + 1 <= N) CHECK(encode(shift(S, 1)) == encode(shift(M, a + 1)));
    }
  }
  CHECK_THROWS_AS(shift(constant(2, 2), 3), WindowExhausted);
}

TEST_CASE("shift of an induced module splits as expected") {
  // Sigma I(k at 1) = I(k at 0) + I(k at 1)
  auto S = shift(induced(fb_trivial(2, 1), 6), 1);
  for (int n = 0; n <= 5; ++n) CHECK(S.dim(n) == static_cast<std::size_t>(n + 1));
}

TEST_CASE("derivatives of basic modules") {
  auto D0 = derivative(constant(3, 5));
  for (int n = 0; n <= 4; ++n) CHECK(D0.dim(n) == 0);
  auto D1 = derivative(induced(fb_trivial(3, 1), 5));
  CHECK(validate(D1).pass);
  for (int n = 0; n <= 4; ++n) CHECK(D1.dim(n) == 1);
  auto D2 = derivative(free_module(2, 2, 5));
  CHECK(validate(D2).pass);
  // Q_1 I(k[S_2]) = I(Res k[S_2]) = I(k[S_1]^2): dims 2n
  for (int n = 0; n <= 4; ++n) CHECK(D2.dim(n) == static_cast<std::size_t>(2 * n));
  for (const auto& M : sample_modules()) {
    if (M.width() < 2) continue;
    CHECK(validate(derivative(M)).pass);
    CHECK(validate(derivative(M, 2)).pass);
  }
}

TEST_CASE("observed torsion") {
  auto t = observed_torsion(torsion_point(2, 0, 3));
  CHECK(t.dims == std::vector<std::size_t>{1, 0, 0, 0});
  CHECK(t.h0_observed == 0);
  auto u = observed_torsion(free_module(2, 1, 4));
  CHECK(u.h0_observed == -1);
  auto mixed = direct_sum(torsion_point(2, 2, 5), constant(2, 5));
  CHECK(observed_torsion(mixed).h0_observed == 2);
  CHECK(is_observed_torsion(torsion_point(2, 1, 3)));
  CHECK_FALSE(is_observed_torsion(constant(2, 3)));
}

TEST_CASE("kernels, cokernels and naturality of free maps") {
  std::mt19937_64 rng(4);
  auto target = free_sum(2, {{1, 1}}, 5);
  FreeSpec src{{1, 2}};
  std::vector<exactlin::Vec> imgs{random_vector(rng, target.dim(1), 2), random_vector(rng, target.dim(2), 2)};
  auto f = free_map(src, target, imgs);
  CHECK(is_natural(f));
  auto K = kernel(f), Q = cokernel(f), I = image(f);
  CHECK(validate(K).pass);
  CHECK(validate(Q).pass);
  for (int n = 0; n <= 5; ++n) {
    CHECK(K.dim(n) + I.dim(n) == f.source.dim(n));
    CHECK(Q.dim(n) + I.dim(n) == f.target.dim(n));
  }
}
