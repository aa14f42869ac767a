#include <catch_amalgamated.hpp>

#include "fistab/bounds/audit.hpp"
#include "fistab/bounds/formulas.hpp"

using namespace fistab;
using namespace fistab::bounds;

namespace {

// Four-tuple (delta, hmax, t0, t1) of a report.
std::array<Int, 4> quad(const BoundsReport& r) { return {r.at("delta"), r.at("hmax"), r.at("t0"), r.at("t1")}; }

// Max-expressions of the spectral sequence bound, evaluated by scanning all
// (p, q) with p + q = l instead of by diagonal index.
Int spectral_hmax_oracle(Int d, const std::vector<Int>& D, const std::vector<Int>& eta, Int k) {
  const Int s = k + 2 > d ? k + 2 : d;
  Int best = -1;
  for (Int p = 0; p < static_cast<Int>(eta.size()); ++p)
    for (Int q = 0; p + q < static_cast<Int>(eta.size()); ++q) {
      if (p + q <= k + s - d && eta[p + q] > best) best = eta[p + q];
      if (p + q <= 2 * k - d + 1 && p + q < static_cast<Int>(D.size()) && 2 * D[p + q] - 2 > best)
        best = 2 * D[p + q] - 2;
    }
  return best;
}

}  // namespace

TEST_CASE("star bounds in both directions") {
  auto a = star_bounds(StarMode::from_delta_hmax, 1, 0);
  CHECK(a.at("t0") == 2);
  CHECK(a.at("t1") == 3);
  auto b = star_bounds(StarMode::from_t0_t1, 0, 1);
  CHECK(b.at("delta") == 0);
  CHECK(b.at("hmax") == 0);
  CHECK(star_bounds(StarMode::from_delta_hmax, -1, -1).at("t0") == -1);
  CHECK_THROWS_AS(star_bounds(StarMode::from_t0_t1, -2, 0), InputError);
  CHECK(to_json(a)["formulas"]["t0"] == "delta + hmax + 1");
}

TEST_CASE("local cohomology bounds") {
  auto r = local_cohomology_bounds(0, 1, 0);
  CHECK(r.at("h0") == 0);
  CHECK(r.at("h1") == -1);
  CHECK(r.at("h2") == -2);
  // t1 = -1 forces a negative bound: torsion-free
  CHECK(local_cohomology_bounds(1, -1, 1).at("h0") == -3);
  auto s = local_cohomology_bounds(2, 3, 2);
  CHECK(s.at("h0") == 4);
  CHECK(s.at("h1") == 3);
  CHECK(s.at("h2") == 2);
  CHECK(s.at("h3") == 0);
  // vanishing beyond delta + 1
  for (Int delta = -1; delta <= 6; ++delta) {
    auto t = local_cohomology_bounds(3, 4, delta);
    for (Int i = 2; i <= delta + 2; ++i) CHECK((t.at("h" + std::to_string(i)) < 0) == (i > delta + 1));
  }
}

TEST_CASE("kernel and cokernel bounds") {
  auto r = kercoker_bounds(1, -1, 1, -1);
  CHECK(r.at("hmax_ker") == 0);
  CHECK(r.at("hmax_coker") == 0);
  CHECK(r.at("delta_ker") == 1);
  // identity map: the zero kernel and cokernel sit below every bound
  for (Int d = -1; d <= 4; ++d)
    for (Int h = -1; h <= 4; ++h) {
      auto k = kercoker_bounds(d, h, d, h);
      CHECK(k.at("hmax_ker") >= -1);
      CHECK(k.at("delta_coker") >= -1);
    }
}

TEST_CASE("spectral sequence propagation") {
  SpectralInput S{2, {0, 1, 2, 3, 4}, {-1, -1, -1, -1, -1}};
  auto r = typeA_propagate(S, 1);
  CHECK(r.at("delta") == 1);
  CHECK(r.at("hmax") == 0);

  // a single column collapsing at page k + 2
  for (Int k = 0; k <= 3; ++k) {
    SpectralInput C{k + 2, {1, 3, 0, 2, 5, 1}, {0, 2, -1, 4, 1, 0}};
    auto c = typeA_propagate(C, k);
    Int expect = -1;
    for (Int l = 0; l <= k; ++l) expect = std::max(expect, C.eta[l]);
    for (Int l = 0; l <= 2 * k - (k + 2) + 1; ++l) expect = std::max(expect, 2 * C.D[l] - 2);
    CHECK(c.at("delta") == C.D[k]);
    CHECK(c.at("hmax") == expect);
  }

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    SpectralInput R;
    R.d = std::uniform_int_distribution<int>(0, 5)(rng);
    for (int l = 0; l < 12; ++l) {
      R.D.push_back(std::uniform_int_distribution<int>(-1, 9)(rng));
      R.eta.push_back(std::uniform_int_distribution<int>(-1, 9)(rng));
    }
    const Int k = std::uniform_int_distribution<int>(0, 4)(rng);
    auto b = typeA_propagate(R, k);
    CHECK(b.at("delta") == R.D[k]);
    CHECK(b.at("hmax") == spectral_hmax_oracle(R.d, R.D, R.eta, k));
  }

  SpectralInput short_input{2, {0, 1}, {-1, -1}};
  CHECK_THROWS_WITH(typeA_propagate(short_input, 3), Catch::Matchers::ContainsSubstring("missing diagonal"));
}

TEST_CASE("semi-induced spectral sequences") {
  CHECK(quad(typeA_semiinduced(2, 1, 1)) == std::array<Int, 4>{2, 6, 9, 16});
  auto r = typeA_semiinduced(1, 2, 3);
  CHECK(r.at("delta") == 3);
  CHECK(r.at("hmax") == 8);
  for (Int mu = 0; mu <= 3; ++mu)
    for (Int d = 1; d <= 4; ++d) {
      auto z = typeA_semiinduced(mu, d, 0);
      CHECK(z.at("delta") == 0);
      CHECK(z.at("hmax") == std::max<Int>(-1, -2 * mu * (d - 1) - 2));
      // t0 and t1 follow from delta and hmax once hmax is non-negative
      for (Int k = 0; k <= 6; ++k) {
        auto b = typeA_semiinduced(mu, d, k);
        auto st = star_bounds(StarMode::from_delta_hmax, b.at("delta"), b.at("hmax"));
        CHECK(b.at("t0") == std::max(mu * k, st.at("t0")));
        CHECK(b.at("t1") == std::max(mu * k, st.at("t1")));
      }
    }
}

TEST_CASE("configuration space bounds") {
  CHECK(quad(config_bounds(2, false, false, 1)) == std::array<Int, 4>{2, 6, 9, 16});
  CHECK(quad(config_bounds(3, true, false, 2)) == std::array<Int, 4>{2, 4, 7, 12});
  CHECK(quad(config_bounds(3, false, true, 2)) == std::array<Int, 4>{2, 0, 3, 4});
  CHECK_THROWS_AS(config_bounds(1, false, false, 1), InputError);
  // the configuration bounds are the semi-induced ones with d - 1 = lambda
  for (Int dim = 2; dim <= 5; ++dim)
    for (bool o : {false, true})
      for (Int k = 0; k <= 8; ++k)
        CHECK(quad(config_bounds(dim, o, false, k)) == quad(typeA_semiinduced(dim == 2 ? 2 : 1, o ? 2 : 1, k)));
}

TEST_CASE("surface t0 bound: max(0, 10k - 1) agrees with max(2k, 10k - 1)") {
  for (Int k = 0; k <= 200; ++k) CHECK(config_bounds(2, false, false, k).at("t0") == std::max<Int>(0, 10 * k - 1));
}

TEST_CASE("growth bounds for complexes") {
  CHECK(quad(typeB_growth(0, 0, 5)) == std::array<Int, 4>{0, 0, 1, 2});
  CHECK(typeB_step(2, 4, 0) == 6);
  for (Int a = 0; a <= 4; ++a)
    for (Int b = 0; b <= 4; ++b) {
      // hmax by iterating the one-step recursion with t_k = a k + b
      Int h = 0;
      for (Int k = 0; k <= 15; ++k) {
        h = typeB_step(a * k + b, a * (k + 1) + b, h);
        auto r = typeB_growth(a, b, k);
        CHECK(r.at("hmax") == h);
        CHECK(r.at("hmax") == a * (k + 1) * (k + 1) + 2 * b * (k + 1));
        auto st = star_bounds(StarMode::from_delta_hmax, r.at("delta"), r.at("hmax"));
        CHECK(r.at("t0") == st.at("t0"));
        CHECK(r.at("t1") == st.at("t1"));
      }
    }
}

TEST_CASE("congruence subgroup bounds") {
  CHECK(quad(congruence_bounds(0, 1)) == std::array<Int, 4>{2, 8, 11, 20});
  CHECK(quad(congruence_bounds(1, 0)) == std::array<Int, 4>{1, 4, 6, 11});
  CHECK(quad(congruence_bounds(0, 2)) == std::array<Int, 4>{4, 18, 23, 42});
  for (Int d = 0; d <= 5; ++d)
    for (Int k = 0; k <= 20; ++k) CHECK(quad(typeB_growth(2, d, k)) == quad(congruence_bounds(d, k)));
}

TEST_CASE("homology of a complex and its shift") {
  // F(1) --d--> F(0) sending the generator to the degree-1 element: H_0 = coker, H_1 = ker
  const auto B = fi::constant(2, 5);
  fi::FreeSpec s{{1}};
  const auto f = fi::free_map(s, B, {{1}});
  fi::FIComplexWindow C;
  C.jmin = 0;
  C.jmax = 1;
  C.modules = {B, f.source};
  C.differentials = {f.maps};
  const auto H0 = fi::complex_homology(C, 0), H1 = fi::complex_homology(C, 1);
  for (int n = 0; n <= 5; ++n) {
    CHECK(H0.dim(n) == (n == 0 ? 1u : 0u));
    CHECK(H1.dim(n) == (n == 0 ? 0u : static_cast<std::size_t>(n - 1)));
  }
  const auto S = fi::shift(C);
  CHECK(S.width() == 4);
  CHECK(fi::validate(S).pass);
  CHECK(fi::complex_homology(S, 0).dim(0) == 0);
}

TEST_CASE("the standard audit finds no violations") {
  AuditConfig cfg;
  auto r = audit(cfg);
  INFO(to_json(r).dump());
  CHECK(r.violations.empty());
  CHECK(r.instances >= 100);
  CHECK(r.checks > 500);
  CHECK(r.instances + r.skipped == cfg.modules + cfg.maps + cfg.complexes);
}

TEST_CASE("audit is deterministic and independent of thread count") {
  AuditConfig cfg;
  cfg.modules = 8;
  cfg.maps = 4;
  cfg.complexes = 4;
  cfg.threads = 1;
  auto a = audit(cfg);
  cfg.threads = 3;
  auto b = audit(cfg);
  CHECK(to_json(a) == to_json(b));
  cfg.seed = 99;
  CHECK(audit(cfg).checks > 0);
  cfg.primes = {4};
  CHECK_THROWS_AS(audit(cfg), InputError);
}
