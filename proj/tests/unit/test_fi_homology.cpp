#include <catch_amalgamated.hpp>

#include "fistab/fi/construct.hpp"
#include "fistab/fi/functors.hpp"
#include "fistab/homology/hyper.hpp"
#include "fistab/homology/invariants.hpp"
#include "fistab/homology/koszul.hpp"
#include "oracles/koszul_oracle.hpp"

using namespace fistab;
using namespace fistab::fi;
using namespace fistab::homology;

namespace {

std::vector<TruncatedFIModule> random_modules(int count, int N) {
  std::vector<TruncatedFIModule> out;
  for (int s = 0; s < count; ++s) {
    RandomPresentedSpec spec{static_cast<std::uint64_t>(100 + s), s % 2 ? 3u : 2u, 1 + s % 2, 2 + s % 2, N, 2, 2};
    out.push_back(random_presented(spec));
  }
  return out;
}

using Dims = std::vector<std::size_t>;

}  // namespace

TEST_CASE("Koszul homology of the torsion point at degree 0") {
  auto T = fi_homology_table(torsion_point(2, 0, 4), 2);
  CHECK(T.dims[0] == Dims{1, 0, 0, 0, 0});
  CHECK(T.dims[1] == Dims{0, 1, 0, 0, 0});
  CHECK(T.dims[2] == Dims{0, 0, 1, 0, 0});
  auto pd = presentation_degrees(torsion_point(2, 0, 4));
  CHECK(pd.t0 == 0);
  CHECK(pd.t1 == 1);
}

TEST_CASE("Koszul homology agrees with the slow oracle") {
  auto mods = random_modules(6, 5);
  mods.push_back(torsion_point(3, 2, 5));
  mods.push_back(induced(fb_sign(3, 2), 5));
  for (const auto& M : mods) {
    auto T = fi_homology_table(M, 3);
    for (int n = 0; n <= M.width(); ++n) {
      auto h = oracle::koszul_homology(M, n, 3);
      for (int i = 0; i <= 3; ++i) CHECK(T.dims[i][n] == h[i]);
    }
  }
}

TEST_CASE("free and induced modules have homology only in degree 0") {
  auto F = free_module(2, 2, 6);
  auto T = fi_homology_table(F, 3);
  CHECK(T.dims[0] == Dims{0, 0, 2, 0, 0, 0, 0});
  for (int i = 1; i <= 3; ++i) CHECK(T.degree(i) == -1);
  for (const auto& V : {fb_trivial(3, 1), fb_sign(3, 3), fb_direct_sum(fb_regular(2, 1), fb_trivial(2, 2))}) {
    auto r = is_semi_induced_window(induced(V, 6));
    CHECK(r.semi_induced);
    CHECK_FALSE(r.first_failure.has_value());
  }
  auto bad = is_semi_induced_window(torsion_point(2, 0, 3));
  CHECK_FALSE(bad.semi_induced);
  CHECK(bad.first_failure == std::make_pair(1, 1));
}

TEST_CASE("the two presentation-degree routes agree") {
  for (const auto& M : random_modules(12, 6)) {
    auto pd = presentation_degrees(M);  // throws on disagreement
    auto T = fi_homology_table(M, 1);
    CHECK(pd.h0 == T.dims[0]);
    CHECK(pd.h1 == T.dims[1]);
    CHECK(pd.t0 == generation_degree(M));
  }
}

TEST_CASE("presentations bound the observed degrees") {
  for (int s = 0; s < 10; ++s) {
    RandomPresentedSpec spec{static_cast<std::uint64_t>(7 + s), s % 2 ? 2u : 3u, 1 + s % 3, 2 + s % 2, 6, 2, 2};
    auto pd = presentation_degrees(random_presented(spec));
    CHECK(pd.t0 <= spec.gen_deg);
    CHECK(pd.t1 <= std::max(spec.rel_deg, spec.gen_deg));
  }
}

TEST_CASE("shifting does not raise observed homological degrees") {
  for (const auto& M : random_modules(8, 6)) {
    auto T = fi_homology_table(M, 2);
    auto S = fi_homology_table(shift(M, 1), 2);
    for (int i = 0; i <= 2; ++i) CHECK(S.degree(i) <= T.degree(i));
  }
}

TEST_CASE("stable degree of basic modules") {
  struct Case {
    TruncatedFIModule M;
    Degree delta;
  };
  std::vector<Case> cases{{constant(2, 6), 0},
                          {induced(fb_trivial(3, 1), 6), 1},
                          {torsion_point(2, 0, 6), -1},
                          {free_module(2, 2, 7), 2},
                          {direct_sum(torsion_point(2, 3, 7), induced(fb_trivial(2, 1), 7)), 1}};
  for (const auto& c : cases) {
    auto d = stable_degree(c.M);
    CHECK(d.value == c.delta);
    CHECK(d.certified);
  }
}

TEST_CASE("local degree of basic modules") {
  auto induced_case = induced(fb_trivial(2, 1), 6);
  auto d = stable_degree(induced_case);
  auto h = local_degree(induced_case, d);
  CHECK(h.value == -1);
  CHECK(h.certified);
  auto tp = torsion_point(2, 0, 5);
  CHECK(local_degree(tp, stable_degree(tp)).value == 0);
  auto mixed = direct_sum(torsion_point(3, 2, 7), induced(fb_trivial(3, 1), 7));
  auto hm = local_degree(mixed, stable_degree(mixed));
  CHECK(hm.value == 2);
  CHECK(hm.certified);
}

TEST_CASE("polynomial fits") {
  auto f1 = polynomial_fit(induced(fb_trivial(2, 1), 6), 1, -1, true);
  CHECK(f1.coeffs == std::vector<std::int64_t>{0, 1});
  CHECK(f1.onset == 0);
  auto f2 = polynomial_fit(free_module(3, 2, 6), 2, -1, true);
  CHECK(f2.coeffs == std::vector<std::int64_t>{0, 0, 2});
  auto f0 = polynomial_fit(direct_sum(torsion_point(2, 1, 5), constant(2, 5)), 0, 1, true);
  CHECK(f0.coeffs == std::vector<std::int64_t>{1});
  CHECK(f0.onset == 2);
  CHECK_THROWS_AS(polynomial_fit(direct_sum(torsion_point(2, 1, 5), constant(2, 5)), 0, -1, true), NoFit);
}

TEST_CASE("hyperhomology of simple complexes") {
  auto M = induced(fb_trivial(2, 1), 5);
  FIComplexWindow id;
  id.jmin = 0;
  id.jmax = 1;
  id.modules = {M, M};
  std::vector<DenseMatrix> ones;
  for (int n = 0; n <= 5; ++n) ones.push_back(DenseMatrix::identity(M.dim(n), 2));
  id.differentials = {ones};
  CHECK(validate(id).pass);
  auto T = hyper_fi_homology(id, 3);
  for (const auto& row : T.dims)
    for (auto x : row) CHECK(x == 0);

  // a one-term complex reproduces FI-homology
  for (const auto& R : random_modules(3, 5)) {
    FIComplexWindow single;
    single.jmin = single.jmax = 0;
    single.modules = {R};
    auto H = hyper_fi_homology(single, 2);
    auto K = fi_homology_table(R, 2);
    CHECK(H.dims == K.dims);
  }

  // placing a module in degree 1 shifts the rows
  FIComplexWindow lifted;
  lifted.jmin = 0;
  lifted.jmax = 1;
  auto tp = torsion_point(2, 0, 4);
  lifted.modules = {TruncatedFIModule(2, 4), tp};
  std::vector<DenseMatrix> zeros;
  for (int n = 0; n <= 4; ++n) zeros.push_back(DenseMatrix(0, tp.dim(n), 2));
  lifted.differentials = {zeros};
  auto L = hyper_fi_homology(lifted, 3);
  CHECK(L.dims[0] == Dims{0, 0, 0, 0, 0});
  CHECK(L.dims[1] == Dims{1, 0, 0, 0, 0});
  CHECK(L.dims[2] == Dims{0, 1, 0, 0, 0});
}

TEST_CASE("invariant report") {
  auto r = invariants(direct_sum(torsion_point(2, 0, 6), induced(fb_trivial(2, 1), 6)));
  CHECK(r.t0 == 1);
  CHECK(r.t1 == 1);
  CHECK(r.delta.value == 1);
  CHECK(r.hmax.value == 0);
  CHECK(r.certified);
  auto j = to_json(r);
  CHECK(j["t0"] == 1);
  CHECK(j["trust_range"] == 6);
}
